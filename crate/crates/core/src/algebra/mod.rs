//! Heisenberg-Weyl operators and the Clifford group for a single prime qudit.

pub mod clifford;
pub mod operator;
pub mod pauli;

pub use clifford::{
    clifford_enumerate_projective, clifford_generators, is_clifford, CliffordAction,
    CliffordElement, CliffordVerdict, ConjugationTable, Generator, GeneratorImage,
};
pub use operator::{bloch_state, bloch_vector, DenseOperator};
pub use pauli::{
    make_pauli, make_phase, make_shift, pauli_compose, pauli_inverse, pauli_pow, PauliLabel,
    PrimeDim,
};
