//! Mutually unbiased bases, stabilizer states and the stabilizer polytope.

pub mod mub;
pub mod polytope;

pub use mub::{
    mub_eigenvalue, mub_operator, mub_projectors, overlap, stabilizer_state, stabilizer_vertices,
    MubBasis, StabilizerStateId,
};
pub use polytope::{
    magic_l1, magic_l1_lp, polytope_membership, MagicValue, PolytopeCertificate, Witness,
    MAGIC_MEASURE_NAME,
};
