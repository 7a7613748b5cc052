//! Shift, phase and Heisenberg-Weyl operators for a prime dimension.
//!
//! Phases are tracked exactly as integer exponents: powers of `i` (mod 4)
//! for qubits, where `P(a1,a2) = i^(a1 a2) X^a1 Z^a2`, and powers of
//! `omega = exp(2 pi i / d)` (mod d) for odd primes, where
//! `P(a1,a2) = X^a1 Z^a2`.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::operator::DenseOperator;
use crate::error::{Error, Result};

/// A prime dimension `d >= 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct PrimeDim(u32);

impl PrimeDim {
    pub fn new(d: u32) -> Result<Self> {
        if d < 2 {
            return Err(Error::NotPrime(d));
        }
        let mut f = 2u32;
        while f * f <= d {
            if d % f == 0 {
                return Err(Error::NotPrime(d));
            }
            f += 1;
        }
        Ok(PrimeDim(d))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn size(self) -> usize {
        self.0 as usize
    }

    pub fn is_qubit(self) -> bool {
        self.0 == 2
    }

    /// Modulus of the global-phase exponent: 4 for qubits, `d` otherwise.
    pub fn phase_modulus(self) -> u32 {
        if self.is_qubit() {
            4
        } else {
            self.0
        }
    }

    /// `exp(2 pi i k / n)`, exact at quarter turns.
    fn root(k: u32, n: u32) -> Complex64 {
        let k = k % n;
        if (4 * k) % n == 0 {
            return match (4 * k) / n {
                0 => Complex64::new(1.0, 0.0),
                1 => Complex64::new(0.0, 1.0),
                2 => Complex64::new(-1.0, 0.0),
                _ => Complex64::new(0.0, -1.0),
            };
        }
        Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64)
    }

    /// `omega^k`.
    pub fn omega_pow(self, k: u32) -> Complex64 {
        Self::root(k, self.0)
    }

    /// The scalar named by a phase exponent: `i^k` for qubits, `omega^k` otherwise.
    pub fn phase_factor(self, k: u32) -> Complex64 {
        Self::root(k, self.phase_modulus())
    }

    /// Exponent of `omega^k` expressed in phase-exponent units.
    pub(crate) fn omega_to_phase(self, k: u32) -> u32 {
        if self.is_qubit() {
            (2 * k) % 4
        } else {
            k % self.0
        }
    }
}

impl TryFrom<u32> for PrimeDim {
    type Error = Error;

    fn try_from(d: u32) -> Result<Self> {
        PrimeDim::new(d)
    }
}

impl From<PrimeDim> for u32 {
    fn from(d: PrimeDim) -> u32 {
        d.0
    }
}

impl fmt::Display for PrimeDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A point `(a1, a2)` of `Z_d x Z_d` together with a global phase exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PauliLabel {
    pub a1: u32,
    pub a2: u32,
    pub phase: u32,
}

impl PauliLabel {
    pub fn new(d: PrimeDim, a1: u32, a2: u32, phase: u32) -> Result<Self> {
        let dd = d.get();
        if a1 >= dd {
            return Err(Error::out_of_range("a1", a1 as u64, 0, dd as u64 - 1));
        }
        if a2 >= dd {
            return Err(Error::out_of_range("a2", a2 as u64, 0, dd as u64 - 1));
        }
        let m = d.phase_modulus();
        if phase >= m {
            return Err(Error::out_of_range("phase exponent", phase as u64, 0, m as u64 - 1));
        }
        Ok(PauliLabel { a1, a2, phase })
    }

    /// Phase-free label.
    pub const fn point(a1: u32, a2: u32) -> Self {
        PauliLabel { a1, a2, phase: 0 }
    }

    pub const fn identity() -> Self {
        PauliLabel::point(0, 0)
    }

    pub fn without_phase(self) -> Self {
        PauliLabel::point(self.a1, self.a2)
    }

    pub fn with_phase_shift(self, d: PrimeDim, shift: u32) -> Self {
        PauliLabel {
            phase: (self.phase + shift) % d.phase_modulus(),
            ..self
        }
    }
}

impl fmt::Display for PauliLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P({},{})^phase{}", self.a1, self.a2, self.phase)
    }
}

/// `X|j> = |j+1 mod d>`.
pub fn make_shift(d: PrimeDim) -> DenseOperator {
    let n = d.size();
    DenseOperator::from_fn(n, |i, j| {
        if i == (j + 1) % n {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// `Z = diag(1, omega, ..., omega^(d-1))`.
pub fn make_phase(d: PrimeDim) -> DenseOperator {
    DenseOperator::from_fn(d.size(), |i, j| {
        if i == j {
            d.omega_pow(i as u32)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Dense matrix of a labelled Heisenberg-Weyl operator.
pub fn make_pauli(d: PrimeDim, label: PauliLabel) -> DenseOperator {
    let n = d.size();
    let dd = d.get();
    // X^a1 Z^a2 |j> = omega^(a2 j) |j + a1>
    let mut scalar = d.phase_factor(label.phase);
    if d.is_qubit() {
        scalar *= d.phase_factor(label.a1 * label.a2);
    }
    DenseOperator::from_fn(n, |i, j| {
        if i == (j + label.a1 as usize) % n {
            scalar * d.omega_pow((label.a2 * j as u32) % dd)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Label of the product `P(l1) P(l2)`, phase included.
pub fn pauli_compose(d: PrimeDim, l1: PauliLabel, l2: PauliLabel) -> PauliLabel {
    let dd = d.get();
    let c1 = (l1.a1 + l2.a1) % dd;
    let c2 = (l1.a2 + l2.a2) % dd;
    let phase = if d.is_qubit() {
        // i^(p+q) i^(a1a2) i^(b1b2) (-1)^(a2 b1) = i^r i^(c1c2)
        let r = l1.phase + l2.phase + l1.a1 * l1.a2 + l2.a1 * l2.a2 + 2 * l1.a2 * l2.a1;
        (r + 4 - (c1 * c2) % 4) % 4
    } else {
        // Z^a2 X^b1 = omega^(a2 b1) X^b1 Z^a2
        (l1.phase + l2.phase + l1.a2 * l2.a1) % dd
    };
    PauliLabel { a1: c1, a2: c2, phase }
}

/// Label of `P(l)^-1`.
pub fn pauli_inverse(d: PrimeDim, l: PauliLabel) -> PauliLabel {
    let dd = d.get();
    let m = d.phase_modulus();
    let neg = PauliLabel::point((dd - l.a1) % dd, (dd - l.a2) % dd);
    let prod = pauli_compose(d, l, neg);
    PauliLabel {
        phase: (m - prod.phase) % m,
        ..neg
    }
}

/// `P(l)^n` by repeated composition.
pub fn pauli_pow(d: PrimeDim, l: PauliLabel, n: u32) -> PauliLabel {
    (0..n).fold(PauliLabel::identity(), |acc, _| pauli_compose(d, acc, l))
}

/// Symplectic form `<a, b> = a1 b2 - a2 b1 mod d`; `P(a) P(b) = omega^<..> P(b) P(a)`.
pub fn symplectic_form(d: PrimeDim, a: PauliLabel, b: PauliLabel) -> u32 {
    let dd = d.get() as i64;
    let v = (a.a2 as i64 * b.a1 as i64 - a.a1 as i64 * b.a2 as i64).rem_euclid(dd);
    v as u32
}

/// All `d^2` phase-free labels, `a1` major.
pub fn all_points(d: PrimeDim) -> impl Iterator<Item = PauliLabel> {
    let dd = d.get();
    (0..dd).flat_map(move |a1| (0..dd).map(move |a2| PauliLabel::point(a1, a2)))
}
