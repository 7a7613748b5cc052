//! The `d + 1` mutually unbiased bases and the `d(d+1)` pure stabilizer states.
//!
//! Basis `k = 1` is the eigenbasis of `P(0,1)`, basis `k >= 2` that of
//! `P(1, k-2)`. Within a basis, projector `j` is the eigenvector with
//! eigenvalue `omega^j` (`(-1)^j` for qubits), normalized so that its
//! lowest-index nonzero component is real and positive.

use std::fmt;

use nalgebra::DVector;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{make_pauli, DenseOperator, PauliLabel, PrimeDim};
use crate::error::{Error, Result};

/// Names the pure stabilizer state `psi^j_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StabilizerStateId {
    /// Basis index in `1..=d+1`.
    pub k: u32,
    /// Eigenvalue index in `0..d`.
    pub j: u32,
}

impl StabilizerStateId {
    pub fn new(d: PrimeDim, k: u32, j: u32) -> Result<Self> {
        let dd = d.get();
        if k < 1 || k > dd + 1 {
            return Err(Error::out_of_range("basis index k", k as u64, 1, dd as u64 + 1));
        }
        if j >= dd {
            return Err(Error::out_of_range("eigenvalue index j", j as u64, 0, dd as u64 - 1));
        }
        Ok(StabilizerStateId { k, j })
    }

    /// Cell number `r = d(k-1) + j + 1`.
    pub fn cell(self, d: PrimeDim) -> u32 {
        d.get() * (self.k - 1) + self.j + 1
    }

    pub fn from_cell(d: PrimeDim, r: u32) -> Result<Self> {
        let dd = d.get();
        let max = dd * (dd + 1);
        if r < 1 || r > max {
            return Err(Error::out_of_range("cell index r", r as u64, 1, max as u64));
        }
        Ok(StabilizerStateId {
            k: (r - 1) / dd + 1,
            j: (r - 1) % dd,
        })
    }

    /// All ids in cell order.
    pub fn all(d: PrimeDim) -> impl Iterator<Item = StabilizerStateId> {
        let dd = d.get();
        (1..=dd + 1).flat_map(move |k| (0..dd).map(move |j| StabilizerStateId { k, j }))
    }
}

impl fmt::Display for StabilizerStateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "psi^{}_{}", self.j, self.k)
    }
}

/// Heisenberg-Weyl operator whose eigenbasis is MUB `k`.
pub fn mub_operator(d: PrimeDim, k: u32) -> Result<PauliLabel> {
    let dd = d.get();
    match k {
        1 => Ok(PauliLabel::point(0, 1)),
        k if k >= 2 && k <= dd + 1 => Ok(PauliLabel::point(1, k - 2)),
        _ => Err(Error::out_of_range("basis index k", k as u64, 1, dd as u64 + 1)),
    }
}

/// Eigenvalue attached to index `j`.
pub fn mub_eigenvalue(d: PrimeDim, j: u32) -> Complex64 {
    if d.is_qubit() {
        if j % 2 == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(-1.0, 0.0)
        }
    } else {
        d.omega_pow(j)
    }
}

#[derive(Clone, Debug)]
pub struct MubBasis {
    pub k: u32,
    pub operator: PauliLabel,
    pub vectors: Vec<DVector<Complex64>>,
    pub projectors: Vec<DenseOperator>,
}

/// Eigenvector of a monomial operator `A` (one nonzero per column) for eigenvalue `lambda`.
fn monomial_eigenvector(
    d: PrimeDim,
    op: &DenseOperator,
    shift: usize,
    lambda: Complex64,
) -> Result<DVector<Complex64>> {
    let n = d.size();
    if shift == 0 {
        // diagonal: a basis vector
        let l = (0..n)
            .find(|&l| (op.get(l, l) - lambda).norm() < 1e-9)
            .ok_or_else(|| Error::Internal("no eigenvector for diagonal MUB operator".into()))?;
        let mut v = DVector::zeros(n);
        v[l] = Complex64::new(1.0, 0.0);
        return Ok(v);
    }
    // A|l> = alpha_l |l + shift>, so alpha_l c_l = lambda c_{l + shift}
    let mut v = DVector::from_element(n, Complex64::new(0.0, 0.0));
    let mut l = 0usize;
    v[0] = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
    for _ in 0..n - 1 {
        let next = (l + shift) % n;
        v[next] = op.get(next, l) * v[l] / lambda;
        l = next;
    }
    let closing = op.get((l + shift) % n, l) * v[l] / lambda;
    if (closing - v[0]).norm() > 1e-9 {
        return Err(Error::Internal(format!(
            "degenerate eigen-decomposition for eigenvalue {lambda}"
        )));
    }
    Ok(v)
}

fn basis(d: PrimeDim, k: u32) -> Result<MubBasis> {
    let operator = mub_operator(d, k)?;
    let op = make_pauli(d, operator);
    let mut vectors = Vec::with_capacity(d.size());
    for j in 0..d.get() {
        let lambda = mub_eigenvalue(d, j);
        let v = monomial_eigenvector(d, &op, operator.a1 as usize, lambda)?;
        if (&op.matrix().clone() * &v - &v * lambda).norm() > 1e-9 {
            return Err(Error::Internal(format!("eigenvector check failed for k={k} j={j}")));
        }
        vectors.push(v);
    }
    let projectors = vectors.iter().map(DenseOperator::projector).collect();
    Ok(MubBasis {
        k,
        operator,
        vectors,
        projectors,
    })
}

/// The `d + 1` MUB eigenbases, in basis order.
pub fn mub_projectors(d: PrimeDim) -> Result<Vec<MubBasis>> {
    (1..=d.get() + 1).map(|k| basis(d, k)).collect()
}

/// Projector `psi^j_k`.
pub fn stabilizer_state(d: PrimeDim, id: StabilizerStateId) -> Result<DenseOperator> {
    let id = StabilizerStateId::new(d, id.k, id.j)?;
    let b = basis(d, id.k)?;
    Ok(b.projectors[id.j as usize].clone())
}

/// All pure stabilizer states in cell order.
pub fn stabilizer_vertices(d: PrimeDim) -> Result<Vec<(StabilizerStateId, DenseOperator)>> {
    let mut out = Vec::with_capacity(d.size() * (d.size() + 1));
    for b in mub_projectors(d)? {
        for (j, p) in b.projectors.into_iter().enumerate() {
            out.push((StabilizerStateId { k: b.k, j: j as u32 }, p));
        }
    }
    Ok(out)
}

/// `Tr(psi^j_k psi^j'_k') = (1/d)(1 - (1-d)^delta(j,j') delta(k,k'))`, exactly.
pub fn overlap(d: PrimeDim, a: StabilizerStateId, b: StabilizerStateId) -> BigRational {
    let dd = BigInt::from(d.get());
    let one = BigRational::one();
    let same_basis = a.k == b.k;
    let inner = if same_basis {
        let base = BigRational::from_integer(BigInt::from(1) - &dd);
        if a.j == b.j {
            base
        } else {
            one.clone()
        }
    } else {
        BigRational::zero()
    };
    (one - inner) / BigRational::from_integer(dd)
}
