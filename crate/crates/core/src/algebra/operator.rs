//! Dense complex operators on a single qudit.

use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::ValidationError;

/// A square complex matrix in double precision.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "OperatorRepr", into = "OperatorRepr")]
pub struct DenseOperator {
    mat: DMatrix<Complex64>,
}

/// Wire form: `{ "dim": d, "re": [[...]], "im": [[...]] }`, row-major.
#[derive(Serialize, Deserialize)]
struct OperatorRepr {
    dim: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl TryFrom<OperatorRepr> for DenseOperator {
    type Error = ValidationError;

    fn try_from(repr: OperatorRepr) -> Result<Self, Self::Error> {
        let d = repr.dim;
        if repr.re.len() != d || repr.im.len() != d {
            return Err(ValidationError::DimensionMismatch {
                expected: d,
                found: repr.re.len().max(repr.im.len()),
            });
        }
        for row in repr.re.iter().chain(repr.im.iter()) {
            if row.len() != d {
                return Err(ValidationError::NotSquare {
                    rows: d,
                    cols: row.len(),
                });
            }
        }
        let mat = DMatrix::from_fn(d, d, |i, j| Complex64::new(repr.re[i][j], repr.im[i][j]));
        if mat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(ValidationError::NonFinite);
        }
        Ok(DenseOperator { mat })
    }
}

impl From<DenseOperator> for OperatorRepr {
    fn from(op: DenseOperator) -> Self {
        let d = op.dim();
        OperatorRepr {
            dim: d,
            re: (0..d).map(|i| (0..d).map(|j| op.mat[(i, j)].re).collect()).collect(),
            im: (0..d).map(|i| (0..d).map(|j| op.mat[(i, j)].im).collect()).collect(),
        }
    }
}

impl DenseOperator {
    pub fn from_matrix(mat: DMatrix<Complex64>) -> Result<Self, ValidationError> {
        if mat.nrows() != mat.ncols() {
            return Err(ValidationError::NotSquare {
                rows: mat.nrows(),
                cols: mat.ncols(),
            });
        }
        Ok(DenseOperator { mat })
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        DenseOperator {
            mat: DMatrix::from_fn(dim, dim, f),
        }
    }

    /// Row-major real/imaginary parts.
    pub fn from_parts(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<Self, ValidationError> {
        DenseOperator::try_from(OperatorRepr {
            dim: re.len(),
            re: re.to_vec(),
            im: im.to_vec(),
        })
    }

    pub fn identity(dim: usize) -> Self {
        DenseOperator {
            mat: DMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        DenseOperator {
            mat: DMatrix::zeros(dim, dim),
        }
    }

    /// `|v><v|` for a (not necessarily normalized) vector.
    pub fn projector(v: &DVector<Complex64>) -> Self {
        DenseOperator {
            mat: v * v.adjoint(),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.mat[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        DenseOperator {
            mat: self.mat.adjoint(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        DenseOperator {
            mat: self.mat.map(|z| z * c),
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.mat.trace()
    }

    /// `Tr(A^dagger B)`.
    pub fn hs_inner(&self, other: &DenseOperator) -> Complex64 {
        self.mat
            .iter()
            .zip(other.mat.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = DenseOperator::identity(self.dim());
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// `U A U^dagger`.
    pub fn conjugate_by(&self, u: &DenseOperator) -> Self {
        &(u * self) * &u.adjoint()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &DenseOperator) -> f64 {
        self.mat
            .iter()
            .zip(other.mat.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &DenseOperator, tol: f64) -> bool {
        self.dim() == other.dim() && self.max_abs_diff(other) <= tol
    }

    pub fn hermitian_deviation(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn unitary_deviation(&self) -> f64 {
        (&self.adjoint() * self).max_abs_diff(&DenseOperator::identity(self.dim()))
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let herm = (&self.mat + self.mat.adjoint()).map(|z| z * 0.5);
        let mut vals: Vec<f64> = herm.symmetric_eigenvalues().iter().copied().collect();
        vals.sort_by(f64::total_cmp);
        vals
    }

    pub fn validate_unitary(&self, tol: f64) -> Result<(), ValidationError> {
        let deviation = self.unitary_deviation();
        if deviation > tol {
            return Err(ValidationError::NotUnitary { deviation });
        }
        Ok(())
    }

    pub fn validate_hermitian(&self, tol: f64) -> Result<(), ValidationError> {
        if self.mat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(ValidationError::NonFinite);
        }
        let deviation = self.hermitian_deviation();
        if deviation > tol {
            return Err(ValidationError::NotHermitian { deviation });
        }
        Ok(())
    }

    /// Hermitian, positive semi-definite and unit trace, all within `tol`.
    pub fn validate_density(&self, tol: f64) -> Result<(), ValidationError> {
        self.validate_hermitian(tol)?;
        let trace = self.trace();
        if (trace.re - 1.0).abs() > tol || trace.im.abs() > tol {
            return Err(ValidationError::TraceNotOne { trace: trace.re });
        }
        let min_eigenvalue = self.hermitian_eigenvalues()[0];
        if min_eigenvalue < -tol {
            return Err(ValidationError::NotPositive { min_eigenvalue });
        }
        Ok(())
    }

    /// Hermitian with spectrum in `[0, 1]`, within `tol`.
    pub fn validate_effect(&self, tol: f64) -> Result<(), ValidationError> {
        self.validate_hermitian(tol)?;
        let eig = self.hermitian_eigenvalues();
        let min_eigenvalue = eig[0];
        let max_eigenvalue = eig[eig.len() - 1];
        if min_eigenvalue < -tol {
            return Err(ValidationError::NotPositive { min_eigenvalue });
        }
        if max_eigenvalue > 1.0 + tol {
            return Err(ValidationError::EffectAboveIdentity { max_eigenvalue });
        }
        Ok(())
    }

    /// Born probability `Re Tr(rho E)`.
    pub fn born(&self, effect: &DenseOperator) -> f64 {
        // Tr(AB) = sum_ij A_ij B_ji
        let d = self.dim();
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..d {
            for j in 0..d {
                acc += self.mat[(i, j)] * effect.mat[(j, i)];
            }
        }
        acc.re
    }

    /// Real coordinates of the Hermitian part with `Tr(AB) = coords(A) . coords(B)`:
    /// the diagonal, then `sqrt2 Re` and `sqrt2 Im` of each upper entry.
    pub fn real_coords(&self) -> Vec<f64> {
        let n = self.dim();
        let s = std::f64::consts::SQRT_2;
        let mut out = Vec::with_capacity(n * n);
        out.extend((0..n).map(|i| self.mat[(i, i)].re));
        for i in 0..n {
            for j in i + 1..n {
                let z = (self.mat[(i, j)] + self.mat[(j, i)].conj()) / 2.0;
                out.push(s * z.re);
                out.push(s * z.im);
            }
        }
        out
    }

    /// Inverse of [`DenseOperator::real_coords`].
    pub fn from_real_coords(n: usize, c: &[f64]) -> Result<Self, ValidationError> {
        if c.len() != n * n {
            return Err(ValidationError::DimensionMismatch {
                expected: n * n,
                found: c.len(),
            });
        }
        let s = std::f64::consts::SQRT_2;
        let mut mat = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
        for i in 0..n {
            mat[(i, i)] = Complex64::new(c[i], 0.0);
        }
        let mut idx = n;
        for i in 0..n {
            for j in i + 1..n {
                let z = Complex64::new(c[idx] / s, c[idx + 1] / s);
                mat[(i, j)] = z;
                mat[(j, i)] = z.conj();
                idx += 2;
            }
        }
        Ok(DenseOperator { mat })
    }
}

impl Mul for &DenseOperator {
    type Output = DenseOperator;

    fn mul(self, rhs: &DenseOperator) -> DenseOperator {
        DenseOperator {
            mat: &self.mat * &rhs.mat,
        }
    }
}

impl Add for &DenseOperator {
    type Output = DenseOperator;

    fn add(self, rhs: &DenseOperator) -> DenseOperator {
        DenseOperator {
            mat: &self.mat + &rhs.mat,
        }
    }
}

impl Sub for &DenseOperator {
    type Output = DenseOperator;

    fn sub(self, rhs: &DenseOperator) -> DenseOperator {
        DenseOperator {
            mat: &self.mat - &rhs.mat,
        }
    }
}

/// Qubit state `(I + n.sigma)/2` for Bloch vector `[nx, ny, nz]`.
pub fn bloch_state(n: [f64; 3]) -> Result<DenseOperator, ValidationError> {
    let norm = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
    if !norm.is_finite() {
        return Err(ValidationError::NonFinite);
    }
    if norm > 1.0 + 1e-12 {
        return Err(ValidationError::BlochNorm { norm });
    }
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let mat = DMatrix::from_row_slice(
        2,
        2,
        &[
            c((1.0 + n[2]) / 2.0, 0.0),
            c(n[0] / 2.0, -n[1] / 2.0),
            c(n[0] / 2.0, n[1] / 2.0),
            c((1.0 - n[2]) / 2.0, 0.0),
        ],
    );
    Ok(DenseOperator { mat })
}

/// Bloch vector `[Tr(rho X), Tr(rho Y), Tr(rho Z)]` of a qubit operator.
pub fn bloch_vector(rho: &DenseOperator) -> Option<[f64; 3]> {
    if rho.dim() != 2 {
        return None;
    }
    let m = rho.matrix();
    Some([
        2.0 * m[(1, 0)].re,
        2.0 * m[(1, 0)].im,
        (m[(0, 0)] - m[(1, 1)]).re,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape_is_dim_re_im() {
        let op = bloch_state([0.0, 1.0, 0.0]).unwrap();
        let v = serde_json::to_value(&op).unwrap();
        assert_eq!(v["dim"], 2);
        assert_eq!(v["re"][0][0], 0.5);
        assert_eq!(v["im"][1][0], 0.5);
        let back: DenseOperator = serde_json::from_value(v).unwrap();
        assert_eq!(back, op);
    }

    #[test]
    fn ragged_json_rejected() {
        let bad = r#"{"dim":2,"re":[[1,0],[0]],"im":[[0,0],[0,0]]}"#;
        assert!(serde_json::from_str::<DenseOperator>(bad).is_err());
    }

    #[test]
    fn density_validation_reports_the_failed_invariant() {
        let not_psd = DenseOperator::from_parts(&[vec![1.2, 0.0], vec![0.0, -0.2]], &[
            vec![0.0; 2],
            vec![0.0; 2],
        ])
        .unwrap();
        match not_psd.validate_density(1e-9) {
            Err(ValidationError::NotPositive { min_eigenvalue }) => {
                assert!((min_eigenvalue + 0.2).abs() < 1e-12)
            }
            other => panic!("unexpected {other:?}"),
        }
        let bad_trace = DenseOperator::identity(2);
        assert!(matches!(
            bad_trace.validate_density(1e-9),
            Err(ValidationError::TraceNotOne { .. })
        ));
        let non_herm =
            DenseOperator::from_parts(&[vec![0.5, 0.3], vec![0.0, 0.5]], &[vec![0.0; 2], vec![0.0; 2]])
                .unwrap();
        assert!(matches!(
            non_herm.validate_density(1e-9),
            Err(ValidationError::NotHermitian { .. })
        ));
    }

    #[test]
    fn bloch_roundtrip() {
        let n = [0.3, -0.4, 0.5];
        let rho = bloch_state(n).unwrap();
        rho.validate_density(1e-12).unwrap();
        let back = bloch_vector(&rho).unwrap();
        for i in 0..3 {
            assert!((back[i] - n[i]).abs() < 1e-15);
        }
        assert!(matches!(
            bloch_state([1.0, 1.0, 0.0]),
            Err(ValidationError::BlochNorm { .. })
        ));
    }
}
