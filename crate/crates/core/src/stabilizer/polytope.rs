//! Membership in the stabilizer polytope and the polytope-excess magic measure.
//!
//! Both questions reduce to one linear program over the `d(d+1)` vertices
//! `V_i`: minimize `t >= 0` subject to `sum_i u_i V_i - t I/d = rho`,
//! `u >= 0`. The optimum `t*` is zero exactly on the polytope, and
//! `(rho + t* I/d) / (1 + t*)` is the nearest polytope point along the
//! depolarizing ray. The dual solution supplies a separating functional.

use microlp::{ComparisonOp, OptimizationDirection, Problem};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::mub::{stabilizer_vertices, StabilizerStateId};
use crate::algebra::{bloch_vector, DenseOperator, PrimeDim};
use crate::error::{Error, Result, ValidationError};

pub const MAGIC_MEASURE_NAME: &str = "l1-polytope-excess";

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `rho ~ sum_i w_i V_i`; `residual` is the max entrywise reconstruction error.
    ConvexWeights {
        weights: Vec<(StabilizerStateId, f64)>,
        residual: f64,
    },
    /// `Tr(W V_i) <= vertex_max` for all vertices while `Tr(W rho) = state_value`.
    Separator {
        functional: DenseOperator,
        vertex_max: f64,
        state_value: f64,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolytopeCertificate {
    pub inside: bool,
    pub witness: Witness,
}

impl PolytopeCertificate {
    /// Separation margin for outside verdicts, zero otherwise.
    pub fn margin(&self) -> f64 {
        match &self.witness {
            Witness::ConvexWeights { .. } => 0.0,
            Witness::Separator {
                vertex_max,
                state_value,
                ..
            } => state_value - vertex_max,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MagicValue {
    pub value: f64,
    pub measure_name: String,
}

impl MagicValue {
    fn new(value: f64) -> Self {
        MagicValue {
            value,
            measure_name: MAGIC_MEASURE_NAME.to_string(),
        }
    }
}

struct ExcessSolution {
    t: f64,
    u: Vec<f64>,
}

fn lp_error(e: microlp::Error) -> Error {
    Error::LinearProgram(e.to_string())
}

fn check_state(d: PrimeDim, rho: &DenseOperator) -> Result<()> {
    if rho.dim() != d.size() {
        return Err(Error::invalid(
            "state",
            ValidationError::DimensionMismatch {
                expected: d.size(),
                found: rho.dim(),
            },
        ));
    }
    rho.validate_density(1e-9)
        .map_err(|e| Error::invalid("state", e))
}

fn solve_excess(vertices: &[Vec<f64>], identity: &[f64], target: &[f64]) -> Result<ExcessSolution> {
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let u: Vec<_> = vertices
        .iter()
        .map(|_| lp.add_var(0.0, (0.0, f64::INFINITY)))
        .collect();
    let t = lp.add_var(1.0, (0.0, f64::INFINITY));
    for c in 0..target.len() {
        let mut expr: Vec<_> = u
            .iter()
            .zip(vertices)
            .filter(|(_, v)| v[c] != 0.0)
            .map(|(&var, v)| (var, v[c]))
            .collect();
        if identity[c] != 0.0 {
            expr.push((t, -identity[c]));
        }
        lp.add_constraint(expr, ComparisonOp::Eq, target[c]);
    }
    let sol = lp
        .solve()
        .map_err(lp_error)?
        .into_solution()
        .map_err(|_| Error::LinearProgram("solve interrupted".into()))?;
    Ok(ExcessSolution {
        t: sol.var_value(t).max(0.0),
        u: u.iter().map(|&v| sol.var_value(v).max(0.0)).collect(),
    })
}

/// Dual of the excess program: maximize `Tr(W rho)` s.t. `Tr(W V_i) <= 0`, `Tr(W I/d) >= -1`.
fn solve_separator(vertices: &[Vec<f64>], identity: &[f64], target: &[f64]) -> Result<Vec<f64>> {
    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let y: Vec<_> = target
        .iter()
        .map(|&b| lp.add_var(b, (f64::NEG_INFINITY, f64::INFINITY)))
        .collect();
    for v in vertices {
        let expr: Vec<_> = y.iter().zip(v).map(|(&var, &a)| (var, a)).collect();
        lp.add_constraint(expr, ComparisonOp::Le, 0.0);
    }
    let expr: Vec<_> = y.iter().zip(identity).map(|(&var, &e)| (var, e)).collect();
    lp.add_constraint(expr, ComparisonOp::Ge, -1.0);
    let sol = lp
        .solve()
        .map_err(lp_error)?
        .into_solution()
        .map_err(|_| Error::LinearProgram("solve interrupted".into()))?;
    Ok(y.iter().map(|&v| sol.var_value(v)).collect())
}

struct Geometry {
    ids: Vec<StabilizerStateId>,
    ops: Vec<DenseOperator>,
    coords: Vec<Vec<f64>>,
    identity: Vec<f64>,
}

fn geometry(d: PrimeDim) -> Result<Geometry> {
    let verts = stabilizer_vertices(d)?;
    let coords = verts.iter().map(|(_, v)| v.real_coords()).collect();
    let id = DenseOperator::identity(d.size()).scale(Complex64::new(1.0 / d.get() as f64, 0.0));
    let (ids, ops) = verts.into_iter().unzip();
    Ok(Geometry {
        ids,
        ops,
        coords,
        identity: id.real_coords(),
    })
}

/// Decides `rho in St_d` and returns convex weights or a separating functional.
///
/// Every certificate is re-checked by substitution; a separator whose
/// verified margin is not positive is reported as [`Error::IllConditioned`].
pub fn polytope_membership(d: PrimeDim, rho: &DenseOperator, tol: f64) -> Result<PolytopeCertificate> {
    check_state(d, rho)?;
    let g = geometry(d)?;
    let target = rho.real_coords();
    let sol = solve_excess(&g.coords, &g.identity, &target)?;
    if sol.t <= tol {
        let total: f64 = sol.u.iter().sum();
        if total <= 0.0 {
            return Err(Error::IllConditioned("zero total weight".into()));
        }
        let weights: Vec<f64> = sol.u.iter().map(|w| w / total).collect();
        let mut recon = DenseOperator::zeros(d.size());
        for (w, v) in weights.iter().zip(&g.ops) {
            recon = &recon + &v.scale(Complex64::new(*w, 0.0));
        }
        let residual = recon.max_abs_diff(rho);
        if residual > tol.max(1e-9) {
            return Err(Error::IllConditioned(format!(
                "convex weights reconstruct the state only to {residual:e}"
            )));
        }
        return Ok(PolytopeCertificate {
            inside: true,
            witness: Witness::ConvexWeights {
                weights: g.ids.iter().copied().zip(weights).collect(),
                residual,
            },
        });
    }
    let y = solve_separator(&g.coords, &g.identity, &target)?;
    let functional = DenseOperator::from_real_coords(d.size(), &y)
        .map_err(|e| Error::invalid("separator", e))?;
    let vertex_max = g
        .ops
        .iter()
        .map(|v| functional.born(v))
        .fold(f64::NEG_INFINITY, f64::max);
    let state_value = functional.born(rho);
    let margin = state_value - vertex_max;
    if margin <= tol {
        return Err(Error::IllConditioned(format!(
            "excess {:e} but separator margin only {margin:e}",
            sol.t
        )));
    }
    Ok(PolytopeCertificate {
        inside: false,
        witness: Witness::Separator {
            functional,
            vertex_max,
            state_value,
        },
    })
}

/// Minimal `t >= 0` with `(rho + t I/d)/(1 + t)` in the polytope, by linear programming.
pub fn magic_l1_lp(d: PrimeDim, rho: &DenseOperator) -> Result<MagicValue> {
    check_state(d, rho)?;
    let g = geometry(d)?;
    let sol = solve_excess(&g.coords, &g.identity, &rho.real_coords())?;
    Ok(MagicValue::new(sol.t))
}

/// Polytope-excess magic; for qubits this is `max(0, |nx| + |ny| + |nz| - 1)`.
pub fn magic_l1(d: PrimeDim, rho: &DenseOperator) -> Result<MagicValue> {
    if d.is_qubit() {
        check_state(d, rho)?;
        let n = bloch_vector(rho).ok_or_else(|| Error::Internal("qubit Bloch vector".into()))?;
        let l1 = n[0].abs() + n[1].abs() + n[2].abs();
        return Ok(MagicValue::new((l1 - 1.0).max(0.0)));
    }
    magic_l1_lp(d, rho)
}
