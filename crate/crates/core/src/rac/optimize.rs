//! Numerical search over Bloch encodings for fixed MUB decodings.
//!
//! The objective is a sum of per-string terms `c_x . n_x`, so each string is
//! optimized on its own: a coarse `(theta, phi)` grid, then compass search
//! with step halving until the step falls below the refinement tolerance.

use std::f64::consts::PI;

use serde::Serialize;

use super::decoding::{
    best_vertex, bloch_strategy, decoding_coefficients, dot, vertex_bloch, MUB_X, MUB_Y, MUB_Z,
};
use super::report::{rac_success, StrategyReport};
use super::task::RacTask;
use crate::channel::eval_quantum;
use crate::error::{Error, Result};

pub const DEFAULT_REFINE_TOL: f64 = 1e-9;

#[derive(Clone, Debug, Serialize)]
pub struct OptimizeReport {
    pub report: StrategyReport,
    pub decoding: Vec<u32>,
    pub encodings: Vec<[f64; 3]>,
    /// Known optimum for this decoding, when there is one.
    pub reference: Option<f64>,
    /// `reference - achieved`.
    pub gap: Option<f64>,
    /// String carrying the only non-stabilizer encoding, for single-magic searches.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub magic_target: Option<String>,
    pub evaluations: u64,
}

fn sphere(theta: f64, phi: f64) -> [f64; 3] {
    [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]
}

/// Maximizes `c . n` over the unit sphere; returns the maximizer and evaluation count.
fn maximize_on_sphere(c: &[i32; 3], refine_tol: f64) -> ([f64; 3], u64) {
    let f = |t: f64, p: f64| dot(c, &sphere(t, p));
    let (nt, np) = (12, 24);
    let mut best = (0.0, 0.0, f64::NEG_INFINITY);
    let mut evals = 0u64;
    for i in 0..=nt {
        for j in 0..np {
            let (t, p) = (PI * i as f64 / nt as f64, 2.0 * PI * j as f64 / np as f64);
            let v = f(t, p);
            evals += 1;
            if v > best.2 {
                best = (t, p, v);
            }
        }
    }
    let mut h = PI / nt as f64;
    let tol = refine_tol.max(1e-15);
    while h > tol {
        let mut moved = false;
        for (dt, dp) in [(h, 0.0), (-h, 0.0), (0.0, h), (0.0, -h)] {
            let (t, p) = (best.0 + dt, best.1 + dp);
            let v = f(t, p);
            evals += 1;
            if v > best.2 {
                best = (t, p, v);
                moved = true;
            }
        }
        if !moved {
            h /= 2.0;
        }
    }
    (sphere(best.0, best.1), evals)
}

/// Optimal decodings: two-bit `Z, X` and three-bit `Z, X, Y` decodings.
pub fn reference_optimum(task: &RacTask, mubs: &[u32]) -> Option<f64> {
    match (task.n(), mubs) {
        (2, [MUB_Z, MUB_X]) => Some(0.5 * (1.0 + 1.0 / 2f64.sqrt())),
        (3, [MUB_Z, MUB_X, MUB_Y]) => Some(0.5 * (1.0 + 1.0 / 3f64.sqrt())),
        _ => None,
    }
}

/// Best value with one magic encoding and stabilizer encodings elsewhere, where known.
pub fn reference_one_magic(task: &RacTask, mubs: &[u32]) -> Option<f64> {
    match (task.n(), mubs) {
        (2, [MUB_Z, MUB_X]) => Some((11.0 + 2f64.sqrt()) / 16.0),
        (3, [MUB_Z, MUB_X, MUB_Y]) => Some((31.0 + 3f64.sqrt()) / 48.0),
        (3, [MUB_X, MUB_X, MUB_Z]) => Some((34.0 + 5f64.sqrt()) / 48.0),
        _ => None,
    }
}

fn finish(
    task: &RacTask,
    mubs: &[u32],
    encodings: Vec<[f64; 3]>,
    reference: Option<f64>,
    magic_target: Option<String>,
    evaluations: u64,
) -> Result<OptimizeReport> {
    let s = bloch_strategy(task, mubs, &encodings, 1e-9)?;
    let report = rac_success(&eval_quantum(&s, s.spaces(), 1e-12)?, task)?;
    let achieved = report.average_success.value();
    Ok(OptimizeReport {
        report,
        decoding: mubs.to_vec(),
        encodings,
        reference,
        gap: reference.map(|r| r - achieved),
        magic_target,
        evaluations,
    })
}

fn check_task(task: &RacTask) -> Result<()> {
    if !(2..=3).contains(&task.n()) {
        return Err(Error::out_of_range("N", task.n() as u64, 2, 3));
    }
    Ok(())
}

/// Unrestricted Bloch encodings for the given decodings.
pub fn optimize_unrestricted(task: &RacTask, mubs: &[u32], refine_tol: f64) -> Result<OptimizeReport> {
    check_task(task)?;
    let c = decoding_coefficients(task, mubs)?;
    let mut evals = 0;
    let encodings = c
        .iter()
        .map(|cx| {
            let (n, e) = maximize_on_sphere(cx, refine_tol);
            evals += e;
            n
        })
        .collect();
    finish(task, mubs, encodings, reference_optimum(task, mubs), None, evals)
}

/// One unrestricted encoding, all others at their best stabilizer vertex.
pub fn optimize_one_magic(task: &RacTask, mubs: &[u32], refine_tol: f64) -> Result<OptimizeReport> {
    check_task(task)?;
    let c = decoding_coefficients(task, mubs)?;
    let stab: Vec<[f64; 3]> = c.iter().map(|cx| vertex_bloch(best_vertex(cx).0)).collect();
    let mut evals = 0;
    let mut best: Option<(f64, usize, [f64; 3])> = None;
    for (x, cx) in c.iter().enumerate() {
        let (n, e) = maximize_on_sphere(cx, refine_tol);
        evals += e;
        let gain = dot(cx, &n) - best_vertex(cx).1 as f64;
        if best.is_none_or(|b| gain > b.0) {
            best = Some((gain, x, n));
        }
    }
    let (_, target, n) = best.expect("at least one string");
    let mut encodings = stab;
    encodings[target] = n;
    finish(
        task,
        mubs,
        encodings,
        reference_one_magic(task, mubs),
        Some(task.label(target)),
        evals,
    )
}
