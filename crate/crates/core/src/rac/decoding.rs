//! Qubit RACs with one MUB measurement per `y`.
//!
//! With encoding Bloch vectors `n_x` and Bob measuring axis `a(y)`, the
//! success is `1/2 + sum_x c_x . n_x / (2^(N+1) N)` where
//! `c_x[a] = sum_{y: a(y) = a} (-1)^(x_y)`. Over the Bloch ball each string
//! peaks at `|c_x|_2`; over the six stabilizer vertices at `|c_x|_inf`.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::task::RacTask;
use crate::channel::{Measurement, Preparation, QuantumStrategy};
use crate::error::{Error, Result};
use crate::stabilizer::StabilizerStateId;

/// Bloch axis index: 0 = x, 1 = y, 2 = z.
pub const AXIS_X: usize = 0;
pub const AXIS_Y: usize = 1;
pub const AXIS_Z: usize = 2;

/// MUB index of `Z`, `X`, `Y` for qubits.
pub const MUB_Z: u32 = 1;
pub const MUB_X: u32 = 2;
pub const MUB_Y: u32 = 3;

pub fn mub_axis(k: u32) -> Result<usize> {
    match k {
        MUB_Z => Ok(AXIS_Z),
        MUB_X => Ok(AXIS_X),
        MUB_Y => Ok(AXIS_Y),
        _ => Err(Error::out_of_range("qubit MUB index", k as u64, 1, 3)),
    }
}

pub fn axis_mub(axis: usize) -> u32 {
    [MUB_X, MUB_Y, MUB_Z][axis]
}

fn check_decoding(task: &RacTask, mubs: &[u32]) -> Result<()> {
    if mubs.len() != task.n() as usize {
        return Err(Error::AlphabetMismatch(format!(
            "{} decodings for N={}",
            mubs.len(),
            task.n()
        )));
    }
    for &k in mubs {
        mub_axis(k)?;
    }
    Ok(())
}

/// Coefficient vector `c_x` of every string.
pub fn decoding_coefficients(task: &RacTask, mubs: &[u32]) -> Result<Vec<[i32; 3]>> {
    check_decoding(task, mubs)?;
    Ok((0..task.strings())
        .map(|x| {
            let mut c = [0i32; 3];
            for (y, &k) in mubs.iter().enumerate() {
                let sign = if task.bit(x, y) == 0 { 1 } else { -1 };
                c[mub_axis(k).unwrap()] += sign;
            }
            c
        })
        .collect())
}

pub fn dot(c: &[i32; 3], n: &[f64; 3]) -> f64 {
    c[0] as f64 * n[0] + c[1] as f64 * n[1] + c[2] as f64 * n[2]
}

/// Normalizer `2^(N+1) N` of the success formula.
pub fn success_scale(task: &RacTask) -> f64 {
    (task.strings() * 2 * task.n() as usize) as f64
}

/// `1/2 + sum_x c_x . n_x / (2^(N+1) N)`.
pub fn linear_success(task: &RacTask, mubs: &[u32], encodings: &[[f64; 3]]) -> Result<f64> {
    let c = decoding_coefficients(task, mubs)?;
    if encodings.len() != c.len() {
        return Err(Error::AlphabetMismatch(format!(
            "{} encodings for {} strings",
            encodings.len(),
            c.len()
        )));
    }
    let s: f64 = c.iter().zip(encodings).map(|(c, n)| dot(c, n)).sum();
    Ok(0.5 + s / success_scale(task))
}

/// First stabilizer vertex maximizing `c . n`, scanning `Z, X, Y` and `+` before `-`.
pub fn best_vertex(c: &[i32; 3]) -> (StabilizerStateId, i32) {
    let mut best = (StabilizerStateId { k: MUB_Z, j: 0 }, i32::MIN);
    for k in [MUB_Z, MUB_X, MUB_Y] {
        let a = mub_axis(k).unwrap();
        for (j, sign) in [(0u32, 1i32), (1, -1)] {
            let v = sign * c[a];
            if v > best.1 {
                best = (StabilizerStateId { k, j }, v);
            }
        }
    }
    best
}

pub fn vertex_bloch(id: StabilizerStateId) -> [f64; 3] {
    let mut n = [0.0; 3];
    n[mub_axis(id.k).expect("qubit basis")] = if id.j == 0 { 1.0 } else { -1.0 };
    n
}

/// Best stabilizer encoding of each string, with the exact optimal success.
pub fn stabilizer_best(task: &RacTask, mubs: &[u32]) -> Result<(Vec<StabilizerStateId>, BigRational)> {
    let c = decoding_coefficients(task, mubs)?;
    let mut total = BigInt::from(0);
    let ids = c
        .iter()
        .map(|c| {
            let (id, v) = best_vertex(c);
            total += v;
            id
        })
        .collect();
    let scale = BigInt::from(success_scale(task) as u64);
    let value = BigRational::new(BigInt::from(1), BigInt::from(2)) + BigRational::new(total, scale);
    Ok((ids, value))
}

/// Strategy with Bloch encodings, MUB decodings and identity post-processing.
pub fn bloch_strategy(task: &RacTask, mubs: &[u32], encodings: &[[f64; 3]], tol: f64) -> Result<QuantumStrategy> {
    check_decoding(task, mubs)?;
    prep_strategy(
        task,
        mubs,
        encodings.iter().map(|&n| Preparation::Bloch(n)).collect(),
        tol,
    )
}

pub fn prep_strategy(task: &RacTask, mubs: &[u32], encode: Vec<Preparation>, tol: f64) -> Result<QuantumStrategy> {
    check_decoding(task, mubs)?;
    QuantumStrategy::new(
        task.spaces(),
        encode,
        mubs.iter().map(|&k| Measurement::Mub(k)).collect(),
        vec![vec![0, 1]; mubs.len()],
        tol,
    )
}

/// `max(0, |nx| + |nz| - 1)`.
pub fn plane_excess(n: &[f64; 3]) -> f64 {
    (n[0].abs() + n[2].abs() - 1.0).max(0.0)
}
