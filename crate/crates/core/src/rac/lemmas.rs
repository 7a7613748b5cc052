//! The two- and three-bit qubit RACs with fixed MUB decodings.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use super::decoding::{
    bloch_strategy, plane_excess, stabilizer_best, vertex_bloch, MUB_X, MUB_Y, MUB_Z,
};
use super::report::{rac_success, StrategyReport, StrategyTag};
use super::strategies::majority_prefix;
use super::task::RacTask;
use crate::algebra::{bloch_state, PrimeDim};
use crate::channel::eval_quantum;
use crate::error::{Error, Result};
use crate::stabilizer::magic_l1;

const TOL: f64 = 1e-12;

/// Born-rule report next to the closed-form value and the magic of each encoding.
#[derive(Clone, Debug, Serialize)]
pub struct LemmaReport {
    pub report: StrategyReport,
    pub closed_form: f64,
    /// Polytope-excess magic of each encoding.
    pub magic: Vec<f64>,
    /// `max(0, |nx| + |nz| - 1)` of each encoding.
    pub plane_excess: Vec<f64>,
}

impl LemmaReport {
    pub fn born(&self) -> f64 {
        self.report.average_success.value()
    }
}

fn sign(bit: u32) -> f64 {
    if bit == 0 {
        1.0
    } else {
        -1.0
    }
}

fn magic_of(encodings: &[[f64; 3]]) -> Result<(Vec<f64>, Vec<f64>)> {
    let d = PrimeDim::new(2)?;
    let mut magic = Vec::with_capacity(encodings.len());
    for (i, &n) in encodings.iter().enumerate() {
        let rho = bloch_state(n).map_err(|e| Error::invalid(format!("encoding {i}"), e))?;
        magic.push(magic_l1(d, &rho)?.value);
    }
    Ok((magic, encodings.iter().map(plane_excess).collect()))
}

fn lemma_report(
    task: &RacTask,
    mubs: &[u32],
    encodings: &[[f64; 3]],
    closed_form: f64,
    tag: StrategyTag,
) -> Result<LemmaReport> {
    if encodings.len() != task.strings() {
        return Err(Error::AlphabetMismatch(format!(
            "{} encodings for {} strings",
            encodings.len(),
            task.strings()
        )));
    }
    let (magic, plane_excess) = magic_of(encodings)?;
    let s = bloch_strategy(task, mubs, encodings, TOL)?;
    let report = rac_success(&eval_quantum(&s, s.spaces(), TOL)?, task)?.with_tag(tag);
    Ok(LemmaReport {
        report,
        closed_form,
        magic,
        plane_excess,
    })
}

/// Decodings `Z` for `y = 1`, `X` for `y = 2`.
pub const RAC2_DECODING: [u32; 2] = [MUB_Z, MUB_X];

/// `(1/16)[8 + sum_x ((-1)^x1 n^z_x + (-1)^x2 n^x_x)]`.
pub fn rac2_closed_form(encodings: &[[f64; 3]; 4]) -> f64 {
    let mut s = 0.0;
    for x1 in 0..2u32 {
        for x2 in 0..2u32 {
            let n = encodings[(x1 * 2 + x2) as usize];
            s += sign(x1) * n[2] + sign(x2) * n[0];
        }
    }
    (8.0 + s) / 16.0
}

pub fn rac2_strategy(encodings: &[[f64; 3]; 4]) -> Result<LemmaReport> {
    let task = RacTask::new(2)?;
    lemma_report(
        &task,
        &RAC2_DECODING,
        encodings,
        rac2_closed_form(encodings),
        StrategyTag::Custom,
    )
}

/// Best stabilizer encodings for the two-bit RAC: value `3/4`.
pub fn rac2_stabilizer_encodings() -> [[f64; 3]; 4] {
    let task = RacTask::new(2).expect("N=2");
    let (ids, _) = stabilizer_best(&task, &RAC2_DECODING).expect("qubit decoding");
    let v: Vec<_> = ids.into_iter().map(vertex_bloch).collect();
    [v[0], v[1], v[2], v[3]]
}

/// Magic state at 45 degrees on the XZ circle for `00`; `01 -> +z`, `10 -> +x`, `11 -> -z`.
pub fn rac2_single_magic_encodings() -> [[f64; 3]; 4] {
    [
        [FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2],
        [0.0, 0.0, 1.0],
        [1.0, 0.0, 0.0],
        [0.0, 0.0, -1.0],
    ]
}

/// String `00` at Bloch `((1+eps)/2, 0, (1+eps)/2)`, the rest as in [`rac2_single_magic_encodings`].
pub fn rac2_epsilon_encodings(eps: f64) -> [[f64; 3]; 4] {
    let mut e = rac2_single_magic_encodings();
    let c = (1.0 + eps) / 2.0;
    e[0] = [c, 0.0, c];
    e
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rac3Case {
    /// `X` for every `y`.
    I,
    /// `Z`, `X`, `Y`.
    II,
    /// `X`, `X`, `Z`.
    III,
}

impl Rac3Case {
    pub fn decoding(self) -> [u32; 3] {
        match self {
            Rac3Case::I => [MUB_X, MUB_X, MUB_X],
            Rac3Case::II => [MUB_Z, MUB_X, MUB_Y],
            Rac3Case::III => [MUB_X, MUB_X, MUB_Z],
        }
    }

    pub fn tag(self) -> StrategyTag {
        match self {
            Rac3Case::I => StrategyTag::CaseI,
            Rac3Case::II => StrategyTag::CaseII,
            Rac3Case::III => StrategyTag::CaseIII,
        }
    }
}

fn bits3(x: usize) -> (u32, u32, u32) {
    (((x >> 2) & 1) as u32, ((x >> 1) & 1) as u32, (x & 1) as u32)
}

/// Closed-form success of each case as a sum over strings, over 48.
pub fn rac3_closed_form(case: Rac3Case, encodings: &[[f64; 3]; 8]) -> f64 {
    let mut s = 0.0;
    for (x, n) in encodings.iter().enumerate() {
        let (x1, x2, x3) = bits3(x);
        s += match case {
            Rac3Case::I => (sign(x1) + sign(x2) + sign(x3)) * n[0],
            Rac3Case::II => sign(x1) * n[2] + sign(x2) * n[0] + sign(x3) * n[1],
            Rac3Case::III => (sign(x1) + sign(x2)) * n[0] + sign(x3) * n[2],
        };
    }
    (24.0 + s) / 48.0
}

pub fn rac3_case_strategies(case: Rac3Case, encodings: &[[f64; 3]; 8]) -> Result<LemmaReport> {
    let task = RacTask::new(3)?;
    lemma_report(
        &task,
        &case.decoding(),
        encodings,
        rac3_closed_form(case, encodings),
        case.tag(),
    )
}

/// `X` eigenstate of the majority bit of each string.
pub fn rac3_majority_x_encodings() -> [[f64; 3]; 8] {
    let task = RacTask::new(3).expect("N=3");
    let mut e = [[0.0; 3]; 8];
    for (x, n) in e.iter_mut().enumerate() {
        let m = majority_prefix(&task, x, 3).expect("odd length");
        *n = [sign(m), 0.0, 0.0];
    }
    e
}

/// Best stabilizer encodings for a case.
pub fn rac3_stabilizer_encodings(case: Rac3Case) -> [[f64; 3]; 8] {
    let task = RacTask::new(3).expect("N=3");
    let (ids, _) = stabilizer_best(&task, &case.decoding()).expect("qubit decoding");
    let mut e = [[0.0; 3]; 8];
    for (n, id) in e.iter_mut().zip(ids) {
        *n = vertex_bloch(id);
    }
    e
}
