//! Which single XZ-plane magic encodings beat the classical `3/4`.
//!
//! For a fixed magic candidate `n`, the remaining strings decouple and each
//! takes its best stabilizer vertex; the candidate goes to whichever string
//! (and, for three bits, whichever reuse orientation) gains most.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::decoding::{
    best_vertex, bloch_strategy, decoding_coefficients, dot, success_scale, vertex_bloch, MUB_X,
    MUB_Z,
};
use super::report::rac_success;
use super::task::RacTask;
use crate::channel::{eval_quantum, QuantumStrategy};
use crate::error::{Error, Result};

pub const CLASSICAL_VALUE: f64 = 0.75;
/// Points whose success is this close to `3/4` are classified as boundary.
pub const BOUNDARY_BAND: f64 = 1e-8;
/// Slack on `|nx| + |nz| <= 1` for the stabilizer class.
pub const STABILIZER_SLACK: f64 = 1e-12;
pub const DEFAULT_STEP: f64 = 0.01;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegionTask {
    Rac2,
    Rac3,
}

impl RegionTask {
    fn task(self) -> RacTask {
        RacTask::new(match self {
            RegionTask::Rac2 => 2,
            RegionTask::Rac3 => 3,
        })
        .expect("small N")
    }

    /// Candidate decodings: the two-bit `Z, X`; the three-bit `X, X, Z` and its mirror `Z, Z, X`.
    pub fn decodings(self) -> Vec<Vec<u32>> {
        match self {
            RegionTask::Rac2 => vec![vec![MUB_Z, MUB_X]],
            RegionTask::Rac3 => vec![vec![MUB_X, MUB_X, MUB_Z], vec![MUB_Z, MUB_Z, MUB_X]],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegionClass {
    Stabilizer,
    Boundary,
    MagicAdvantage,
    MagicNoAdvantage,
}

impl RegionClass {
    pub fn as_str(self) -> &'static str {
        match self {
            RegionClass::Stabilizer => "stabilizer",
            RegionClass::Boundary => "boundary",
            RegionClass::MagicAdvantage => "magic-advantage",
            RegionClass::MagicNoAdvantage => "magic-no-advantage",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionSample {
    pub nx: f64,
    pub nz: f64,
    pub class: RegionClass,
    pub success: f64,
    /// String carrying the magic candidate.
    pub target: String,
    pub decoding: Vec<u32>,
}

struct Placement {
    success: f64,
    decoding: Vec<u32>,
    target: usize,
}

fn best_placement(task: &RacTask, decodings: &[Vec<u32>], n: [f64; 3]) -> Result<Placement> {
    let mut best: Option<Placement> = None;
    for mubs in decodings {
        let c = decoding_coefficients(task, mubs)?;
        let stab: i64 = c.iter().map(|c| best_vertex(c).1 as i64).sum();
        for (x, cx) in c.iter().enumerate() {
            let total = (stab - best_vertex(cx).1 as i64) as f64 + dot(cx, &n);
            let success = 0.5 + total / success_scale(task);
            if best.as_ref().is_none_or(|b| success > b.success) {
                best = Some(Placement {
                    success,
                    decoding: mubs.clone(),
                    target: x,
                });
            }
        }
    }
    best.ok_or_else(|| Error::Internal("no decoding candidates".into()))
}

fn classify(n: [f64; 3], success: f64) -> RegionClass {
    if n[0].abs() + n[2].abs() <= 1.0 + STABILIZER_SLACK {
        RegionClass::Stabilizer
    } else if (success - CLASSICAL_VALUE).abs() <= BOUNDARY_BAND {
        RegionClass::Boundary
    } else if success > CLASSICAL_VALUE {
        RegionClass::MagicAdvantage
    } else {
        RegionClass::MagicNoAdvantage
    }
}

fn tidy(v: f64) -> f64 {
    let r = (v * 1e12).round() / 1e12;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Classifies one XZ-plane point.
pub fn region_point(task: RegionTask, nx: f64, nz: f64) -> Result<RegionSample> {
    let n = [nx, 0.0, nz];
    if nx * nx + nz * nz > 1.0 + STABILIZER_SLACK {
        return Err(Error::InvalidInput(format!("({nx}, {nz}) is outside the Bloch disk")));
    }
    let rac = task.task();
    let p = best_placement(&rac, &task.decodings(), n)?;
    Ok(RegionSample {
        nx,
        nz,
        class: classify(n, p.success),
        success: p.success,
        target: rac.label(p.target),
        decoding: p.decoding,
    })
}

/// Full strategy realizing a region sample, for Born-rule re-evaluation.
pub fn region_point_strategy(task: RegionTask, nx: f64, nz: f64) -> Result<(QuantumStrategy, RegionSample)> {
    let sample = region_point(task, nx, nz)?;
    let rac = task.task();
    let target = rac.parse(&sample.target)?;
    let c = decoding_coefficients(&rac, &sample.decoding)?;
    let enc: Vec<[f64; 3]> = c
        .iter()
        .enumerate()
        .map(|(x, cx)| {
            if x == target {
                [nx, 0.0, nz]
            } else {
                vertex_bloch(best_vertex(cx).0)
            }
        })
        .collect();
    let s = bloch_strategy(&rac, &sample.decoding, &enc, 1e-12)?;
    Ok((s, sample))
}

/// Born-rule success of a region sample's strategy.
pub fn region_point_born(task: RegionTask, nx: f64, nz: f64) -> Result<f64> {
    let (s, _) = region_point_strategy(task, nx, nz)?;
    let r = rac_success(&eval_quantum(&s, s.spaces(), 1e-12)?, &task.task())?;
    Ok(r.average_success.value())
}

/// Grid over the XZ unit disk at spacing `step`, `nx` outer.
pub fn advantage_region(task: RegionTask, step: f64) -> Result<Vec<RegionSample>> {
    if !(step > 0.0 && step <= 1.0) {
        return Err(Error::InvalidInput(format!("grid step {step} outside (0, 1]")));
    }
    let m = (1.0 / step + 1e-9).floor() as i64;
    let mut out = Vec::new();
    for i in -m..=m {
        for j in -m..=m {
            let nx = tidy(i as f64 * step);
            let nz = tidy(j as f64 * step);
            if nx * nx + nz * nz <= 1.0 + STABILIZER_SLACK {
                out.push(region_point(task, nx, nz)?);
            }
        }
    }
    Ok(out)
}

/// CSV with columns `nx,nz,class,success`.
pub fn region_csv(samples: &[RegionSample]) -> String {
    let mut s = String::from("nx,nz,class,success\n");
    for p in samples {
        let _ = writeln!(s, "{},{},{},{}", p.nx, p.nz, p.class.as_str(), p.success);
    }
    s
}
