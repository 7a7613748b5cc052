//! Exhaustive classical and stabilizer-vertex baselines.
//!
//! Success is linear in the correlation, so the optimum over shared
//! strategies sits at a deterministic atom and only pure strategies are
//! enumerated.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::channel::{
    eval_classical, eval_quantum_exact, fraction_string, ClassicalPureStrategy, Correlation,
    Entries, TaskSpaces,
};
use crate::error::{Error, Result};
use crate::rac::decoding::{prep_strategy, stabilizer_best, MUB_X, MUB_Y, MUB_Z};
use crate::rac::{meid_report, RacTask, StrategyReport, SuccessValue};
use crate::channel::Preparation;
use crate::stabilizer::StabilizerStateId;

pub const DEFAULT_BUDGET: u64 = 100_000_000;
/// Largest `N` whose classical optimum is enumerated.
pub const MEID_CHECK_MAX_N: u32 = 4;

/// Objective `sum score(x, y, b) p(b|x,y) / denominator` with integer scores.
#[derive(Clone, Debug)]
pub struct LinearTask {
    spaces: TaskSpaces,
    scores: Vec<i64>,
    denominator: u64,
}

impl LinearTask {
    /// `scores` is indexed like a correlation table.
    pub fn new(spaces: TaskSpaces, scores: Vec<i64>, denominator: u64) -> Result<Self> {
        if scores.len() != spaces.cells() {
            return Err(Error::AlphabetMismatch(format!(
                "{} scores for {} cells",
                scores.len(),
                spaces.cells()
            )));
        }
        if denominator == 0 {
            return Err(Error::InvalidInput("denominator must be positive".into()));
        }
        Ok(LinearTask {
            spaces,
            scores,
            denominator,
        })
    }

    /// Average success of the `N`-bit RAC.
    pub fn rac(task: &RacTask) -> Self {
        let spaces = task.spaces();
        let n = task.n() as usize;
        let mut scores = vec![0; spaces.cells()];
        for x in 0..task.strings() {
            for y in 0..n {
                scores[spaces.index(x, y, task.bit(x, y) as usize)] = 1;
            }
        }
        LinearTask {
            spaces,
            scores,
            denominator: (task.strings() * n) as u64,
        }
    }

    pub fn spaces(&self) -> &TaskSpaces {
        &self.spaces
    }

    pub fn score(&self, x: usize, y: usize, b: usize) -> i64 {
        self.scores[self.spaces.index(x, y, b)]
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    /// Objective value of a correlation; exact when the correlation is.
    pub fn value(&self, corr: &Correlation) -> Result<SuccessValue> {
        self.spaces.ensure_same(corr.spaces())?;
        Ok(match corr.entries() {
            Entries::Exact(v) => {
                let mut s = BigRational::zero();
                for (p, &w) in v.iter().zip(&self.scores) {
                    if w != 0 {
                        s += p * BigRational::from_integer(BigInt::from(w));
                    }
                }
                SuccessValue::Exact(s / BigRational::from_integer(BigInt::from(self.denominator)))
            }
            Entries::Float { values, .. } => {
                let s: f64 = values.iter().zip(&self.scores).map(|(p, &w)| p * w as f64).sum();
                SuccessValue::Float(s / self.denominator as f64)
            }
        })
    }

    /// `d^|X| * |B|^(d |Y|)`, saturating.
    pub fn candidate_count(&self) -> u128 {
        let d = self.spaces.dim().get() as u128;
        let pow = |base: u128, e: usize| -> u128 {
            (0..e).fold(1u128, |acc, _| acc.saturating_mul(base))
        };
        pow(d, self.spaces.nx()).saturating_mul(pow(self.spaces.nb() as u128, self.spaces.ny() * d as usize))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OptMethod {
    Exhaustive,
    PerStringDecomposed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Verified,
    PaperAsserted,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Argmax {
    Classical {
        encode: Vec<u32>,
        decode: Vec<Vec<usize>>,
    },
    Stabilizer {
        decoding: Vec<u32>,
        encodings: Vec<StabilizerStateId>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OptReport {
    pub best_value: SuccessValue,
    pub argmax: Argmax,
    pub search_size: u64,
    pub method: OptMethod,
    pub provenance: Provenance,
}

fn check_budget(candidates: u128, budget: u64) -> Result<()> {
    if candidates > budget as u128 {
        return Err(Error::BudgetExceeded { candidates, budget });
    }
    Ok(())
}

fn digits(mut e: u64, base: u64, len: usize) -> Vec<u32> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = (e % base) as u32;
        e /= base;
    }
    out
}

/// Best decoders for a fixed encoder: `acc[(y*d + m)*nb + b]` summed over `x`.
fn best_decoders(task: &LinearTask, encode: &[u32], acc: &mut [i64]) -> i64 {
    let s = &task.spaces;
    let (ny, nb) = (s.ny(), s.nb());
    let d = s.dim().get() as usize;
    acc.iter_mut().for_each(|a| *a = 0);
    for (x, &m) in encode.iter().enumerate() {
        for y in 0..ny {
            let base = (y * d + m as usize) * nb;
            let row = s.index(x, y, 0);
            for b in 0..nb {
                acc[base + b] += task.scores[row + b];
            }
        }
    }
    acc.chunks(nb).map(|c| *c.iter().max().expect("nonempty B")).sum()
}

fn first_argmax(row: &[i64]) -> usize {
    let mut best = 0;
    for (b, &v) in row.iter().enumerate() {
        if v > row[best] {
            best = b;
        }
    }
    best
}

/// Exhaustive optimum over deterministic encoders and decoders.
///
/// Encoders are ordered lexicographically with the first input most
/// significant, then decoders; the first maximum is kept. For each encoder
/// the decoder search factorizes per `(y, message)`, so the smallest
/// maximizing output of each factor gives the first maximal decoder.
pub fn classical_optimum(task: &LinearTask, budget: u64) -> Result<OptReport> {
    let candidates = task.candidate_count();
    check_budget(candidates, budget)?;
    let s = &task.spaces;
    let d = s.dim().get() as u64;
    let (nx, ny, nb) = (s.nx(), s.ny(), s.nb());
    let encoders = d.pow(nx as u32);
    let width = ny * d as usize * nb;
    let (total, e) = (0..encoders)
        .into_par_iter()
        .map_init(
            || vec![0i64; width],
            |acc, e| (best_decoders(task, &digits(e, d, nx), acc), e),
        )
        .reduce(
            || (i64::MIN, u64::MAX),
            |a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a },
        );
    let encode = digits(e, d, nx);
    let mut acc = vec![0i64; width];
    best_decoders(task, &encode, &mut acc);
    let decode = (0..ny)
        .map(|y| {
            (0..d as usize)
                .map(|m| first_argmax(&acc[(y * d as usize + m) * nb..][..nb]))
                .collect()
        })
        .collect();
    let value = BigRational::new(BigInt::from(total), BigInt::from(task.denominator));
    Ok(OptReport {
        best_value: SuccessValue::Exact(value),
        argmax: Argmax::Classical { encode, decode },
        search_size: candidates as u64,
        method: OptMethod::Exhaustive,
        provenance: Provenance::Verified,
    })
}

impl OptReport {
    /// Rebuilds the classical argmax as a strategy on `spaces`.
    pub fn classical_strategy(&self, spaces: &TaskSpaces) -> Result<Option<ClassicalPureStrategy>> {
        match &self.argmax {
            Argmax::Classical { encode, decode } => Ok(Some(ClassicalPureStrategy::new(
                spaces.clone(),
                encode.clone(),
                decode.clone(),
            )?)),
            Argmax::Stabilizer { .. } => Ok(None),
        }
    }

    /// Re-evaluates the argmax through the correlation model.
    pub fn reevaluate(&self, task: &LinearTask, rac: Option<&RacTask>) -> Result<SuccessValue> {
        match &self.argmax {
            Argmax::Classical { .. } => {
                let st = self.classical_strategy(task.spaces())?.expect("classical argmax");
                task.value(&eval_classical(&st, st.spaces())?)
            }
            Argmax::Stabilizer { decoding, encodings } => {
                let rac = rac.ok_or_else(|| Error::InvalidInput("stabilizer argmax needs a RAC task".into()))?;
                let s = prep_strategy(
                    rac,
                    decoding,
                    encodings.iter().map(|&id| Preparation::Stabilizer(id)).collect(),
                    1e-12,
                )?;
                task.value(&eval_quantum_exact(&s)?)
            }
        }
    }
}

/// Best stabilizer-vertex encodings for fixed MUB decodings, or over all `3^N` assignments.
pub fn stabilizer_vertex_optimum(task: &RacTask, decoding: Option<&[u32]>, budget: u64) -> Result<OptReport> {
    let per = 6u128 * task.strings() as u128;
    let assignments: Vec<Vec<u32>> = match decoding {
        Some(m) => vec![m.to_vec()],
        None => {
            let n = task.n() as usize;
            check_budget(per.saturating_mul(3u128.saturating_pow(n as u32)), budget)?;
            (0..3u64.pow(n as u32))
                .map(|i| {
                    digits(i, 3, n)
                        .into_iter()
                        .map(|a| [MUB_Z, MUB_X, MUB_Y][a as usize])
                        .collect()
                })
                .collect()
        }
    };
    let search = per * assignments.len() as u128;
    check_budget(search, budget)?;
    let mut best: Option<(BigRational, Vec<u32>, Vec<StabilizerStateId>)> = None;
    for mubs in assignments {
        let (ids, value) = stabilizer_best(task, &mubs)?;
        if best.as_ref().is_none_or(|b| value > b.0) {
            best = Some((value, mubs, ids));
        }
    }
    let (value, decoding, encodings) = best.expect("at least one assignment");
    Ok(OptReport {
        best_value: SuccessValue::Exact(value),
        argmax: Argmax::Stabilizer { decoding, encodings },
        search_size: search as u64,
        method: OptMethod::PerStringDecomposed,
        provenance: Provenance::Verified,
    })
}

fn ser_fraction<S: Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fraction_string(q))
}

#[derive(Clone, Debug, Serialize)]
pub struct MeidCheck {
    pub n: u32,
    pub optimum: OptReport,
    pub meid: StrategyReport,
    /// `optimum - meid`.
    #[serde(serialize_with = "ser_fraction")]
    pub gap: BigRational,
    pub equal: bool,
}

/// Compares the exhaustive classical optimum with the majority strategy.
pub fn meid_is_optimal_check(n: u32, budget: u64) -> Result<MeidCheck> {
    let task = RacTask::new(n)?;
    let lt = LinearTask::rac(&task);
    if n > MEID_CHECK_MAX_N {
        return Err(Error::BudgetExceeded {
            candidates: lt.candidate_count(),
            budget: budget.min(DEFAULT_BUDGET),
        });
    }
    let optimum = classical_optimum(&lt, budget)?;
    let meid = meid_report(&task)?;
    let opt = optimum.best_value.exact().expect("exact optimum").clone();
    let gap = opt - meid.average_success.exact().expect("exact MEID");
    Ok(MeidCheck {
        n,
        equal: gap.is_zero(),
        optimum,
        meid,
        gap,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassicalBaseline {
    pub n: u32,
    pub value: SuccessValue,
    pub provenance: Provenance,
}

/// Classical RAC value: enumerated for small `N`, the majority value otherwise.
pub fn classical_rac_baseline(n: u32, budget: u64) -> Result<ClassicalBaseline> {
    if n <= MEID_CHECK_MAX_N {
        let c = meid_is_optimal_check(n, budget)?;
        if !c.equal {
            return Err(Error::Internal(format!("majority strategy is not optimal at N={n}")));
        }
        return Ok(ClassicalBaseline {
            n,
            value: c.optimum.best_value,
            provenance: Provenance::Verified,
        });
    }
    let task = RacTask::new(n)?;
    Ok(ClassicalBaseline {
        n,
        value: meid_report(&task)?.average_success,
        provenance: Provenance::PaperAsserted,
    })
}
