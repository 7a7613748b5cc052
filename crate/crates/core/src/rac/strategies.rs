use serde::Serialize;

use super::decoding::{prep_strategy, MUB_X, MUB_Z};
use super::report::{rac_success, StrategyReport, StrategyTag, SuccessValue};
use super::task::RacTask;
use crate::channel::{
    eval_classical, eval_quantum, eval_quantum_exact, ClassicalPureStrategy, Preparation,
    QuantumStrategy,
};
use crate::error::{Error, Result};
use crate::stabilizer::StabilizerStateId;

const TOL: f64 = 1e-12;

/// Majority bit among the first `m` bits, `None` on a tie.
pub fn majority_prefix(task: &RacTask, x: usize, m: usize) -> Option<u32> {
    let ones = task.ones_in_prefix(x, m) as usize;
    match (2 * ones).cmp(&m) {
        std::cmp::Ordering::Greater => Some(1),
        std::cmp::Ordering::Less => Some(0),
        std::cmp::Ordering::Equal => None,
    }
}

/// Majority encoding, identity decoding; ties send 0.
pub fn meid_strategy(task: &RacTask) -> Result<ClassicalPureStrategy> {
    let n = task.n() as usize;
    let encode = (0..task.strings())
        .map(|x| majority_prefix(task, x, n).unwrap_or(0))
        .collect();
    ClassicalPureStrategy::new(task.spaces(), encode, vec![vec![0, 1]; n])
}

pub fn meid_report(task: &RacTask) -> Result<StrategyReport> {
    let s = meid_strategy(task)?;
    Ok(rac_success(&eval_classical(&s, s.spaces())?, task)?.with_tag(StrategyTag::Meid))
}

fn z_state(bit: u32) -> Preparation {
    Preparation::Stabilizer(StabilizerStateId { k: MUB_Z, j: bit })
}

fn x_state(bit: u32) -> Preparation {
    Preparation::Stabilizer(StabilizerStateId { k: MUB_X, j: bit })
}

/// Z decoding for all but the last input, X decoding for the last.
fn nmq_decoding(task: &RacTask) -> Vec<u32> {
    let n = task.n() as usize;
    (0..n).map(|y| if y + 1 < n { MUB_Z } else { MUB_X }).collect()
}

/// Odd `N = 2n+1`: Z eigenstate of the first-`2n` majority, X eigenstate of the last bit on ties.
pub fn onmq_strategy(task: &RacTask) -> Result<QuantumStrategy> {
    let n = task.n() as usize;
    if n % 2 == 0 {
        return Err(Error::InvalidInput(format!("ONMQ needs odd N, got {n}")));
    }
    let encode = (0..task.strings())
        .map(|x| match majority_prefix(task, x, n - 1) {
            Some(eta) => z_state(eta),
            None => x_state(task.bit(x, n - 1)),
        })
        .collect();
    prep_strategy(task, &nmq_decoding(task), encode, TOL)
}

/// Even `N = 2n`: Z eigenstate of the first-`(2n-1)` majority.
pub fn enmq_strategy(task: &RacTask) -> Result<QuantumStrategy> {
    let n = task.n() as usize;
    if n % 2 == 1 {
        return Err(Error::InvalidInput(format!("ENMQ needs even N, got {n}")));
    }
    let encode = (0..task.strings())
        .map(|x| z_state(majority_prefix(task, x, n - 1).expect("odd prefix has a majority")))
        .collect();
    prep_strategy(task, &nmq_decoding(task), encode, TOL)
}

/// Exact report of a pure-stabilizer strategy.
pub fn stabilizer_report(task: &RacTask, s: &QuantumStrategy, tag: StrategyTag) -> Result<StrategyReport> {
    Ok(rac_success(&eval_quantum_exact(s)?, task)?.with_tag(tag))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum UpliftBase {
    Onmq,
    Enmq,
}

impl UpliftBase {
    pub fn for_n(n: u32) -> Self {
        if n % 2 == 1 {
            UpliftBase::Onmq
        } else {
            UpliftBase::Enmq
        }
    }

    fn strategy(self, task: &RacTask) -> Result<QuantumStrategy> {
        match self {
            UpliftBase::Onmq => onmq_strategy(task),
            UpliftBase::Enmq => enmq_strategy(task),
        }
    }

    fn tag(self) -> StrategyTag {
        match self {
            UpliftBase::Onmq => StrategyTag::Onmq,
            UpliftBase::Enmq => StrategyTag::Enmq,
        }
    }
}

/// Majority profile of a string under the base strategy's prefix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Profile {
    /// Prefix majority count is `n + k` (odd `N`) or `n + k` of `2n - 1` (even `N`).
    pub k: u32,
    /// `+1` when the prefix majority is 0, `-1` when it is 1, `0` on a tie.
    pub sign: i32,
    pub last_bit: u32,
}

pub fn profile(task: &RacTask, x: usize) -> Profile {
    let n = task.n() as usize;
    let m = n - 1;
    let ones = task.ones_in_prefix(x, m) as i64;
    let zeros = m as i64 - ones;
    let half = (n / 2) as i64;
    let (k, sign) = match zeros.cmp(&ones) {
        std::cmp::Ordering::Greater => (zeros - half, 1),
        std::cmp::Ordering::Less => (ones - half, -1),
        std::cmp::Ordering::Equal => (0, 0),
    };
    Profile {
        k: k as u32,
        sign,
        last_bit: task.bit(x, n - 1),
    }
}

/// `P_x` for encoding `r` under the base decoding: odd `N = 2n+1` gives
/// `(n + 1/2 + k s r_z + (-1)^last r_x / 2) / N`, even `N = 2n` gives
/// `(n + (2k+1) s r_z / 2 + (-1)^last r_x / 2) / N`.
pub fn uplift_per_string(task: &RacTask, x: usize, r: [f64; 3]) -> f64 {
    let nn = task.n() as f64;
    let n = (task.n() / 2) as f64;
    let p = profile(task, x);
    let lead = if task.n() % 2 == 1 {
        n + 0.5 + p.k as f64 * p.sign as f64 * r[2]
    } else {
        n + 0.5 * (2 * p.k + 1) as f64 * p.sign as f64 * r[2]
    };
    let last = if p.last_bit == 0 { 1.0 } else { -1.0 };
    (lead + 0.5 * last * r[0]) / nn
}

/// `2k` for odd `N`, `2k + 1` for even `N`.
pub fn uplift_coefficient(n: u32, k: u32) -> f64 {
    if n % 2 == 1 {
        2.0 * k as f64
    } else {
        2.0 * k as f64 + 1.0
    }
}

/// Gain functional `c (cos theta - 1) + sin theta`; equals `2N` times the per-string gain.
pub fn uplift_gain(c: f64, theta: f64) -> f64 {
    c * (theta.cos() - 1.0) + theta.sin()
}

/// `theta* = atan(1/c)` with gain `sqrt(c^2 + 1) - c`.
pub fn optimal_uplift(c: f64) -> (f64, f64) {
    ((1.0 / c).atan(), (c * c + 1.0).sqrt() - c)
}

fn k_range(n: u32) -> (u32, u32) {
    let half = n / 2;
    if n % 2 == 1 {
        (1, half)
    } else {
        (0, half - 1)
    }
}

/// The string `0^(n+k) 1^(rest) 0`: prefix majority 0 with margin `k`, last bit 0.
pub fn canonical_uplift_string(task: &RacTask, k: u32) -> Result<usize> {
    let n = task.n();
    if n < 2 {
        return Err(Error::out_of_range("N", n as u64, 2, super::task::MAX_N as u64));
    }
    let (lo, hi) = k_range(n);
    if k < lo || k > hi {
        return Err(Error::out_of_range("k", k as u64, lo as u64, hi as u64));
    }
    let zeros = (n / 2 + k) as usize;
    let prefix = (n - 1) as usize;
    let mut x = 0usize;
    for y in 0..n as usize {
        let bit = usize::from(y >= zeros && y < prefix);
        x = (x << 1) | bit;
    }
    Ok(x)
}

/// `r = ((-1)^last sin theta, 0, s cos theta)` for the target string.
pub fn uplift_bloch(task: &RacTask, x: usize, theta: f64) -> [f64; 3] {
    let p = profile(task, x);
    let last = if p.last_bit == 0 { 1.0 } else { -1.0 };
    let s = if p.sign >= 0 { 1.0 } else { -1.0 };
    [last * theta.sin(), 0.0, s * theta.cos()]
}

#[derive(Clone, Debug, Serialize)]
pub struct UpliftReport {
    pub base_strategy: UpliftBase,
    pub target: String,
    pub profile: Profile,
    pub bloch: [f64; 3],
    pub base: StrategyReport,
    pub report: StrategyReport,
    /// Closed-form `P_x*` of the replaced encoding.
    pub analytic_per_string: f64,
    /// Born-rule `P_x*` of the replaced encoding.
    pub born_per_string: f64,
    /// `2N (P_x* - P_x*^base)`.
    pub gain: f64,
    pub meid_average: SuccessValue,
    pub beats_meid: bool,
}

/// Replaces the base encoding of `x_star` by the Bloch state `r`.
pub fn single_magic_uplift(base: UpliftBase, task: &RacTask, x_star: usize, r: [f64; 3]) -> Result<UpliftReport> {
    if x_star >= task.strings() {
        return Err(Error::out_of_range("target string", x_star as u64, 0, task.strings() as u64 - 1));
    }
    let b = base.strategy(task)?;
    let base_report = stabilizer_report(task, &b, base.tag())?;
    let lifted = b.with_encoding(x_star, Preparation::Bloch(r), TOL)?;
    let report = rac_success(&eval_quantum(&lifted, lifted.spaces(), TOL)?, task)?.with_tag(StrategyTag::Custom);
    let label = task.label(x_star);
    let born = report.per_string[&label].value();
    let before = base_report.per_string[&label].value();
    let meid = meid_report(task)?.average_success;
    let beats = report.average_success.value() > meid.value() + TOL;
    Ok(UpliftReport {
        base_strategy: base,
        target: label,
        profile: profile(task, x_star),
        bloch: r,
        analytic_per_string: uplift_per_string(task, x_star, r),
        born_per_string: born,
        gain: 2.0 * task.n() as f64 * (born - before),
        base: base_report,
        report,
        meid_average: meid,
        beats_meid: beats,
    })
}
