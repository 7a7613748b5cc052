use indexmap::IndexMap;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use super::task::RacTask;
use crate::channel::{fraction_string, Correlation};
use crate::error::Result;

/// A probability kept exact when the evaluation allowed it.
#[derive(Clone, Debug, PartialEq)]
pub enum SuccessValue {
    Exact(BigRational),
    Float(f64),
}

impl SuccessValue {
    pub fn value(&self) -> f64 {
        match self {
            SuccessValue::Exact(q) => q.to_f64().unwrap_or(f64::NAN),
            SuccessValue::Float(v) => *v,
        }
    }

    pub fn exact(&self) -> Option<&BigRational> {
        match self {
            SuccessValue::Exact(q) => Some(q),
            SuccessValue::Float(_) => None,
        }
    }
}

impl Serialize for SuccessValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(None)?;
        if let SuccessValue::Exact(q) = self {
            m.serialize_entry("exact", &fraction_string(q))?;
        }
        m.serialize_entry("value", &self.value())?;
        m.end()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum StrategyTag {
    Meid,
    Onmq,
    Enmq,
    CaseI,
    CaseII,
    CaseIII,
    Custom,
}

/// Average success with its per-string breakdown.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StrategyReport {
    pub strategy_tag: StrategyTag,
    pub average_success: SuccessValue,
    /// Success of each string averaged over `y`.
    pub per_string: IndexMap<String, SuccessValue>,
}

impl StrategyReport {
    pub fn with_tag(mut self, tag: StrategyTag) -> Self {
        self.strategy_tag = tag;
        self
    }

    pub fn per_string_values(&self) -> Vec<f64> {
        self.per_string.values().map(SuccessValue::value).collect()
    }
}

/// Uniform average of `p(x_y | x, y)`; exact when the table is exact.
pub fn rac_success(corr: &Correlation, task: &RacTask) -> Result<StrategyReport> {
    task.spaces().ensure_same(corr.spaces())?;
    let n = task.n() as usize;
    let mut per_string = IndexMap::with_capacity(task.strings());
    if corr.is_exact() {
        let mut total = BigRational::zero();
        let nn = BigRational::from_integer(BigInt::from(n));
        for x in 0..task.strings() {
            let s: BigRational = (0..n)
                .map(|y| corr.get_exact(x, y, task.bit(x, y) as usize).unwrap().clone())
                .sum::<BigRational>()
                / &nn;
            total += &s;
            per_string.insert(task.label(x), SuccessValue::Exact(s));
        }
        let avg = total / BigRational::from_integer(BigInt::from(task.strings()));
        return Ok(StrategyReport {
            strategy_tag: StrategyTag::Custom,
            average_success: SuccessValue::Exact(avg),
            per_string,
        });
    }
    let mut total = 0.0;
    for x in 0..task.strings() {
        let s = (0..n)
            .map(|y| corr.get(x, y, task.bit(x, y) as usize))
            .sum::<f64>()
            / n as f64;
        total += s;
        per_string.insert(task.label(x), SuccessValue::Float(s));
    }
    Ok(StrategyReport {
        strategy_tag: StrategyTag::Custom,
        average_success: SuccessValue::Float(total / task.strings() as f64),
        per_string,
    })
}
