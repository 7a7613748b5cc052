//! JSON form of quantum strategies.
//!
//! ```json
//! { "dim": 2, "X": ["00","01","10","11"], "Y": [1, 2], "B": [0, 1],
//!   "encode": { "00": {"type": "bloch", "n": [0.7, 0, 0.7]}, ... },
//!   "decode": { "1": {"type": "mub", "k": 1}, "2": {"type": "mub", "k": 2} },
//!   "post":   { "1": [0, 1], "2": [0, 1] } }
//! ```
//!
//! A missing `post` entry maps outcome `i` to the `i`-th output label.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::spaces::TaskSpaces;
use super::strategy::{Measurement, Povm, Preparation, QuantumStrategy};
use crate::algebra::{DenseOperator, PrimeDim};
use crate::error::{Error, Result};
use crate::stabilizer::StabilizerStateId;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum PreparationDoc {
    Stabilizer { k: u32, j: u32 },
    Bloch { n: [f64; 3] },
    Matrix(DenseOperator),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum MeasurementDoc {
    Mub { k: u32 },
    Povm { effects: Vec<DenseOperator> },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategyDoc {
    pub dim: u32,
    #[serde(rename = "X")]
    pub x: Vec<Value>,
    #[serde(rename = "Y")]
    pub y: Vec<Value>,
    #[serde(rename = "B")]
    pub b: Vec<Value>,
    pub encode: IndexMap<String, PreparationDoc>,
    pub decode: IndexMap<String, MeasurementDoc>,
    #[serde(default)]
    pub post: IndexMap<String, Vec<Value>>,
}

/// Alphabet labels may be JSON strings, integers or booleans.
pub fn label_string(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        Value::Bool(b) => Ok(b.to_string()),
        other => Err(Error::InvalidAlphabet(format!("unsupported label {other}"))),
    }
}

fn labels(vs: &[Value]) -> Result<Vec<String>> {
    vs.iter().map(label_string).collect()
}

fn keyed<'a, T>(map: &'a IndexMap<String, T>, alphabet: &[String], what: &str) -> Result<Vec<&'a T>> {
    if let Some(extra) = map.keys().find(|k| !alphabet.contains(k)) {
        return Err(Error::AlphabetMismatch(format!("{what} has unknown key {extra:?}")));
    }
    alphabet
        .iter()
        .map(|l| {
            map.get(l)
                .ok_or_else(|| Error::AlphabetMismatch(format!("{what} is missing key {l:?}")))
        })
        .collect()
}

impl StrategyDoc {
    pub fn into_strategy(self, tol: f64) -> Result<QuantumStrategy> {
        let d = PrimeDim::new(self.dim)?;
        let spaces = TaskSpaces::new(d, labels(&self.x)?, labels(&self.y)?, labels(&self.b)?)?;
        let encode = keyed(&self.encode, spaces.x(), "encode")?
            .into_iter()
            .map(|p| match p {
                PreparationDoc::Stabilizer { k, j } => {
                    StabilizerStateId::new(d, *k, *j).map(Preparation::Stabilizer)
                }
                PreparationDoc::Bloch { n } => Ok(Preparation::Bloch(*n)),
                PreparationDoc::Matrix(m) => Ok(Preparation::Matrix(m.clone())),
            })
            .collect::<Result<Vec<_>>>()?;
        let decode_docs = keyed(&self.decode, spaces.y(), "decode")?;
        let mut decode = Vec::with_capacity(decode_docs.len());
        for (yl, m) in spaces.y().iter().zip(decode_docs) {
            decode.push(match m {
                MeasurementDoc::Mub { k } => Measurement::Mub(*k),
                MeasurementDoc::Povm { effects } => Measurement::Povm(
                    Povm::new(effects.clone(), tol)
                        .map_err(|e| Error::invalid(format!("decode[{yl}]"), e))?,
                ),
            });
        }
        if let Some(extra) = self.post.keys().find(|k| !spaces.y().contains(k)) {
            return Err(Error::AlphabetMismatch(format!("post has unknown key {extra:?}")));
        }
        let mut post = Vec::with_capacity(spaces.ny());
        for (yl, m) in spaces.y().iter().zip(&decode) {
            let outcomes = match m {
                Measurement::Mub(_) => d.size(),
                Measurement::Povm(p) => p.len(),
            };
            let map = match self.post.get(yl) {
                Some(vs) => vs
                    .iter()
                    .map(|v| {
                        let l = label_string(v)?;
                        spaces.b_index(&l).ok_or_else(|| {
                            Error::AlphabetMismatch(format!("post[{yl}] outputs unknown label {l:?}"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?,
                None if outcomes <= spaces.nb() => (0..outcomes).collect(),
                None => {
                    return Err(Error::AlphabetMismatch(format!(
                        "post[{yl}] missing and {outcomes} outcomes exceed |B|={}",
                        spaces.nb()
                    )))
                }
            };
            post.push(map);
        }
        QuantumStrategy::new(spaces, encode, decode, post, tol)
    }
}

impl QuantumStrategy {
    pub fn from_json(text: &str, tol: f64) -> Result<Self> {
        let doc: StrategyDoc = serde_json::from_str(text)?;
        doc.into_strategy(tol)
    }

    pub fn to_doc(&self) -> StrategyDoc {
        let s = self.spaces();
        let strs = |v: &[String]| v.iter().map(|l| Value::String(l.clone())).collect();
        let encode = s
            .x()
            .iter()
            .zip(self.encode())
            .map(|(l, p)| {
                let doc = match p {
                    Preparation::Stabilizer(id) => PreparationDoc::Stabilizer { k: id.k, j: id.j },
                    Preparation::Bloch(n) => PreparationDoc::Bloch { n: *n },
                    Preparation::Matrix(m) => PreparationDoc::Matrix(m.clone()),
                };
                (l.clone(), doc)
            })
            .collect();
        let decode = s
            .y()
            .iter()
            .zip(self.decode())
            .map(|(l, m)| {
                let doc = match m {
                    Measurement::Mub(k) => MeasurementDoc::Mub { k: *k },
                    Measurement::Povm(p) => MeasurementDoc::Povm {
                        effects: p.effects().to_vec(),
                    },
                };
                (l.clone(), doc)
            })
            .collect();
        let post = s
            .y()
            .iter()
            .zip(self.post())
            .map(|(l, m)| {
                (
                    l.clone(),
                    m.iter().map(|&b| Value::String(s.b()[b].clone())).collect(),
                )
            })
            .collect();
        StrategyDoc {
            dim: s.dim().get(),
            x: strs(s.x()),
            y: strs(s.y()),
            b: strs(s.b()),
            encode,
            decode,
            post,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_doc())?)
    }
}
