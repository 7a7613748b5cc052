use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::algebra::PrimeDim;
use crate::error::{Error, Result};

/// Input alphabets of the two parties, the output alphabet, and the message dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskSpaces {
    x: Vec<String>,
    y: Vec<String>,
    b: Vec<String>,
    dim: PrimeDim,
}

fn check_alphabet(name: &str, labels: &[String]) -> Result<()> {
    if labels.is_empty() {
        return Err(Error::InvalidAlphabet(format!("{name} is empty")));
    }
    let mut seen = HashSet::new();
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(Error::InvalidAlphabet(format!("{name} repeats label {l:?}")));
        }
    }
    Ok(())
}

impl TaskSpaces {
    pub fn new(dim: PrimeDim, x: Vec<String>, y: Vec<String>, b: Vec<String>) -> Result<Self> {
        check_alphabet("X", &x)?;
        check_alphabet("Y", &y)?;
        check_alphabet("B", &b)?;
        Ok(TaskSpaces { x, y, b, dim })
    }

    /// Alphabets labelled `0..n` in decimal.
    pub fn indexed(dim: PrimeDim, nx: usize, ny: usize, nb: usize) -> Result<Self> {
        let labels = |n: usize| (0..n).map(|i| i.to_string()).collect();
        Self::new(dim, labels(nx), labels(ny), labels(nb))
    }

    pub fn x(&self) -> &[String] {
        &self.x
    }

    pub fn y(&self) -> &[String] {
        &self.y
    }

    pub fn b(&self) -> &[String] {
        &self.b
    }

    pub fn dim(&self) -> PrimeDim {
        self.dim
    }

    pub fn nx(&self) -> usize {
        self.x.len()
    }

    pub fn ny(&self) -> usize {
        self.y.len()
    }

    pub fn nb(&self) -> usize {
        self.b.len()
    }

    /// Number of `(x, y, b)` cells.
    pub fn cells(&self) -> usize {
        self.nx() * self.ny() * self.nb()
    }

    /// Flat index of `(x, y, b)`; `b` varies fastest.
    #[inline]
    pub fn index(&self, x: usize, y: usize, b: usize) -> usize {
        (x * self.ny() + y) * self.nb() + b
    }

    pub fn x_index(&self, label: &str) -> Option<usize> {
        self.x.iter().position(|l| l == label)
    }

    pub fn y_index(&self, label: &str) -> Option<usize> {
        self.y.iter().position(|l| l == label)
    }

    pub fn b_index(&self, label: &str) -> Option<usize> {
        self.b.iter().position(|l| l == label)
    }

    pub(crate) fn ensure_same(&self, other: &TaskSpaces) -> Result<()> {
        if self != other {
            return Err(Error::AlphabetMismatch(format!(
                "spaces differ: |X|={} |Y|={} |B|={} d={} vs |X|={} |Y|={} |B|={} d={}",
                self.nx(),
                self.ny(),
                self.nb(),
                self.dim,
                other.nx(),
                other.ny(),
                other.nb(),
                other.dim
            )));
        }
        Ok(())
    }
}
