use indexmap::IndexMap;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::PrimeDim;
use crate::channel::TaskSpaces;
use crate::error::{Error, Result};

/// Inverts `r = d(k-1) + j + 1`.
pub fn decode_cell(r: u32, d: PrimeDim) -> Result<(u32, u32)> {
    let dd = d.get();
    let max = dd * (dd + 1);
    if r < 1 || r > max {
        return Err(Error::out_of_range("cell r", r as u64, 1, max as u64));
    }
    Ok(((r - 1) / dd + 1, (r - 1) % dd))
}

/// Map from Alice's inputs to encoding cells `1..=d(d+1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionX {
    pub assign: Vec<u32>,
}

/// Map from Bob's inputs to measurement cells `1..=d+1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionY {
    pub assign: Vec<u32>,
}

/// Coarse-grained stabilizer task: labelled inputs with their cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partitions {
    spaces: TaskSpaces,
    x: PartitionX,
    y: PartitionY,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PartitionsDoc {
    dim: u32,
    x_cells: IndexMap<String, u32>,
    y_cells: IndexMap<String, u32>,
}

fn output_labels(d: PrimeDim) -> Vec<String> {
    (0..d.get()).map(|b| b.to_string()).collect()
}

impl Partitions {
    pub fn new(
        d: PrimeDim,
        x_labels: Vec<String>,
        x: PartitionX,
        y_labels: Vec<String>,
        y: PartitionY,
    ) -> Result<Self> {
        let dd = d.get();
        if x.assign.len() != x_labels.len() || y.assign.len() != y_labels.len() {
            return Err(Error::AlphabetMismatch("partition does not cover its alphabet".into()));
        }
        for &r in &x.assign {
            decode_cell(r, d)?;
        }
        for &t in &y.assign {
            if t < 1 || t > dd + 1 {
                return Err(Error::out_of_range("cell t", t as u64, 1, dd as u64 + 1));
            }
        }
        let spaces = TaskSpaces::new(d, x_labels, y_labels, output_labels(d))?;
        Ok(Partitions { spaces, x, y })
    }

    /// One input per cell: `x = r`, `y = t`.
    pub fn maximal(d: PrimeDim) -> Self {
        let dd = d.get();
        let xs: Vec<u32> = (1..=dd * (dd + 1)).collect();
        let ys: Vec<u32> = (1..=dd + 1).collect();
        Partitions::new(
            d,
            xs.iter().map(|r| r.to_string()).collect(),
            PartitionX { assign: xs },
            ys.iter().map(|t| t.to_string()).collect(),
            PartitionY { assign: ys },
        )
        .expect("maximal partition is valid")
    }

    /// Random partition leaving at least one encoding cell and one basis unused.
    pub fn random_non_maximal<R: Rng + ?Sized>(d: PrimeDim, rng: &mut R) -> Self {
        let dd = d.get();
        let mut cells: Vec<u32> = (1..=dd * (dd + 1)).collect();
        cells.shuffle(rng);
        cells.truncate(rng.random_range(1..dd * (dd + 1)) as usize);
        let mut bases: Vec<u32> = (1..=dd + 1).collect();
        bases.shuffle(rng);
        bases.truncate(rng.random_range(1..=dd) as usize);
        let nx = rng.random_range(1..=cells.len() + 3);
        let ny = rng.random_range(1..=bases.len() + 2);
        let xs: Vec<u32> = (0..nx).map(|_| cells[rng.random_range(0..cells.len())]).collect();
        let ys: Vec<u32> = (0..ny).map(|_| bases[rng.random_range(0..bases.len())]).collect();
        Partitions::new(
            d,
            (0..nx).map(|i| format!("x{i}")).collect(),
            PartitionX { assign: xs },
            (0..ny).map(|i| format!("y{i}")).collect(),
            PartitionY { assign: ys },
        )
        .expect("random partition is valid")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: PartitionsDoc = serde_json::from_str(text)?;
        let d = PrimeDim::new(doc.dim)?;
        let (xl, xa) = doc.x_cells.into_iter().unzip();
        let (yl, ya) = doc.y_cells.into_iter().unzip();
        Partitions::new(d, xl, PartitionX { assign: xa }, yl, PartitionY { assign: ya })
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = PartitionsDoc {
            dim: self.dim().get(),
            x_cells: self.spaces.x().iter().cloned().zip(self.x.assign.iter().copied()).collect(),
            y_cells: self.spaces.y().iter().cloned().zip(self.y.assign.iter().copied()).collect(),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    pub fn dim(&self) -> PrimeDim {
        self.spaces.dim()
    }

    /// Spaces with output alphabet `{0, ..., d-1}`.
    pub fn spaces(&self) -> &TaskSpaces {
        &self.spaces
    }

    pub fn x(&self) -> &PartitionX {
        &self.x
    }

    pub fn y(&self) -> &PartitionY {
        &self.y
    }

    /// `(k, j)` of the cell holding input `x`.
    pub fn x_cell(&self, x: usize) -> (u32, u32) {
        decode_cell(self.x.assign[x], self.dim()).expect("validated cell")
    }

    pub fn y_cell(&self, y: usize) -> u32 {
        self.y.assign[y]
    }

    pub fn is_maximal(&self) -> bool {
        let dd = self.dim().get();
        let mut xs = self.x.assign.clone();
        xs.sort_unstable();
        xs.dedup();
        let mut ys = self.y.assign.clone();
        ys.sort_unstable();
        ys.dedup();
        xs.len() == (dd * (dd + 1)) as usize && ys.len() == (dd + 1) as usize
    }
}
