//! Classical simulation of stabilizer prepare-and-measure strategies.
//!
//! Alice, holding `x` in cell `(k, j)`, sends `m = j - lambda_k (mod d)`;
//! Bob, holding `y` in basis `t`, outputs `b = m + lambda_t (mod d)`, where
//! `lambda_1, ..., lambda_{d+1}` are uniform shared dits. Same-basis cells
//! give `b = j`; cross-basis cells give a uniform `b`, which is exactly the
//! MUB overlap table.

mod partition;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use partition::{decode_cell, PartitionX, PartitionY, Partitions};

use crate::algebra::PrimeDim;
use crate::channel::{
    correlation_distance, eval_quantum, ClassicalPureStrategy, Correlation, Measurement,
    Preparation, QuantumStrategy, SharedStrategy, Strategy, TaskSpaces,
};
use crate::error::{Error, Result};
use crate::stabilizer::StabilizerStateId;

/// Agreement threshold for the exact comparison.
pub const EXACT_TOL: f64 = 1e-12;

/// Encode every cell `(k, j)` as `psi^j_k`, measure basis `t`, output the outcome.
pub fn build_stabilizer_strategy(parts: &Partitions) -> Result<QuantumStrategy> {
    let s = parts.spaces();
    let d = parts.dim();
    let encode = (0..s.nx())
        .map(|x| {
            let (k, j) = parts.x_cell(x);
            Preparation::Stabilizer(StabilizerStateId { k, j })
        })
        .collect();
    let decode = (0..s.ny()).map(|y| Measurement::Mub(parts.y_cell(y))).collect();
    let post = vec![(0..d.size()).collect(); s.ny()];
    QuantumStrategy::new(s.clone(), encode, decode, post, EXACT_TOL)
}

/// Alice's message for cell `(k, j)` given the shared dits.
#[inline]
pub fn protocol_message(d: PrimeDim, k: u32, j: u32, lambda: &[u32]) -> u32 {
    let dd = d.get();
    (j + dd - lambda[k as usize - 1]) % dd
}

/// Bob's output for basis `t` and message `m`.
#[inline]
pub fn protocol_output(d: PrimeDim, t: u32, m: u32, lambda: &[u32]) -> u32 {
    (m + lambda[t as usize - 1]) % d.get()
}

/// How the `d + 1` shared dits are expanded into equally weighted assignments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DitExpansion {
    /// All `d^(d+1)` assignments of independent dits.
    Independent,
    /// `d^2` assignments `lambda_k = a + b k` (`k <= d`), `lambda_{d+1} = b`: every pair of
    /// distinct dits is uniform on `Z_d^2`, which is all the protocol reads.
    Pairwise,
}

/// The `d + 1` shared uniform dits.
#[derive(Clone, Copy, Debug)]
pub struct SharedDits {
    pub dim: PrimeDim,
}

impl SharedDits {
    pub fn new(dim: PrimeDim) -> Self {
        SharedDits { dim }
    }

    pub fn count(&self) -> usize {
        self.dim.size() + 1
    }

    pub fn expand(&self, mode: DitExpansion) -> Result<Vec<Vec<u32>>> {
        let d = self.dim.get();
        let n = self.count();
        match mode {
            DitExpansion::Independent => {
                let total = (d as u64)
                    .checked_pow(n as u32)
                    .filter(|&t| t <= 1 << 24)
                    .ok_or(Error::BudgetExceeded {
                        candidates: (d as u128).pow(n as u32),
                        budget: 1 << 24,
                    })?;
                Ok((0..total)
                    .map(|mut i| {
                        (0..n)
                            .map(|_| {
                                let v = (i % d as u64) as u32;
                                i /= d as u64;
                                v
                            })
                            .collect()
                    })
                    .collect())
            }
            DitExpansion::Pairwise => {
                let mut out = Vec::with_capacity((d * d) as usize);
                for a in 0..d {
                    for b in 0..d {
                        let mut l: Vec<u32> = (1..=d).map(|k| (a + b * k) % d).collect();
                        l.push(b);
                        out.push(l);
                    }
                }
                Ok(out)
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<u32> {
        (0..self.count()).map(|_| rng.random_range(0..self.dim.get())).collect()
    }
}

/// Deterministic classical strategy run for one assignment of the shared dits.
pub fn protocol_strategy(parts: &Partitions, lambda: &[u32]) -> Result<ClassicalPureStrategy> {
    let d = parts.dim();
    let s = parts.spaces();
    let encode = (0..s.nx())
        .map(|x| {
            let (k, j) = parts.x_cell(x);
            protocol_message(d, k, j, lambda)
        })
        .collect();
    let decode = (0..s.ny())
        .map(|y| {
            let t = parts.y_cell(y);
            (0..d.get()).map(|m| protocol_output(d, t, m, lambda) as usize).collect()
        })
        .collect();
    ClassicalPureStrategy::new(s.clone(), encode, decode)
}

/// Exact table of the shared-dit protocol, summing over the dits each cell reads.
pub fn classical_simulation_exact(parts: &Partitions) -> Result<Correlation> {
    let d = parts.dim();
    let dd = d.get();
    let s = parts.spaces();
    let mut values = vec![BigRational::zero(); s.cells()];
    let mut lambda = vec![0u32; dd as usize + 1];
    for x in 0..s.nx() {
        let (k, j) = parts.x_cell(x);
        for y in 0..s.ny() {
            let t = parts.y_cell(y);
            if t == k {
                let w = BigRational::new(BigInt::from(1), BigInt::from(dd));
                for lk in 0..dd {
                    lambda[k as usize - 1] = lk;
                    let b = protocol_output(d, t, protocol_message(d, k, j, &lambda), &lambda);
                    values[s.index(x, y, b as usize)] += &w;
                }
            } else {
                let w = BigRational::new(BigInt::from(1), BigInt::from(dd * dd));
                for lk in 0..dd {
                    for lt in 0..dd {
                        lambda[k as usize - 1] = lk;
                        lambda[t as usize - 1] = lt;
                        let b = protocol_output(d, t, protocol_message(d, k, j, &lambda), &lambda);
                        values[s.index(x, y, b as usize)] += &w;
                    }
                }
            }
        }
    }
    Correlation::exact(s.clone(), values)
}

/// Empirical table with per-cell standard errors `sqrt(p(1-p)/n)`.
#[derive(Clone, Debug)]
pub struct SampledCorrelation {
    pub correlation: Correlation,
    pub std_errors: Vec<f64>,
    pub n_samples: u64,
    pub seed: u64,
}

/// Runs the protocol on `n_samples` seeded draws of the shared dits.
pub fn classical_simulation_sampled(parts: &Partitions, n_samples: u64, seed: u64) -> Result<SampledCorrelation> {
    if n_samples == 0 {
        return Err(Error::out_of_range("n_samples", 0, 1, u64::MAX));
    }
    let d = parts.dim();
    let s = parts.spaces();
    let dits = SharedDits::new(d);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; s.cells()];
    let cells_x: Vec<_> = (0..s.nx()).map(|x| parts.x_cell(x)).collect();
    let cells_y: Vec<_> = (0..s.ny()).map(|y| parts.y_cell(y)).collect();
    for _ in 0..n_samples {
        let lambda = dits.sample(&mut rng);
        for (x, &(k, j)) in cells_x.iter().enumerate() {
            let m = protocol_message(d, k, j, &lambda);
            for (y, &t) in cells_y.iter().enumerate() {
                counts[s.index(x, y, protocol_output(d, t, m, &lambda) as usize)] += 1;
            }
        }
    }
    let n = BigInt::from(n_samples);
    let values = counts
        .iter()
        .map(|&c| BigRational::new(BigInt::from(c), n.clone()))
        .collect();
    let std_errors = counts
        .iter()
        .map(|&c| {
            let p = c as f64 / n_samples as f64;
            (p * (1.0 - p) / n_samples as f64).sqrt()
        })
        .collect();
    Ok(SampledCorrelation {
        correlation: Correlation::exact(s.clone(), values)?,
        std_errors,
        n_samples,
        seed,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyMode {
    Exact,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Theorem1Report {
    pub max_deviation: f64,
    pub pass: bool,
    pub mode: VerifyMode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_samples: Option<u64>,
    /// Pass threshold on `max_deviation`.
    pub threshold: f64,
}

/// Compares the Born-rule table of the stabilizer strategy with the exact classical table.
pub fn verify_theorem1(parts: &Partitions) -> Result<Theorem1Report> {
    let q = build_stabilizer_strategy(parts)?;
    let quantum = eval_quantum(&q, parts.spaces(), EXACT_TOL)?;
    let classical = classical_simulation_exact(parts)?;
    let dev = correlation_distance(&quantum, &classical)?;
    Ok(Theorem1Report {
        max_deviation: dev,
        pass: dev < EXACT_TOL,
        mode: VerifyMode::Exact,
        seed: None,
        n_samples: None,
        threshold: EXACT_TOL,
    })
}

/// Sampled comparison; passes when the deviation is below `5 / sqrt(n)`.
pub fn verify_theorem1_sampled(parts: &Partitions, n_samples: u64, seed: u64) -> Result<Theorem1Report> {
    let q = build_stabilizer_strategy(parts)?;
    let quantum = eval_quantum(&q, parts.spaces(), EXACT_TOL)?;
    let sampled = classical_simulation_sampled(parts, n_samples, seed)?;
    let dev = correlation_distance(&quantum, &sampled.correlation)?;
    let threshold = 5.0 / (n_samples as f64).sqrt();
    Ok(Theorem1Report {
        max_deviation: dev,
        pass: dev < threshold,
        mode: VerifyMode::Sampled,
        seed: Some(seed),
        n_samples: Some(n_samples),
        threshold,
    })
}

/// Classical shared strategy reproducing a mixture of stabilizer extreme strategies.
///
/// Each atom `(w, parts)` contributes the `d^2` pairwise dit assignments at weight `w / d^2`.
pub fn simulate_shared_stabilizer(atoms: &[(BigRational, Partitions)]) -> Result<SharedStrategy> {
    let first = atoms
        .first()
        .ok_or_else(|| Error::InvalidWeights("no atoms".into()))?;
    let spaces: &TaskSpaces = first.1.spaces();
    let d = spaces.dim();
    let expansion = SharedDits::new(d).expand(DitExpansion::Pairwise)?;
    let share = BigRational::from_integer(BigInt::from(expansion.len()));
    let mut out = Vec::with_capacity(atoms.len() * expansion.len());
    for (w, parts) in atoms {
        if parts.spaces() != spaces {
            return Err(Error::AlphabetMismatch("mixture atoms use different alphabets".into()));
        }
        let wl = w / &share;
        for lambda in &expansion {
            out.push((wl.clone(), Strategy::Classical(protocol_strategy(parts, lambda)?)));
        }
    }
    SharedStrategy::new(out)
}

/// Quantum shared strategy over the extreme stabilizer strategies of the given partitions.
pub fn shared_stabilizer_quantum(atoms: &[(BigRational, Partitions)]) -> Result<SharedStrategy> {
    let out = atoms
        .iter()
        .map(|(w, p)| build_stabilizer_strategy(p).map(|q| (w.clone(), Strategy::Quantum(q))))
        .collect::<Result<Vec<_>>>()?;
    SharedStrategy::new(out)
}
