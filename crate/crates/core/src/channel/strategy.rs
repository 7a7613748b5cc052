use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use super::spaces::TaskSpaces;
use crate::algebra::{bloch_state, DenseOperator};
use crate::error::{Error, Result, ValidationError};
use crate::stabilizer::{mub_projectors, StabilizerStateId};

/// Deterministic classical protocol: encoder `E: X -> Z_d` and decoders `D_y: Z_d -> B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalPureStrategy {
    spaces: TaskSpaces,
    encode: Vec<u32>,
    decode: Vec<Vec<usize>>,
}

impl ClassicalPureStrategy {
    /// `encode[x]` is the message for input `x`; `decode[y][m]` the output index.
    pub fn new(spaces: TaskSpaces, encode: Vec<u32>, decode: Vec<Vec<usize>>) -> Result<Self> {
        let d = spaces.dim().get();
        if encode.len() != spaces.nx() {
            return Err(Error::AlphabetMismatch(format!(
                "encoder covers {} inputs, X has {}",
                encode.len(),
                spaces.nx()
            )));
        }
        if let Some((x, m)) = encode.iter().enumerate().find(|(_, &m)| m >= d) {
            return Err(Error::AlphabetMismatch(format!(
                "encoder sends message {m} for x={} but d={d}",
                spaces.x()[x]
            )));
        }
        if decode.len() != spaces.ny() {
            return Err(Error::AlphabetMismatch(format!(
                "{} decoders for |Y|={}",
                decode.len(),
                spaces.ny()
            )));
        }
        for (y, dy) in decode.iter().enumerate() {
            if dy.len() != d as usize {
                return Err(Error::AlphabetMismatch(format!(
                    "decoder for y={} has {} entries, expected {d}",
                    spaces.y()[y],
                    dy.len()
                )));
            }
            if let Some(&b) = dy.iter().find(|&&b| b >= spaces.nb()) {
                return Err(Error::AlphabetMismatch(format!(
                    "decoder for y={} outputs index {b}, |B|={}",
                    spaces.y()[y],
                    spaces.nb()
                )));
            }
        }
        Ok(ClassicalPureStrategy {
            spaces,
            encode,
            decode,
        })
    }

    pub fn spaces(&self) -> &TaskSpaces {
        &self.spaces
    }

    pub fn encode(&self) -> &[u32] {
        &self.encode
    }

    pub fn decode(&self) -> &[Vec<usize>] {
        &self.decode
    }

    /// Output index for inputs `(x, y)`.
    pub fn output(&self, x: usize, y: usize) -> usize {
        self.decode[y][self.encode[x] as usize]
    }
}

/// A validated measurement: positive effects summing to the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct Povm {
    effects: Vec<DenseOperator>,
}

impl Povm {
    pub fn new(effects: Vec<DenseOperator>, tol: f64) -> std::result::Result<Self, ValidationError> {
        let first = effects.first().ok_or(ValidationError::EmptyPovm)?;
        let n = first.dim();
        let mut sum = DenseOperator::zeros(n);
        for e in &effects {
            if e.dim() != n {
                return Err(ValidationError::DimensionMismatch {
                    expected: n,
                    found: e.dim(),
                });
            }
            e.validate_effect(tol)?;
            sum = &sum + e;
        }
        let deviation = sum.max_abs_diff(&DenseOperator::identity(n));
        if deviation > tol {
            return Err(ValidationError::PovmIncomplete { deviation });
        }
        Ok(Povm { effects })
    }

    pub fn effects(&self) -> &[DenseOperator] {
        &self.effects
    }

    pub fn dim(&self) -> usize {
        self.effects[0].dim()
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    /// Whether the effects are linearly independent as real vectors.
    ///
    /// Necessary for extremality of a rank-1 POVM; not a full extremality test.
    pub fn has_independent_effects(&self, tol: f64) -> bool {
        let rows: Vec<Vec<f64>> = self.effects.iter().map(|e| e.real_coords()).collect();
        let cols = rows[0].len();
        if rows.len() > cols {
            return false;
        }
        let m = DMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j]);
        let sv = m.singular_values();
        let top = sv.max();
        top > 0.0 && sv.iter().all(|&s| s > tol * top)
    }
}

/// Encoding of one input.
#[derive(Clone, Debug, PartialEq)]
pub enum Preparation {
    Stabilizer(StabilizerStateId),
    /// Qubit Bloch vector.
    Bloch([f64; 3]),
    Matrix(DenseOperator),
}

/// Measurement for one receiver input.
#[derive(Clone, Debug, PartialEq)]
pub enum Measurement {
    /// Projective measurement in MUB basis `k`, outcome `j` labelling `psi^j_k`.
    Mub(u32),
    Povm(Povm),
}

/// Prepare-and-measure protocol with explicit outcome post-processing.
#[derive(Clone, Debug)]
pub struct QuantumStrategy {
    spaces: TaskSpaces,
    encode: Vec<Preparation>,
    decode: Vec<Measurement>,
    post: Vec<Vec<usize>>,
    states: Vec<DenseOperator>,
    effects: Vec<Vec<DenseOperator>>,
}

impl QuantumStrategy {
    /// Validates every preparation, measurement and post-processing map.
    pub fn new(
        spaces: TaskSpaces,
        encode: Vec<Preparation>,
        decode: Vec<Measurement>,
        post: Vec<Vec<usize>>,
        tol: f64,
    ) -> Result<Self> {
        let d = spaces.dim();
        let n = d.size();
        if encode.len() != spaces.nx() {
            return Err(Error::AlphabetMismatch(format!(
                "{} encodings for |X|={}",
                encode.len(),
                spaces.nx()
            )));
        }
        if decode.len() != spaces.ny() || post.len() != spaces.ny() {
            return Err(Error::AlphabetMismatch(format!(
                "{} measurements and {} post maps for |Y|={}",
                decode.len(),
                post.len(),
                spaces.ny()
            )));
        }
        let mut states = Vec::with_capacity(encode.len());
        for (x, prep) in encode.iter().enumerate() {
            let ctx = || format!("encode[{}]", spaces.x()[x]);
            let rho = match prep {
                Preparation::Stabilizer(id) => {
                    let id = StabilizerStateId::new(d, id.k, id.j)?;
                    crate::stabilizer::stabilizer_state(d, id)?
                }
                Preparation::Bloch(v) => {
                    if !d.is_qubit() {
                        return Err(Error::invalid(
                            ctx(),
                            ValidationError::DimensionMismatch {
                                expected: n,
                                found: 2,
                            },
                        ));
                    }
                    bloch_state(*v).map_err(|e| Error::invalid(ctx(), e))?
                }
                Preparation::Matrix(m) => {
                    if m.dim() != n {
                        return Err(Error::invalid(
                            ctx(),
                            ValidationError::DimensionMismatch {
                                expected: n,
                                found: m.dim(),
                            },
                        ));
                    }
                    m.validate_density(tol).map_err(|e| Error::invalid(ctx(), e))?;
                    m.clone()
                }
            };
            states.push(rho);
        }
        let bases = mub_projectors(d)?;
        let mut effects = Vec::with_capacity(decode.len());
        for (y, meas) in decode.iter().enumerate() {
            let ctx = || format!("decode[{}]", spaces.y()[y]);
            let eff = match meas {
                Measurement::Mub(k) => {
                    if *k < 1 || *k > d.get() + 1 {
                        return Err(Error::out_of_range("MUB index k", *k as u64, 1, d.get() as u64 + 1));
                    }
                    bases[*k as usize - 1].projectors.clone()
                }
                Measurement::Povm(p) => {
                    let p = Povm::new(p.effects().to_vec(), tol).map_err(|e| Error::invalid(ctx(), e))?;
                    if p.dim() != n {
                        return Err(Error::invalid(
                            ctx(),
                            ValidationError::DimensionMismatch {
                                expected: n,
                                found: p.dim(),
                            },
                        ));
                    }
                    p.effects
                }
            };
            if post[y].len() != eff.len() {
                return Err(Error::AlphabetMismatch(format!(
                    "post map for y={} has {} entries, measurement has {} outcomes",
                    spaces.y()[y],
                    post[y].len(),
                    eff.len()
                )));
            }
            if let Some(&b) = post[y].iter().find(|&&b| b >= spaces.nb()) {
                return Err(Error::AlphabetMismatch(format!(
                    "post map for y={} outputs index {b}, |B|={}",
                    spaces.y()[y],
                    spaces.nb()
                )));
            }
            effects.push(eff);
        }
        Ok(QuantumStrategy {
            spaces,
            encode,
            decode,
            post,
            states,
            effects,
        })
    }

    pub fn spaces(&self) -> &TaskSpaces {
        &self.spaces
    }

    pub fn encode(&self) -> &[Preparation] {
        &self.encode
    }

    pub fn decode(&self) -> &[Measurement] {
        &self.decode
    }

    pub fn post(&self) -> &[Vec<usize>] {
        &self.post
    }

    /// Resolved density operator for input `x`.
    pub fn state(&self, x: usize) -> &DenseOperator {
        &self.states[x]
    }

    /// Resolved effects for input `y`.
    pub fn effects(&self, y: usize) -> &[DenseOperator] {
        &self.effects[y]
    }

    /// All encodings are pure stabilizer states and all decodings MUB measurements.
    pub fn is_stabilizer(&self) -> bool {
        self.encode
            .iter()
            .all(|p| matches!(p, Preparation::Stabilizer(_)))
            && self.decode.iter().all(|m| matches!(m, Measurement::Mub(_)))
    }

    /// Same strategy with the encoding of `x` replaced.
    pub fn with_encoding(&self, x: usize, prep: Preparation, tol: f64) -> Result<Self> {
        let mut encode = self.encode.clone();
        if x >= encode.len() {
            return Err(Error::out_of_range("input index", x as u64, 0, encode.len() as u64 - 1));
        }
        encode[x] = prep;
        QuantumStrategy::new(
            self.spaces.clone(),
            encode,
            self.decode.clone(),
            self.post.clone(),
            tol,
        )
    }
}

#[derive(Clone, Debug)]
pub enum Strategy {
    Classical(ClassicalPureStrategy),
    Quantum(QuantumStrategy),
}

impl Strategy {
    pub fn spaces(&self) -> &TaskSpaces {
        match self {
            Strategy::Classical(s) => s.spaces(),
            Strategy::Quantum(s) => s.spaces(),
        }
    }
}

/// Weight tolerance for shared strategies.
pub const WEIGHT_TOL: f64 = 1e-12;

/// Convex combination of pure strategies over common spaces.
#[derive(Clone, Debug)]
pub struct SharedStrategy {
    spaces: TaskSpaces,
    atoms: Vec<(BigRational, Strategy)>,
}

impl SharedStrategy {
    pub fn new(atoms: Vec<(BigRational, Strategy)>) -> Result<Self> {
        let first = atoms
            .first()
            .ok_or_else(|| Error::InvalidWeights("no atoms".into()))?;
        let spaces = first.1.spaces().clone();
        let classical = matches!(first.1, Strategy::Classical(_));
        let mut total = BigRational::zero();
        for (w, s) in &atoms {
            spaces.ensure_same(s.spaces())?;
            if matches!(s, Strategy::Classical(_)) != classical {
                return Err(Error::InvalidInput(
                    "shared strategy mixes classical and quantum atoms".into(),
                ));
            }
            if w.is_negative() {
                return Err(Error::InvalidWeights(format!("negative weight {w}")));
            }
            total += w;
        }
        let dev = (total - BigRational::one()).abs().to_f64().unwrap_or(f64::INFINITY);
        if dev > WEIGHT_TOL {
            return Err(Error::InvalidWeights(format!("weights sum off by {dev:e}")));
        }
        Ok(SharedStrategy { spaces, atoms })
    }

    /// Builds from floating weights, each taken at its exact binary value.
    pub fn from_f64_weights(atoms: Vec<(f64, Strategy)>) -> Result<Self> {
        let atoms = atoms
            .into_iter()
            .map(|(w, s)| {
                BigRational::from_f64(w)
                    .map(|w| (w, s))
                    .ok_or_else(|| Error::InvalidWeights(format!("non-finite weight {w}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(atoms)
    }

    pub fn spaces(&self) -> &TaskSpaces {
        &self.spaces
    }

    pub fn atoms(&self) -> &[(BigRational, Strategy)] {
        &self.atoms
    }

    /// Whether the weights sum to exactly one.
    pub fn weights_exact(&self) -> bool {
        let total: BigRational = self.atoms.iter().map(|(w, _)| w.clone()).sum();
        total == BigRational::from_integer(BigInt::one())
    }
}
