use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::correlation::{Correlation, Entries};
use super::spaces::TaskSpaces;
use super::strategy::{
    ClassicalPureStrategy, Measurement, Preparation, QuantumStrategy, SharedStrategy, Strategy,
};
use crate::error::{Error, Result};
use crate::stabilizer::{overlap, StabilizerStateId};

/// Deterministic table `p(b|x,y) = [b = D_y(E(x))]`.
pub fn eval_classical(strategy: &ClassicalPureStrategy, spaces: &TaskSpaces) -> Result<Correlation> {
    spaces.ensure_same(strategy.spaces())?;
    let mut values = vec![BigRational::zero(); spaces.cells()];
    for x in 0..spaces.nx() {
        for y in 0..spaces.ny() {
            values[spaces.index(x, y, strategy.output(x, y))] = BigRational::one();
        }
    }
    Correlation::exact(spaces.clone(), values)
}

/// Born-rule table `p(b|x,y) = sum_{k: post(k,y)=b} Tr(rho_x pi^{k|y})`.
pub fn eval_quantum(strategy: &QuantumStrategy, spaces: &TaskSpaces, tol: f64) -> Result<Correlation> {
    spaces.ensure_same(strategy.spaces())?;
    let mut values = vec![0.0; spaces.cells()];
    for x in 0..spaces.nx() {
        let rho = strategy.state(x);
        for y in 0..spaces.ny() {
            for (k, e) in strategy.effects(y).iter().enumerate() {
                values[spaces.index(x, y, strategy.post()[y][k])] += rho.born(e);
            }
        }
    }
    Correlation::float(spaces.clone(), values, tol)
}

/// Exact table of a stabilizer strategy from the closed-form overlaps.
pub fn eval_quantum_exact(strategy: &QuantumStrategy) -> Result<Correlation> {
    let spaces = strategy.spaces();
    let d = spaces.dim();
    let mut values = vec![BigRational::zero(); spaces.cells()];
    for x in 0..spaces.nx() {
        let Preparation::Stabilizer(id) = strategy.encode()[x] else {
            return Err(Error::InvalidInput(format!(
                "encoding of x={} is not a pure stabilizer state",
                spaces.x()[x]
            )));
        };
        for y in 0..spaces.ny() {
            let Measurement::Mub(k) = strategy.decode()[y] else {
                return Err(Error::InvalidInput(format!(
                    "decoding of y={} is not a MUB measurement",
                    spaces.y()[y]
                )));
            };
            for j in 0..d.get() {
                let p = overlap(d, id, StabilizerStateId { k, j });
                values[spaces.index(x, y, strategy.post()[y][j as usize])] += p;
            }
        }
    }
    Correlation::exact(spaces.clone(), values)
}

/// Classical atoms are exact; quantum atoms use the Born rule at `tol`.
pub fn eval_strategy(strategy: &Strategy, tol: f64) -> Result<Correlation> {
    match strategy {
        Strategy::Classical(s) => eval_classical(s, s.spaces()),
        Strategy::Quantum(q) => eval_quantum(q, q.spaces(), tol),
    }
}

/// Convex mixture of atom tables.
///
/// Exact when every atom table is exact and the weights sum to exactly one;
/// otherwise float, with tolerance covering atom tolerances and weight error.
pub fn eval_shared(shared: &SharedStrategy, tol: f64) -> Result<Correlation> {
    let atoms: Vec<(BigRational, Correlation)> = shared
        .atoms()
        .iter()
        .map(|(w, s)| eval_strategy(s, tol).map(|c| (w.clone(), c)))
        .collect::<Result<_>>()?;
    let spaces = shared.spaces().clone();
    if shared.weights_exact() && atoms.iter().all(|(_, c)| c.is_exact()) {
        let mut values = vec![BigRational::zero(); spaces.cells()];
        for (w, c) in &atoms {
            let Entries::Exact(v) = c.entries() else {
                unreachable!()
            };
            for (acc, p) in values.iter_mut().zip(v) {
                *acc += w * p;
            }
        }
        return Correlation::exact(spaces, values);
    }
    let total: BigRational = atoms.iter().map(|(w, _)| w.clone()).sum();
    let weight_err = (total - BigRational::from_integer(BigInt::one()))
        .abs()
        .to_f64()
        .unwrap_or(f64::INFINITY);
    let atom_tol = atoms.iter().map(|(_, c)| c.tol()).fold(0.0, f64::max);
    let mut values = vec![0.0; spaces.cells()];
    for (w, c) in &atoms {
        let w = w.to_f64().unwrap_or(f64::NAN);
        for (acc, p) in values.iter_mut().zip(c.values_f64()) {
            *acc += w * p;
        }
    }
    Correlation::float(spaces, values, atom_tol + weight_err + 1e-15)
}
