use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::spaces::TaskSpaces;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArithmeticMode {
    Exact,
    Float,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Entries {
    Exact(Vec<BigRational>),
    Float { values: Vec<f64>, tol: f64 },
}

/// Conditional table `p(b|x,y)`, stored flat with `b` fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct Correlation {
    spaces: TaskSpaces,
    entries: Entries,
}

/// `"num/den"`, always with an explicit denominator.
pub fn fraction_string(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

impl Correlation {
    pub fn exact(spaces: TaskSpaces, values: Vec<BigRational>) -> Result<Self> {
        if values.len() != spaces.cells() {
            return Err(Error::Internal(format!(
                "{} entries for {} cells",
                values.len(),
                spaces.cells()
            )));
        }
        let one = BigRational::one();
        for (i, v) in values.iter().enumerate() {
            if v.is_negative() || *v > one {
                return Err(Error::Internal(format!("entry {i} = {v} outside [0,1]")));
            }
        }
        for x in 0..spaces.nx() {
            for y in 0..spaces.ny() {
                let s: BigRational = (0..spaces.nb())
                    .map(|b| values[spaces.index(x, y, b)].clone())
                    .sum();
                if s != one {
                    return Err(Error::Internal(format!(
                        "row (x={}, y={}) sums to {s}",
                        spaces.x()[x],
                        spaces.y()[y]
                    )));
                }
            }
        }
        Ok(Correlation {
            spaces,
            entries: Entries::Exact(values),
        })
    }

    /// Float table; entries within `tol` of `[0, 1]` are clamped, rows must sum to 1 within `tol`.
    pub fn float(spaces: TaskSpaces, mut values: Vec<f64>, tol: f64) -> Result<Self> {
        if values.len() != spaces.cells() {
            return Err(Error::Internal(format!(
                "{} entries for {} cells",
                values.len(),
                spaces.cells()
            )));
        }
        let slack = tol.max(1e-12);
        for (i, v) in values.iter_mut().enumerate() {
            if !v.is_finite() || *v < -slack || *v > 1.0 + slack {
                return Err(Error::Internal(format!("entry {i} = {v} outside [0,1]")));
            }
            *v = v.clamp(0.0, 1.0);
        }
        for x in 0..spaces.nx() {
            for y in 0..spaces.ny() {
                let s: f64 = (0..spaces.nb()).map(|b| values[spaces.index(x, y, b)]).sum();
                if (s - 1.0).abs() > slack * spaces.nb() as f64 {
                    return Err(Error::Internal(format!(
                        "row (x={}, y={}) sums to {s}",
                        spaces.x()[x],
                        spaces.y()[y]
                    )));
                }
            }
        }
        Ok(Correlation {
            spaces,
            entries: Entries::Float { values, tol: slack },
        })
    }

    pub fn spaces(&self) -> &TaskSpaces {
        &self.spaces
    }

    pub fn entries(&self) -> &Entries {
        &self.entries
    }

    pub fn mode(&self) -> ArithmeticMode {
        match self.entries {
            Entries::Exact(_) => ArithmeticMode::Exact,
            Entries::Float { .. } => ArithmeticMode::Float,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.mode() == ArithmeticMode::Exact
    }

    /// Declared tolerance; zero in exact mode.
    pub fn tol(&self) -> f64 {
        match self.entries {
            Entries::Exact(_) => 0.0,
            Entries::Float { tol, .. } => tol,
        }
    }

    pub fn get(&self, x: usize, y: usize, b: usize) -> f64 {
        let i = self.spaces.index(x, y, b);
        match &self.entries {
            Entries::Exact(v) => v[i].to_f64().unwrap_or(f64::NAN),
            Entries::Float { values, .. } => values[i],
        }
    }

    pub fn get_exact(&self, x: usize, y: usize, b: usize) -> Option<&BigRational> {
        match &self.entries {
            Entries::Exact(v) => Some(&v[self.spaces.index(x, y, b)]),
            Entries::Float { .. } => None,
        }
    }

    pub fn values_f64(&self) -> Vec<f64> {
        match &self.entries {
            Entries::Exact(v) => v.iter().map(|q| q.to_f64().unwrap_or(f64::NAN)).collect(),
            Entries::Float { values, .. } => values.clone(),
        }
    }

    fn cell_string(&self, i: usize) -> String {
        match &self.entries {
            Entries::Exact(v) => fraction_string(&v[i]),
            Entries::Float { values, .. } => format!("{}", values[i]),
        }
    }

    /// CSV with header `x,y,b,p`.
    pub fn to_csv(&self) -> String {
        let s = &self.spaces;
        let mut out = String::from("x,y,b,p\n");
        for x in 0..s.nx() {
            for y in 0..s.ny() {
                for b in 0..s.nb() {
                    let _ = writeln!(
                        out,
                        "{},{},{},{}",
                        s.x()[x],
                        s.y()[y],
                        s.b()[b],
                        self.cell_string(s.index(x, y, b))
                    );
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let s = &self.spaces;
        let mut table = Vec::with_capacity(s.cells());
        for x in 0..s.nx() {
            for y in 0..s.ny() {
                for b in 0..s.nb() {
                    table.push(json!({
                        "x": s.x()[x],
                        "y": s.y()[y],
                        "b": s.b()[b],
                        "p": self.cell_string(s.index(x, y, b)),
                    }));
                }
            }
        }
        let mut v = json!({
            "mode": self.mode(),
            "dim": s.dim().get(),
            "X": s.x(),
            "Y": s.y(),
            "B": s.b(),
            "table": table,
        });
        if let Entries::Float { tol, .. } = self.entries {
            v["tol"] = json!(tol);
        }
        v
    }
}

/// `max |p - q|` over all cells.
pub fn correlation_distance(p: &Correlation, q: &Correlation) -> Result<f64> {
    if let Some(d) = correlation_distance_exact(p, q)? {
        return Ok(d.to_f64().unwrap_or(f64::NAN));
    }
    let a = p.values_f64();
    let b = q.values_f64();
    Ok(a.iter()
        .zip(&b)
        .map(|(u, v)| (u - v).abs())
        .fold(0.0, f64::max))
}

/// Exact distance when both tables are exact.
pub fn correlation_distance_exact(p: &Correlation, q: &Correlation) -> Result<Option<BigRational>> {
    p.spaces.ensure_same(&q.spaces)?;
    match (&p.entries, &q.entries) {
        (Entries::Exact(a), Entries::Exact(b)) => {
            let mut best = BigRational::zero();
            for (u, v) in a.iter().zip(b) {
                let d = (u - v).abs();
                if d > best {
                    best = d;
                }
            }
            Ok(Some(best))
        }
        _ => Ok(None),
    }
}
