//! Clifford membership and the single-qudit Clifford group modulo phase.
//!
//! A Clifford unitary is represented by its conjugation action on the two
//! generators `X = P(1,0)` and `Z = P(0,1)`; the image of every other
//! Heisenberg-Weyl operator follows by label arithmetic.

use std::collections::{HashMap, VecDeque};
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::operator::DenseOperator;
use super::pauli::{
    all_points, make_pauli, make_phase, make_shift, pauli_compose, pauli_pow, symplectic_form,
    PauliLabel, PrimeDim,
};
use crate::error::{Error, Result, ValidationError};

/// Band above `tol` in which a Pauli coefficient is neither clearly zero
/// nor clearly unit-modulus.
const INDETERMINATE_FACTOR: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Generator {
    X,
    Z,
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::X => write!(f, "X"),
            Generator::Z => write!(f, "Z"),
        }
    }
}

/// Exact conjugation action `P -> U P U^dagger` on labels, phases included.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CliffordAction {
    pub x_image: PauliLabel,
    pub z_image: PauliLabel,
}

impl CliffordAction {
    pub const fn identity() -> Self {
        CliffordAction {
            x_image: PauliLabel::point(1, 0),
            z_image: PauliLabel::point(0, 1),
        }
    }

    /// Image of an arbitrary labelled operator.
    pub fn apply(&self, d: PrimeDim, label: PauliLabel) -> PauliLabel {
        let start = PauliLabel {
            a1: 0,
            a2: 0,
            phase: label.phase,
        };
        let acc = pauli_compose(d, start, pauli_pow(d, self.x_image, label.a1));
        let acc = pauli_compose(d, acc, pauli_pow(d, self.z_image, label.a2));
        if d.is_qubit() {
            acc.with_phase_shift(d, label.a1 * label.a2)
        } else {
            acc
        }
    }

    /// `self` applied after `inner`.
    pub fn after(&self, d: PrimeDim, inner: &CliffordAction) -> CliffordAction {
        CliffordAction {
            x_image: self.apply(d, inner.x_image),
            z_image: self.apply(d, inner.z_image),
        }
    }

    /// Columns are the images of X and Z.
    pub fn symplectic(&self) -> [[u32; 2]; 2] {
        [
            [self.x_image.a1, self.z_image.a1],
            [self.x_image.a2, self.z_image.a2],
        ]
    }

    pub fn phases(&self) -> [u32; 2] {
        [self.x_image.phase, self.z_image.phase]
    }

    /// The images must commute like X and Z do.
    pub fn is_symplectic(&self, d: PrimeDim) -> bool {
        let x = PauliLabel::point(1, 0);
        let z = PauliLabel::point(0, 1);
        symplectic_form(d, self.x_image, self.z_image) == symplectic_form(d, x, z)
    }
}

/// A Clifford group element: its exact action plus one unitary realizing it.
#[derive(Clone, Debug)]
pub struct CliffordElement {
    pub action: CliffordAction,
    pub unitary: DenseOperator,
    /// Generator names, rightmost applied first.
    pub word: Vec<&'static str>,
}

/// Fourier, phase and the two Pauli conjugations, as exact actions and as matrices.
pub fn clifford_generators(d: PrimeDim) -> Vec<(&'static str, CliffordAction, DenseOperator)> {
    let dd = d.get();
    let n = d.size();
    let norm = 1.0 / (n as f64).sqrt();
    let fourier = DenseOperator::from_fn(n, |j, k| d.omega_pow((j * k) as u32 % dd) * norm);
    let phase_gate = if d.is_qubit() {
        DenseOperator::from_fn(2, |i, j| match (i, j) {
            (0, 0) => Complex64::new(1.0, 0.0),
            (1, 1) => Complex64::new(0.0, 1.0),
            _ => Complex64::new(0.0, 0.0),
        })
    } else {
        DenseOperator::from_fn(n, |i, j| {
            if i == j {
                d.omega_pow(((i * i.saturating_sub(1) / 2) % n) as u32)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    };
    vec![
        (
            "F",
            CliffordAction {
                x_image: PauliLabel::point(0, 1),
                z_image: PauliLabel::point(dd - 1, 0),
            },
            fourier,
        ),
        (
            "S",
            CliffordAction {
                x_image: PauliLabel::point(1, 1),
                z_image: PauliLabel::point(0, 1),
            },
            phase_gate,
        ),
        (
            "X",
            CliffordAction {
                x_image: PauliLabel::point(1, 0),
                z_image: PauliLabel {
                    a1: 0,
                    a2: 1,
                    phase: d.omega_to_phase(dd - 1),
                },
            },
            make_shift(d),
        ),
        (
            "Z",
            CliffordAction {
                x_image: PauliLabel {
                    a1: 1,
                    a2: 0,
                    phase: d.omega_to_phase(1),
                },
                z_image: PauliLabel::point(0, 1),
            },
            make_phase(d),
        ),
    ]
}

/// Breadth-first closure of the generator actions.
///
/// Restricted to `d` in {2, 3}; the group has `d^3 (d^2 - 1)` elements
/// modulo global phase.
pub fn clifford_enumerate_projective(d: PrimeDim) -> Result<Vec<CliffordElement>> {
    if d.get() > 3 {
        return Err(Error::UnsupportedDimension(
            d.get(),
            "Clifford enumeration is limited to d in {2, 3}",
        ));
    }
    let gens = clifford_generators(d);
    let mut seen: HashMap<CliffordAction, usize> = HashMap::new();
    let mut out = vec![CliffordElement {
        action: CliffordAction::identity(),
        unitary: DenseOperator::identity(d.size()),
        word: Vec::new(),
    }];
    seen.insert(CliffordAction::identity(), 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(idx) = queue.pop_front() {
        for (name, g, gm) in &gens {
            let action = g.after(d, &out[idx].action);
            if seen.contains_key(&action) {
                continue;
            }
            let unitary = gm * &out[idx].unitary;
            let mut word = vec![*name];
            word.extend(out[idx].word.iter().copied());
            seen.insert(action, out.len());
            queue.push_back(out.len());
            out.push(CliffordElement {
                action,
                unitary,
                word,
            });
        }
    }
    Ok(out)
}

/// `U G U^dagger = coefficient * P(label)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorImage {
    pub label: PauliLabel,
    pub re: f64,
    pub im: f64,
}

impl GeneratorImage {
    pub fn coefficient(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    /// Phase angle in radians.
    pub fn phase(&self) -> f64 {
        self.coefficient().arg()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConjugationTable {
    pub x: GeneratorImage,
    pub z: GeneratorImage,
}

impl ConjugationTable {
    /// Exact action, when both coefficients sit on phase-exponent roots of unity.
    pub fn to_action(&self, d: PrimeDim, tol: f64) -> Option<CliffordAction> {
        let m = d.phase_modulus();
        let exponent = |img: &GeneratorImage| -> Option<PauliLabel> {
            let turns = img.phase() / (2.0 * PI) * m as f64;
            let k = (turns.round() as i64).rem_euclid(m as i64) as u32;
            ((d.phase_factor(k) - img.coefficient()).norm() <= tol).then_some(PauliLabel {
                phase: k,
                ..img.label
            })
        };
        Some(CliffordAction {
            x_image: exponent(&self.x)?,
            z_image: exponent(&self.z)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum CliffordVerdict {
    Clifford {
        table: ConjugationTable,
    },
    NotClifford {
        generator: Generator,
        /// Largest Pauli-basis coefficient modulus of the conjugated generator.
        max_coefficient: f64,
    },
    Indeterminate {
        generator: Generator,
        label: PauliLabel,
        magnitude: f64,
    },
}

impl CliffordVerdict {
    pub fn is_clifford(&self) -> bool {
        matches!(self, CliffordVerdict::Clifford { .. })
    }
}

enum Projection {
    Single(GeneratorImage),
    Fractional(f64),
    Borderline(PauliLabel, f64),
}

fn project_onto_paulis(d: PrimeDim, conj: &DenseOperator, tol: f64) -> Projection {
    let n = d.size() as f64;
    let band = INDETERMINATE_FACTOR * tol;
    let mut unit: Option<GeneratorImage> = None;
    let mut borderline: Option<(PauliLabel, f64)> = None;
    let mut max_mod = 0.0f64;
    let mut fractional = false;
    for label in all_points(d) {
        let c = make_pauli(d, label).hs_inner(conj) / n;
        let m = c.norm();
        max_mod = max_mod.max(m);
        let from_one = (m - 1.0).abs();
        if m < tol {
            continue;
        }
        if from_one < tol {
            unit = Some(GeneratorImage {
                label,
                re: c.re,
                im: c.im,
            });
        } else if m <= band || from_one <= band {
            borderline.get_or_insert((label, m));
        } else {
            fractional = true;
        }
    }
    if fractional {
        return Projection::Fractional(max_mod);
    }
    if let Some((label, m)) = borderline {
        return Projection::Borderline(label, m);
    }
    // Paulis are orthonormal under Tr(A^dagger B)/d and conj has unit norm,
    // so with no fractional or borderline entries exactly one is unit.
    match unit {
        Some(img) => Projection::Single(img),
        None => Projection::Fractional(max_mod),
    }
}

/// Tests whether `U X U^dagger` and `U Z U^dagger` are phases times Paulis.
///
/// Coefficients whose modulus lies in `[tol, 10 tol]` of 0 or 1 produce an
/// `Indeterminate` verdict instead of a guess.
pub fn is_clifford(d: PrimeDim, u: &DenseOperator, tol: f64) -> Result<CliffordVerdict> {
    if u.dim() != d.size() {
        return Err(Error::invalid(
            "Clifford test",
            ValidationError::DimensionMismatch {
                expected: d.size(),
                found: u.dim(),
            },
        ));
    }
    u.validate_unitary(tol)
        .map_err(|e| Error::invalid("Clifford test", e))?;
    let mut images = [None, None];
    for (slot, (generator, g)) in [(Generator::X, make_shift(d)), (Generator::Z, make_phase(d))]
        .into_iter()
        .enumerate()
    {
        match project_onto_paulis(d, &g.conjugate_by(u), tol) {
            Projection::Single(img) => images[slot] = Some(img),
            Projection::Fractional(max_coefficient) => {
                return Ok(CliffordVerdict::NotClifford {
                    generator,
                    max_coefficient,
                })
            }
            Projection::Borderline(label, magnitude) => {
                return Ok(CliffordVerdict::Indeterminate {
                    generator,
                    label,
                    magnitude,
                })
            }
        }
    }
    let [Some(x), Some(z)] = images else {
        return Err(Error::Internal("missing generator image".into()));
    };
    Ok(CliffordVerdict::Clifford {
        table: ConjugationTable { x, z },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qubit() -> PrimeDim {
        PrimeDim::new(2).unwrap()
    }

    fn hadamard() -> DenseOperator {
        let s = 1.0 / 2f64.sqrt();
        DenseOperator::from_parts(&[vec![s, s], vec![s, -s]], &[vec![0.0; 2], vec![0.0; 2]])
            .unwrap()
    }

    fn t_gate() -> DenseOperator {
        DenseOperator::from_fn(2, |i, j| match (i, j) {
            (0, 0) => Complex64::new(1.0, 0.0),
            (1, 1) => Complex64::from_polar(1.0, PI / 4.0),
            _ => Complex64::new(0.0, 0.0),
        })
    }

    #[test]
    fn hadamard_swaps_x_and_z() {
        let d = qubit();
        let v = is_clifford(d, &hadamard(), 1e-9).unwrap();
        let CliffordVerdict::Clifford { table } = v else {
            panic!("{v:?}")
        };
        assert_eq!(table.x.label, PauliLabel::point(0, 1));
        assert_eq!(table.z.label, PauliLabel::point(1, 0));
        assert!((table.x.coefficient() - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn t_gate_is_not_clifford() {
        let v = is_clifford(qubit(), &t_gate(), 1e-9).unwrap();
        match v {
            CliffordVerdict::NotClifford {
                generator,
                max_coefficient,
            } => {
                assert_eq!(generator, Generator::X);
                assert!((max_coefficient - 1.0 / 2f64.sqrt()).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn identity_is_clifford_with_identity_table() {
        for d in [2, 3, 5, 7].map(|d| PrimeDim::new(d).unwrap()) {
            let v = is_clifford(d, &DenseOperator::identity(d.size()), 1e-9).unwrap();
            let CliffordVerdict::Clifford { table } = v else {
                panic!()
            };
            assert_eq!(table.to_action(d, 1e-9), Some(CliffordAction::identity()));
        }
    }

    #[test]
    fn non_unitary_is_an_error() {
        let m = DenseOperator::identity(2).scale(Complex64::new(2.0, 0.0));
        assert!(matches!(
            is_clifford(qubit(), &m, 1e-9),
            Err(Error::Invalid {
                source: ValidationError::NotUnitary { .. },
                ..
            })
        ));
    }

    #[test]
    fn near_clifford_rotation_is_indeterminate() {
        // exp(-i a X/2) rotates Z by angle a: its Y coefficient sin(a) sits in the band
        let tol = 1e-9;
        let a: f64 = 5.0 * tol;
        let (c, s) = ((a / 2.0).cos(), (a / 2.0).sin());
        let u = DenseOperator::from_fn(2, |i, j| {
            if i == j {
                Complex64::new(c, 0.0)
            } else {
                Complex64::new(0.0, -s)
            }
        });
        let v = is_clifford(qubit(), &u, tol).unwrap();
        assert!(matches!(v, CliffordVerdict::Indeterminate { .. }), "{v:?}");
    }

    #[test]
    fn generator_actions_match_their_matrices() {
        for d in [2, 3, 5].map(|d| PrimeDim::new(d).unwrap()) {
            for (name, action, u) in clifford_generators(d) {
                assert!(u.unitary_deviation() < 1e-12, "{name}");
                for label in all_points(d) {
                    let lhs = make_pauli(d, label).conjugate_by(&u);
                    let rhs = make_pauli(d, action.apply(d, label));
                    assert!(lhs.approx_eq(&rhs, 1e-12), "d={d} {name} on {label}");
                }
            }
        }
    }

    #[test]
    fn enumeration_sizes() {
        assert_eq!(clifford_enumerate_projective(qubit()).unwrap().len(), 24);
        let d3 = PrimeDim::new(3).unwrap();
        assert_eq!(clifford_enumerate_projective(d3).unwrap().len(), 216);
        let d5 = PrimeDim::new(5).unwrap();
        assert!(clifford_enumerate_projective(d5).is_err());
    }

    #[test]
    fn enumerated_unitaries_realize_their_actions() {
        for d in [2, 3].map(|d| PrimeDim::new(d).unwrap()) {
            for el in clifford_enumerate_projective(d).unwrap() {
                assert!(el.action.is_symplectic(d));
                let v = is_clifford(d, &el.unitary, 1e-9).unwrap();
                let CliffordVerdict::Clifford { table } = v else {
                    panic!("{:?}", el.word)
                };
                assert_eq!(table.to_action(d, 1e-9), Some(el.action));
            }
        }
    }

    #[test]
    fn verdict_ignores_global_phase() {
        let d = PrimeDim::new(3).unwrap();
        let phase = Complex64::from_polar(1.0, 0.7);
        for el in clifford_enumerate_projective(d).unwrap().iter().step_by(17) {
            let a = is_clifford(d, &el.unitary, 1e-9).unwrap();
            let b = is_clifford(d, &el.unitary.scale(phase), 1e-9).unwrap();
            let (CliffordVerdict::Clifford { table: ta }, CliffordVerdict::Clifford { table: tb }) =
                (a, b)
            else {
                panic!()
            };
            assert_eq!(ta.to_action(d, 1e-9), tb.to_action(d, 1e-9));
        }
        let t = t_gate();
        assert!(!is_clifford(qubit(), &t.scale(phase), 1e-9)
            .unwrap()
            .is_clifford());
    }

    #[test]
    fn verdict_closed_under_composition() {
        for d in [2, 3].map(|d| PrimeDim::new(d).unwrap()) {
            let els = clifford_enumerate_projective(d).unwrap();
            let n = els.len();
            for i in 0..40 {
                let a = &els[(i * 7 + 3) % n];
                let b = &els[(i * 13 + 5) % n];
                let prod = &a.unitary * &b.unitary;
                let v = is_clifford(d, &prod, 1e-9).unwrap();
                let CliffordVerdict::Clifford { table } = v else {
                    panic!()
                };
                assert_eq!(
                    table.to_action(d, 1e-9),
                    Some(a.action.after(d, &b.action))
                );
            }
        }
    }
}
