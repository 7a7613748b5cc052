use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use stabcomm::algebra::{
    bloch_state, clifford_enumerate_projective, is_clifford, make_pauli, pauli_compose,
    DenseOperator, PauliLabel, PrimeDim,
};
use stabcomm::channel::{
    eval_classical, eval_quantum, eval_shared, eval_strategy, ClassicalPureStrategy, Entries,
    Measurement, Preparation, QuantumStrategy, SharedStrategy, Strategy as Atom, TaskSpaces,
};
use stabcomm::optimum::{classical_optimum, LinearTask, DEFAULT_BUDGET};
use stabcomm::rac::decoding::{linear_success, MUB_X, MUB_Y, MUB_Z};
use stabcomm::rac::*;
use stabcomm::simulation::{classical_simulation_exact, PartitionX, PartitionY, Partitions};
use stabcomm::stabilizer::{magic_l1, mub_projectors, polytope_membership, StabilizerStateId};

fn dim(d: u32) -> PrimeDim {
    PrimeDim::new(d).unwrap()
}

fn prime() -> impl Strategy<Value = PrimeDim> {
    prop::sample::select(vec![2u32, 3, 5]).prop_map(dim)
}

fn bloch_ball() -> impl Strategy<Value = [f64; 3]> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b, c)| {
        let n = (a * a + b * b + c * c).sqrt().max(1.0);
        [a / n, b / n, c / n]
    })
}

fn phase_times_identity(m: &DenseOperator) -> bool {
    let c = m.get(0, 0);
    (c.norm() - 1.0).abs() < 1e-12 && m.approx_eq(&DenseOperator::identity(m.dim()).scale(c), 1e-12)
}

#[test]
fn pauli_compose_matches_matrix_product() {
    for d in [2, 3, 5].map(dim) {
        let m = d.phase_modulus();
        for a in 0..d.get() * d.get() {
            for b in 0..d.get() * d.get() {
                let l1 = PauliLabel::new(d, a / d.get(), a % d.get(), a % m).unwrap();
                let l2 = PauliLabel::new(d, b / d.get(), b % d.get(), 0).unwrap();
                let dense = &make_pauli(d, l1) * &make_pauli(d, l2);
                assert!(dense.approx_eq(&make_pauli(d, pauli_compose(d, l1, l2)), 1e-12));
            }
        }
    }
}

#[test]
fn mub_unbiased_and_complete() {
    for d in [2, 3, 5].map(dim) {
        let bases = mub_projectors(d).unwrap();
        let n = d.size();
        for b in &bases {
            let mut sum = DenseOperator::zeros(n);
            for p in &b.projectors {
                sum = &sum + p;
            }
            assert!(sum.approx_eq(&DenseOperator::identity(n), 1e-12));
        }
        for (i, b1) in bases.iter().enumerate() {
            for b2 in &bases[i + 1..] {
                for v in &b1.vectors {
                    for w in &b2.vectors {
                        let ip = v.dotc(w).norm_sqr();
                        assert!((ip - 1.0 / n as f64).abs() < 1e-12);
                    }
                }
            }
        }
    }
}

#[test]
fn clifford_closed_under_composition() {
    for d in [2, 3].map(dim) {
        let group = clifford_enumerate_projective(d).unwrap();
        for (i, u) in group.iter().enumerate().step_by(7) {
            let v = &group[(i * 5 + 3) % group.len()];
            let uv = &u.unitary * &v.unitary;
            assert!(is_clifford(d, &uv, 1e-9).unwrap().is_clifford());
        }
    }
}

fn rac_strategy_atoms(task: &RacTask, codes: &[(u64, u64)]) -> Vec<Atom> {
    let n = task.n() as usize;
    codes
        .iter()
        .map(|&(e, g)| {
            let encode = (0..task.strings()).map(|x| ((e >> x) & 1) as u32).collect();
            let decode = (0..n)
                .map(|y| (0..2).map(|m| ((g >> (2 * y + m)) & 1) as usize).collect())
                .collect();
            Atom::Classical(ClassicalPureStrategy::new(task.spaces(), encode, decode).unwrap())
        })
        .collect()
}

fn exact_entries(c: &stabcomm::channel::Correlation) -> Vec<BigRational> {
    match c.entries() {
        Entries::Exact(v) => v.clone(),
        Entries::Float { .. } => panic!("expected exact table"),
    }
}

#[test]
fn linear_objectives_peak_at_deterministic_atoms() {
    let task = RacTask::new(2).unwrap();
    let lt = LinearTask::rac(&task);
    let best = classical_optimum(&lt, DEFAULT_BUDGET).unwrap().best_value;
    let best = best.exact().unwrap().clone();
    // every two-atom mixture of deterministic strategies on the two-bit task
    let codes: Vec<(u64, u64)> = (0..16).flat_map(|e| (0..16).map(move |g| (e, g))).collect();
    let atoms = rac_strategy_atoms(&task, &codes);
    let values: Vec<BigRational> = atoms
        .iter()
        .map(|a| lt.value(&eval_strategy(a, 1e-12).unwrap()).unwrap().exact().unwrap().clone())
        .collect();
    assert_eq!(values.iter().max().unwrap(), &best);
    let third = BigRational::new(BigInt::from(1), BigInt::from(3));
    for i in (0..atoms.len()).step_by(13) {
        for j in (0..atoms.len()).step_by(17) {
            let mix = SharedStrategy::new(vec![
                (third.clone(), atoms[i].clone()),
                (BigRational::one() - &third, atoms[j].clone()),
            ])
            .unwrap();
            let v = lt.value(&eval_shared(&mix, 1e-12).unwrap()).unwrap();
            assert!(v.exact().unwrap() <= &best);
        }
    }
}

#[test]
fn decomposed_stabilizer_optimum_matches_brute_force() {
    let vertices: Vec<[f64; 3]> = [
        [0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0],
        [1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, -1.0, 0.0],
    ]
    .to_vec();
    let bases = [MUB_Z, MUB_X, MUB_Y];
    let t2 = RacTask::new(2).unwrap();
    for a in bases {
        for b in bases {
            let mubs = [a, b];
            let mut best = f64::NEG_INFINITY;
            for code in 0..6usize.pow(4) {
                let enc: Vec<[f64; 3]> = (0..4).map(|x| vertices[(code / 6usize.pow(x)) % 6]).collect();
                best = best.max(linear_success(&t2, &mubs, &enc).unwrap());
            }
            let r = stabcomm::optimum::stabilizer_vertex_optimum(&t2, Some(&mubs), DEFAULT_BUDGET).unwrap();
            assert!((r.best_value.value() - best).abs() < 1e-12, "{mubs:?}");
        }
    }
    let t3 = RacTask::new(3).unwrap();
    for mubs in [Rac3Case::II.decoding(), Rac3Case::III.decoding()] {
        let c = stabcomm::rac::decoding::decoding_coefficients(&t3, &mubs).unwrap();
        let mut best = i64::MIN;
        for code in 0..6usize.pow(8) {
            let mut s = 0i64;
            let mut r = code;
            for cx in &c {
                let v = vertices[r % 6];
                r /= 6;
                s += (0..3).map(|i| cx[i] as i64 * v[i] as i64).sum::<i64>();
            }
            best = best.max(s);
        }
        let brute = 0.5 + best as f64 / 48.0;
        let r = stabcomm::optimum::stabilizer_vertex_optimum(&t3, Some(&mubs), DEFAULT_BUDGET).unwrap();
        assert!((r.best_value.value() - brute).abs() < 1e-12, "{mubs:?}");
    }
}

fn partitions(d: PrimeDim, xs: Vec<u32>, ys: Vec<u32>) -> Partitions {
    Partitions::new(
        d,
        (0..xs.len()).map(|i| format!("x{i}")).collect(),
        PartitionX { assign: xs },
        (0..ys.len()).map(|i| format!("y{i}")).collect(),
        PartitionY { assign: ys },
    )
    .unwrap()
}

fn random_partitions() -> impl Strategy<Value = Partitions> {
    prop::sample::select(vec![2u32, 3, 5, 7]).prop_flat_map(|d| {
        let cells = d * (d + 1);
        (
            prop::collection::vec(1..=cells, 1..6),
            prop::collection::vec(1..=d + 1, 1..4),
        )
            .prop_map(move |(xs, ys)| partitions(dim(d), xs, ys))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pauli_unitary_with_scalar_power(d in prime(), a1 in 0u32..5, a2 in 0u32..5, ph in 0u32..5) {
        let l = PauliLabel::new(d, a1 % d.get(), a2 % d.get(), ph % d.phase_modulus()).unwrap();
        let p = make_pauli(d, l);
        prop_assert!(p.unitary_deviation() < 1e-12);
        prop_assert!(phase_times_identity(&p.pow(d.get())));
    }

    #[test]
    fn clifford_verdict_ignores_global_phase(i in 0usize..216, theta in 0.0..std::f64::consts::TAU, qubit in any::<bool>()) {
        let d = if qubit { dim(2) } else { dim(3) };
        let group = clifford_enumerate_projective(d).unwrap();
        let u = &group[i % group.len()].unitary;
        let v = u.scale(Complex64::from_polar(1.0, theta));
        prop_assert!(is_clifford(d, &v, 1e-9).unwrap().is_clifford());
    }

    #[test]
    fn membership_agrees_with_magic(n in bloch_ball()) {
        let d = dim(2);
        let rho = bloch_state(n).unwrap();
        let tol = 1e-9;
        let l1: f64 = n.iter().map(|a| a.abs()).sum();
        prop_assume!((l1 - 1.0).abs() > 1e-6);
        let cert = polytope_membership(d, &rho, tol).unwrap();
        let m = magic_l1(d, &rho).unwrap().value;
        prop_assert_eq!(cert.inside, m <= tol);
    }

    #[test]
    fn exact_simulation_matches_and_is_structured(parts in random_partitions()) {
        let d = parts.dim();
        let s = stabcomm::simulation::build_stabilizer_strategy(&parts).unwrap();
        let quantum = eval_quantum(&s, parts.spaces(), 1e-12).unwrap();
        let classical = classical_simulation_exact(&parts).unwrap();
        let sp = parts.spaces();
        let uniform = BigRational::new(BigInt::from(1), BigInt::from(d.get()));
        for x in 0..sp.nx() {
            let (k, j) = parts.x_cell(x);
            for y in 0..sp.ny() {
                for b in 0..sp.nb() {
                    let p = classical.get_exact(x, y, b).unwrap();
                    let want = if parts.y_cell(y) == k {
                        if b as u32 == j { BigRational::one() } else { BigRational::zero() }
                    } else {
                        uniform.clone()
                    };
                    prop_assert_eq!(p, &want);
                    prop_assert!((quantum.get(x, y, b) - classical.get(x, y, b)).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn stabilizer_entries_are_multiples_of_one_over_d(
        d in prime(),
        xs in prop::collection::vec((0u32..6, 0u32..5), 1..5),
        ys in prop::collection::vec(0u32..6, 1..4),
    ) {
        let dd = d.get();
        let spaces = TaskSpaces::indexed(d, xs.len(), ys.len(), d.size()).unwrap();
        let encode = xs
            .iter()
            .map(|&(k, j)| Preparation::Stabilizer(StabilizerStateId::new(d, k % (dd + 1) + 1, j % dd).unwrap()))
            .collect();
        let decode = ys.iter().map(|&k| Measurement::Mub(k % (dd + 1) + 1)).collect();
        let post = vec![(0..d.size()).collect(); ys.len()];
        let q = QuantumStrategy::new(spaces, encode, decode, post, 1e-12).unwrap();
        let c = eval_quantum(&q, q.spaces(), 1e-12).unwrap();
        for p in c.values_f64() {
            let scaled = p * dd as f64;
            prop_assert!((p - 1.0).abs() < 1e-12 || (scaled - scaled.round()).abs() < 1e-12);
            prop_assert!(p.abs() < 1e-12 || (p - 1.0).abs() < 1e-12 || (p - 1.0 / dd as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn shared_mixtures_are_exactly_linear(
        codes in prop::collection::vec((0u64..256, 0u64..64), 1..5),
        weights in prop::collection::vec(1i64..10, 5),
    ) {
        let task = RacTask::new(3).unwrap();
        let atoms = rac_strategy_atoms(&task, &codes);
        let total: i64 = weights[..atoms.len()].iter().sum();
        let ws: Vec<BigRational> = weights[..atoms.len()]
            .iter()
            .map(|&w| BigRational::new(BigInt::from(w), BigInt::from(total)))
            .collect();
        let mix = SharedStrategy::new(ws.iter().cloned().zip(atoms.iter().cloned()).collect()).unwrap();
        let got = exact_entries(&eval_shared(&mix, 1e-12).unwrap());
        let mut want = vec![BigRational::zero(); got.len()];
        for (w, a) in ws.iter().zip(&atoms) {
            let Atom::Classical(c) = a else { unreachable!() };
            for (acc, p) in want.iter_mut().zip(exact_entries(&eval_classical(c, c.spaces()).unwrap())) {
                *acc += w * p;
            }
        }
        prop_assert_eq!(&got, &want);
        let sp = task.spaces();
        for x in 0..sp.nx() {
            for y in 0..sp.ny() {
                let row: BigRational = (0..sp.nb()).map(|b| got[sp.index(x, y, b)].clone()).sum();
                prop_assert!(row.is_one());
            }
        }
    }

    #[test]
    fn lemma_closed_forms_match_born(e in prop::collection::vec(bloch_ball(), 8)) {
        let e3: [[f64; 3]; 8] = e.clone().try_into().unwrap();
        for case in [Rac3Case::I, Rac3Case::II, Rac3Case::III] {
            let r = rac3_case_strategies(case, &e3).unwrap();
            prop_assert!((r.closed_form - r.born()).abs() < 1e-12);
        }
        prop_assert!(rac3_closed_form(Rac3Case::I, &e3) <= 0.75 + 1e-12);
        let e2: [[f64; 3]; 4] = e[..4].to_vec().try_into().unwrap();
        let r = rac2_strategy(&e2).unwrap();
        prop_assert!((r.closed_form - r.born()).abs() < 1e-12);
    }

    #[test]
    fn small_rotation_improves_on_majority(n in 3u32..9, theta in 1e-4..0.05f64, kk in 0u32..4) {
        let task = RacTask::new(n).unwrap();
        let k = if n % 2 == 1 { 1 + kk % (n / 2) } else { kk % (n / 2) };
        let x = canonical_uplift_string(&task, k).unwrap();
        let r = single_magic_uplift(UpliftBase::for_n(n), &task, x, uplift_bloch(&task, x, theta)).unwrap();
        prop_assert!(r.gain > 0.0);
        prop_assert!(r.beats_meid);
        prop_assert!((r.analytic_per_string - r.born_per_string).abs() < 1e-12);
    }
}
