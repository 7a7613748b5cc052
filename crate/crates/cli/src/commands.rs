use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;
use serde_json::{json, Value};

use stabcomm::algebra::{bloch_state, is_clifford, CliffordVerdict, DenseOperator, PrimeDim};
use stabcomm::channel::{eval_quantum, eval_quantum_exact, fraction_string, QuantumStrategy};
use stabcomm::optimum::{classical_optimum, meid_is_optimal_check, stabilizer_vertex_optimum, LinearTask};
use stabcomm::rac::decoding::{MUB_X, MUB_Y, MUB_Z};
use stabcomm::rac::{
    self, advantage_region, canonical_uplift_string, enmq_strategy, meid_report, onmq_strategy,
    optimal_uplift, optimize_one_magic, optimize_unrestricted, rac2_epsilon_encodings,
    rac2_single_magic_encodings, rac2_strategy, rac3_case_strategies, rac3_majority_x_encodings,
    rac3_stabilizer_encodings, rac_success, region_csv, single_magic_uplift, stabilizer_report,
    uplift_bloch, uplift_coefficient, uplift_gain, Rac3Case, RacTask, RegionTask, StrategyTag,
    UpliftBase, DEFAULT_REFINE_TOL,
};
use stabcomm::simulation::{
    build_stabilizer_strategy, verify_theorem1, verify_theorem1_sampled, Partitions,
};
use stabcomm::stabilizer::{magic_l1, mub_projectors, overlap, polytope_membership, StabilizerStateId};

use crate::config::Settings;
use crate::output::{Outcome, Report};
use crate::{Failure, OptimizeMethod, RegionTaskArg};

fn to_value<T: serde::Serialize>(v: &T) -> Result<Value, Failure> {
    serde_json::to_value(v).map_err(|e| Failure::invalid(format!("serialization failed: {e}")))
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::invalid(format!("cannot read {}: {e}", path.display())))
}

fn state_label(id: StabilizerStateId) -> String {
    format!("k{}j{}", id.k, id.j)
}

pub fn mub(dim: u32, overlaps: bool) -> Result<Outcome, Failure> {
    let d = PrimeDim::new(dim)?;
    let bases = mub_projectors(d)?;
    let bases_json: Vec<Value> = bases
        .iter()
        .map(|b| {
            Ok(json!({
                "k": b.k,
                "operator": to_value(&b.operator)?,
                "projectors": b.projectors.iter().map(to_value).collect::<Result<Vec<_>, _>>()?,
            }))
        })
        .collect::<Result<_, Failure>>()?;
    let mut report = json!({ "dim": dim, "bases": bases_json });
    let mut csv = String::from("k,j,row,col,re,im\n");
    for b in &bases {
        for (j, p) in b.projectors.iter().enumerate() {
            for r in 0..d.size() {
                for c in 0..d.size() {
                    let z = p.get(r, c);
                    let _ = writeln!(csv, "{},{j},{r},{c},{},{}", b.k, z.re, z.im);
                }
            }
        }
    }
    if overlaps {
        let ids: Vec<_> = StabilizerStateId::all(d).collect();
        let labels: Vec<String> = ids.iter().map(|&i| state_label(i)).collect();
        let table: Vec<Vec<String>> = ids
            .iter()
            .map(|&a| ids.iter().map(|&b| fraction_string(&overlap(d, a, b))).collect())
            .collect();
        csv = format!("state,{}\n", labels.join(","));
        for (l, row) in labels.iter().zip(&table) {
            let _ = writeln!(csv, "{l},{}", row.join(","));
        }
        report["overlaps"] = json!({ "states": labels, "table": table });
    }
    Ok(Outcome::ok(Report::with_csv(report, csv)))
}

pub fn gk_verify(
    dim: u32,
    partitions: Option<&Path>,
    samples: Option<u64>,
    settings: &Settings,
) -> Result<Outcome, Failure> {
    let d = PrimeDim::new(dim)?;
    let parts = match partitions {
        Some(p) => Partitions::from_json(&read(p)?)?,
        None => Partitions::maximal(d),
    };
    if parts.dim() != d {
        return Err(Failure::invalid(format!(
            "partition file has dimension {}, --dim is {dim}",
            parts.dim().get()
        )));
    }
    let exact = verify_theorem1(&parts)?;
    let sampled = match samples {
        Some(0) => return Err(Failure::invalid("--samples must be positive")),
        Some(n) => Some(verify_theorem1_sampled(&parts, n, settings.seed)?),
        None => None,
    };
    let table = eval_quantum_exact(&build_stabilizer_strategy(&parts)?)?;
    let pass = exact.pass && sampled.as_ref().is_none_or(|s| s.pass);
    let report = json!({
        "dim": dim,
        "maximal": parts.is_maximal(),
        "pass": pass,
        "exact": to_value(&exact)?,
        "sampled": sampled.as_ref().map(to_value).transpose()?,
        "partitions": serde_json::from_str::<Value>(&parts.to_json()?).map_err(|e| Failure::invalid(e.to_string()))?,
        "correlation": table.to_json(),
    });
    Ok(Outcome {
        report: Report::with_csv(report, table.to_csv()),
        code: if pass { 0 } else { 1 },
    })
}

fn require_n(n: u32, want: u32, what: &str) -> Result<(), Failure> {
    if n != want {
        return Err(Failure::invalid(format!("{what} is defined for N={want}, got N={n}")));
    }
    Ok(())
}

pub fn rac_eval(n: u32, strategy: &str, epsilon: Option<f64>, settings: &Settings) -> Result<Outcome, Failure> {
    let task = RacTask::new(n)?;
    let report = match strategy {
        "meid" => to_value(&meid_report(&task)?)?,
        "onmq" => to_value(&stabilizer_report(&task, &onmq_strategy(&task)?, StrategyTag::Onmq)?)?,
        "enmq" => to_value(&stabilizer_report(&task, &enmq_strategy(&task)?, StrategyTag::Enmq)?)?,
        "case-i" | "case-ii" | "case-iii" => {
            require_n(n, 3, strategy)?;
            let case = match strategy {
                "case-i" => Rac3Case::I,
                "case-ii" => Rac3Case::II,
                _ => Rac3Case::III,
            };
            let enc = if case == Rac3Case::I {
                rac3_majority_x_encodings()
            } else {
                rac3_stabilizer_encodings(case)
            };
            to_value(&rac3_case_strategies(case, &enc)?)?
        }
        "rac2-magic" => {
            require_n(n, 2, strategy)?;
            to_value(&rac2_strategy(&rac2_single_magic_encodings())?)?
        }
        "rac2-epsilon" => {
            require_n(n, 2, strategy)?;
            let eps = epsilon.ok_or_else(|| Failure::invalid("rac2-epsilon needs --epsilon"))?;
            if !(0.0..=(2f64.sqrt() - 1.0)).contains(&eps) {
                return Err(Failure::invalid(format!("epsilon {eps} outside [0, sqrt(2) - 1]")));
            }
            to_value(&rac2_strategy(&rac2_epsilon_encodings(eps))?)?
        }
        path => {
            let q = QuantumStrategy::from_json(&read(Path::new(path))?, settings.tol)?;
            let corr = if q.is_stabilizer() {
                eval_quantum_exact(&q)?
            } else {
                eval_quantum(&q, q.spaces(), settings.tol)?
            };
            to_value(&rac_success(&corr, &task)?)?
        }
    };
    Ok(Outcome::ok(Report::json(report)))
}

fn parse_decoding(s: &str, n: u32) -> Result<Vec<u32>, Failure> {
    let m: Vec<u32> = s
        .chars()
        .map(|c| match c.to_ascii_lowercase() {
            'z' => Ok(MUB_Z),
            'x' => Ok(MUB_X),
            'y' => Ok(MUB_Y),
            _ => Err(Failure::invalid(format!("decoding letter {c:?} is not one of z, x, y"))),
        })
        .collect::<Result<_, _>>()?;
    if m.len() != n as usize {
        return Err(Failure::invalid(format!("decoding {s:?} has {} letters for N={n}", m.len())));
    }
    Ok(m)
}

fn default_decoding(n: u32) -> Result<Vec<u32>, Failure> {
    match n {
        2 => Ok(rac::RAC2_DECODING.to_vec()),
        3 => Ok(Rac3Case::II.decoding().to_vec()),
        _ => Err(Failure::invalid(format!("no default decoding for N={n}; pass --decoding"))),
    }
}

pub fn rac_optimize(
    n: u32,
    method: OptimizeMethod,
    decoding: Option<&str>,
    settings: &Settings,
) -> Result<Outcome, Failure> {
    let task = RacTask::new(n)?;
    let fixed = |d: Option<&str>| -> Result<Vec<u32>, Failure> {
        match d {
            Some(s) => parse_decoding(s, n),
            None => default_decoding(n),
        }
    };
    let report = match method {
        OptimizeMethod::Unrestricted => to_value(&optimize_unrestricted(&task, &fixed(decoding)?, DEFAULT_REFINE_TOL)?)?,
        OptimizeMethod::OneMagic => to_value(&optimize_one_magic(&task, &fixed(decoding)?, DEFAULT_REFINE_TOL)?)?,
        OptimizeMethod::Stabilizer => {
            let m = match decoding {
                None | Some("all") => None,
                Some(s) => Some(parse_decoding(s, n)?),
            };
            to_value(&stabilizer_vertex_optimum(&task, m.as_deref(), settings.budget)?)?
        }
        OptimizeMethod::Classical => {
            if decoding.is_some() {
                return Err(Failure::invalid("--decoding does not apply to the classical search"));
            }
            if n <= stabcomm::optimum::MEID_CHECK_MAX_N {
                to_value(&meid_is_optimal_check(n, settings.budget)?)?
            } else {
                to_value(&classical_optimum(&LinearTask::rac(&task), settings.budget)?)?
            }
        }
    };
    Ok(Outcome::ok(Report::json(report)))
}

pub fn rac_uplift(n: u32, k: u32, theta: Option<f64>) -> Result<Outcome, Failure> {
    let task = RacTask::new(n)?;
    let x = canonical_uplift_string(&task, k)?;
    let c = uplift_coefficient(n, k);
    let (theta_star, gain_star) = optimal_uplift(c);
    let theta = theta.unwrap_or(theta_star);
    if !theta.is_finite() {
        return Err(Failure::invalid("theta must be finite"));
    }
    let r = single_magic_uplift(UpliftBase::for_n(n), &task, x, uplift_bloch(&task, x, theta))?;
    let report = json!({
        "n": n,
        "k": k,
        "theta": theta,
        "coefficient": c,
        "predicted_gain": uplift_gain(c, theta),
        "optimal_theta": theta_star,
        "optimal_gain": gain_star,
        "uplift": to_value(&r)?,
    });
    Ok(Outcome::ok(Report::json(report)))
}

pub fn rac_region(task: RegionTaskArg, step: f64) -> Result<Outcome, Failure> {
    let t = match task {
        RegionTaskArg::Rac2 => RegionTask::Rac2,
        RegionTaskArg::Rac3 => RegionTask::Rac3,
    };
    let samples = advantage_region(t, step)?;
    Ok(Outcome::ok(Report::with_csv(to_value(&samples)?, region_csv(&samples))))
}

fn prime_of(op: &DenseOperator) -> Result<PrimeDim, Failure> {
    let n = u32::try_from(op.dim()).map_err(|_| Failure::invalid("matrix too large"))?;
    Ok(PrimeDim::new(n)?)
}

pub fn clifford_check(path: &Path, settings: &Settings) -> Result<Outcome, Failure> {
    let u: DenseOperator = serde_json::from_str(&read(path)?)
        .map_err(|e| Failure::invalid(format!("bad matrix {}: {e}", path.display())))?;
    let d = prime_of(&u)?;
    let verdict = is_clifford(d, &u, settings.tol)?;
    let code = match verdict {
        CliffordVerdict::Clifford { .. } => 0,
        CliffordVerdict::NotClifford { .. } => 1,
        CliffordVerdict::Indeterminate { .. } => 3,
    };
    let mut report = to_value(&verdict)?;
    report["dim"] = json!(d.get());
    report["tol"] = json!(settings.tol);
    Ok(Outcome {
        report: Report::json(report),
        code,
    })
}

#[derive(Deserialize)]
#[serde(untagged)]
enum StateDoc {
    Bloch {
        bloch: [f64; 3],
    },
    Matrix(DenseOperator),
}

pub fn magic(path: &Path, settings: &Settings) -> Result<Outcome, Failure> {
    let doc: StateDoc = serde_json::from_str(&read(path)?)
        .map_err(|e| Failure::invalid(format!("bad state {}: {e}", path.display())))?;
    let rho = match doc {
        StateDoc::Bloch { bloch } => bloch_state(bloch).map_err(|e| Failure::invalid(format!("invalid state: {e}")))?,
        StateDoc::Matrix(m) => m,
    };
    let d = prime_of(&rho)?;
    rho.validate_density(settings.tol)
        .map_err(|e| Failure::invalid(format!("invalid state: {e}")))?;
    let cert = polytope_membership(d, &rho, settings.tol)?;
    let m = magic_l1(d, &rho)?;
    let report = json!({
        "dim": d.get(),
        "inside": cert.inside,
        "certificate": to_value(&cert)?,
        "magic": to_value(&m)?,
    });
    Ok(Outcome::ok(Report::json(report)))
}
