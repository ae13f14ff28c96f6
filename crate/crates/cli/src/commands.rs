use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use qhedge::analysis::{
    build_dephased_hedging_test, build_hedging_test, classical_threshold_bound, fidelity_bound_chain, hedging_strategy,
    quantum_threshold_bound, verify_hedging, ThresholdQuery,
};
use qhedge::channel::choi_identity;
use qhedge::interactive::{outcome_distribution, product_compose, InteractiveMeasurement};
use qhedge::io::{load_channel, load_measurement, ChannelFile, TestFile};
use qhedge::sdp::{certify, random_strategy_bound, solve, PartialTraceSdp, Sense};
use qhedge::{ComplexMatrix64, Error};
use serde::Serialize;
use serde_json::{json, Value};

use crate::report::InputDigest;

/// Largest `dim_y · dim_x` a composed test may have.
pub const DIMENSION_CAP: usize = 64;

/// Samples drawn for the random-strategy sanity bound reported by `solve`.
const CROSS_CHECK_SAMPLES: usize = 200;

pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 2;
    pub const INVALID: i32 = 3;
    pub const NOT_CONVERGED: i32 = 4;
    pub const CAP: i32 = 5;
    pub const DEMO: i32 = 6;
}

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
    /// Partial result to report alongside the error.
    pub result: Value,
}

impl Failure {
    pub fn new(code: i32, kind: &'static str, message: impl Into<String>) -> Self {
        Self {
            code,
            kind,
            message: message.into(),
            result: Value::Null,
        }
    }

    fn with_result(mut self, result: Value) -> Self {
        self.result = result;
        self
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::Parse(_) => (exit::USAGE, "parse"),
            Error::InvalidQuery(_) => (exit::USAGE, "invalid_query"),
            Error::InvalidTolerance(_) => (exit::USAGE, "invalid_tolerance"),
            Error::UnknownOutcome(_) => (exit::INVALID, "unknown_outcome"),
            Error::NotConverged(_) => (exit::NOT_CONVERGED, "not_converged"),
            Error::CheckFailed(_) => (exit::NOT_CONVERGED, "check_failed"),
            Error::EnumerationCap { .. } => (exit::CAP, "cap"),
            Error::DimensionMismatch(_) => (exit::INVALID, "dimension_mismatch"),
            _ => (exit::INVALID, "validation"),
        };
        Failure::new(code, kind, e.to_string())
    }
}

pub type Outcome = Result<Value, Failure>;

/// Shared solver settings from the global flags.
#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

pub struct Input {
    pub text: String,
    pub digest: InputDigest,
}

pub fn read_input(path: &Path) -> Result<Input, Failure> {
    let bytes = fs::read(path).map_err(|e| Failure::new(exit::USAGE, "io", format!("{}: {e}", path.display())))?;
    let digest = InputDigest::new(path, &bytes);
    let text = String::from_utf8(bytes)
        .map_err(|e| Failure::new(exit::USAGE, "parse", format!("{}: not UTF-8: {e}", path.display())))?;
    Ok(Input { text, digest })
}

fn load(input: &Input, path: &Path) -> Result<InteractiveMeasurement<f64>, Failure> {
    load_measurement(&input.text).map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })
}

pub fn solve_cmd(s: Settings, input: &Input, path: &Path, outcome: &str, sense: Sense) -> Outcome {
    let im = load(input, path)?;
    let p = PartialTraceSdp::for_outcome(&im, outcome, sense)?;
    let sol = solve(&p, s.tol, s.max_iter)?;
    let cert = certify(&p, &sol);
    let sampled = random_strategy_bound(&p, CROSS_CHECK_SAMPLES, s.seed)?;
    let sampled_consistent = match sense {
        Sense::Max => sampled <= sol.value() + s.tol,
        Sense::Min => sampled >= sol.value() - s.tol,
    };
    let result = json!({
        "outcome": outcome,
        "sense": sense,
        "value": sol.value(),
        "primal_value": sol.primal_value,
        "dual_value": sol.dual_value,
        "dual_value_raw": sol.dual_value_raw,
        "gap": sol.gap,
        "gap_raw": sol.gap_raw,
        "dual_shift": sol.dual_shift,
        "primal_residual": sol.primal_residual,
        "dual_residual": sol.dual_residual,
        "dual_residual_raw": sol.dual_residual_raw,
        "iterations": sol.iterations,
        "converged": sol.converged,
        "certificate": cert,
        "random_strategy_bound": {
            "samples": CROSS_CHECK_SAMPLES,
            "seed": s.seed,
            "value": sampled,
            "consistent": sampled_consistent,
        },
    });
    if !sol.converged {
        return Err(Failure::new(
            exit::NOT_CONVERGED,
            "not_converged",
            format!("no convergence within {} iterations", s.max_iter),
        )
        .with_result(result));
    }
    if !cert.passed {
        return Err(Failure::new(exit::NOT_CONVERGED, "certification", "certificate check failed").with_result(result));
    }
    Ok(result)
}

pub fn product_cmd(inputs: [(&Input, &Path); 2], out: &Path) -> Outcome {
    let im1 = load(inputs[0].0, inputs[0].1)?;
    let im2 = load(inputs[1].0, inputs[1].1)?;
    let choi_dim = im1.choi_dim() * im2.choi_dim();
    if choi_dim > DIMENSION_CAP {
        return Err(Failure::new(
            exit::CAP,
            "cap",
            format!("composite dim_y * dim_x = {choi_dim} exceeds {DIMENSION_CAP}"),
        ));
    }
    let im = product_compose(&im1, &im2);
    write_file(out, &TestFile::from_measurement(&im).to_json())?;
    Ok(json!({
        "out": out.display().to_string(),
        "dim_x": im.dim_x(),
        "dim_y": im.dim_y(),
        "dim_z": im.dim_z(),
        "choi_dim": choi_dim,
        "outcomes": im.labels().collect::<Vec<_>>(),
    }))
}

#[derive(Serialize)]
struct EvalRow {
    probability: f64,
    via_choi: f64,
    discrepancy: f64,
}

pub fn eval_cmd(test: (&Input, &Path), channel: (&Input, &Path), outcome: &str) -> Outcome {
    let im = load(test.0, test.1)?;
    let j = load_channel::<f64>(&channel.0.text).map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", channel.1.display(), f.message);
        f
    })?;
    if outcome != "all" {
        im.measurement(outcome)?;
    }
    let dist = outcome_distribution(&im, &j)?;
    let total: f64 = dist.values().map(|e| e.direct).sum();
    let rows: BTreeMap<&str, EvalRow> = dist
        .iter()
        .filter(|(label, _)| outcome == "all" || label.as_str() == outcome)
        .map(|(label, e)| {
            (
                label.as_str(),
                EvalRow {
                    probability: e.direct,
                    via_choi: e.via_choi,
                    discrepancy: e.discrepancy,
                },
            )
        })
        .collect();
    Ok(json!({ "outcomes": rows, "total": total }))
}

pub fn demo_hedging_cmd(s: Settings) -> Outcome {
    let report = verify_hedging(s.tol)?;
    let chain = fidelity_bound_chain()?;
    let checks = BTreeMap::from([
        ("joint_fail_min_vanishes", report.joint_fail_min <= 1e-6),
        ("strategy_never_fails_both", report.strategy_joint_fail.abs() <= 1e-12),
        ("classical_bound_violated", report.classical_bound_violated),
        ("all_solves_certified", report.certified == report.solves),
        (
            "fidelity_bound_matches_sdp",
            (chain.bound - report.single_max).abs() <= 1e-6,
        ),
        (
            "complementary_single_values",
            (report.single_min_fail - (1.0 - report.single_max)).abs() <= 1e-6,
        ),
    ]);
    let passed = checks.values().all(|&ok| ok);
    let result = json!({ "hedging": report, "fidelity_chain": chain, "checks": checks, "passed": passed });
    if passed {
        Ok(result)
    } else {
        let failed: Vec<_> = checks.iter().filter(|(_, ok)| !**ok).map(|(k, _)| *k).collect();
        Err(Failure::new(exit::DEMO, "assertion", format!("failed checks: {}", failed.join(", "))).with_result(result))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Classical,
    Quantum,
}

pub fn bound_cmd(k: u32, t: u32, p: f64, model: Model) -> Outcome {
    let q = ThresholdQuery::new(k, t, p)?;
    let value = match model {
        Model::Classical => classical_threshold_bound(&q),
        Model::Quantum => quantum_threshold_bound(&q),
    };
    Ok(json!({ "k": k, "t": t, "p": p, "model": model, "value": value }))
}

/// The bundled example files, by file name.
pub fn fixtures() -> Vec<(&'static str, String)> {
    let echo = {
        let rho = ComplexMatrix64::from_real_diag(&[0.5, 0.0, 0.0, 0.5]);
        let same = ComplexMatrix64::from_real_diag(&[1.0, 0.0, 0.0, 1.0]);
        let differ = ComplexMatrix64::from_real_diag(&[0.0, 1.0, 1.0, 0.0]);
        InteractiveMeasurement::new(2, 2, 2, rho, BTreeMap::from([("0".into(), differ), ("1".into(), same)]))
            .expect("echo test shapes")
    };
    vec![
        (
            "hedging.test",
            TestFile::from_measurement(&build_hedging_test()).to_json(),
        ),
        (
            "dephased-hedging.test",
            TestFile::from_measurement(&build_dephased_hedging_test()).to_json(),
        ),
        ("echo.test", TestFile::from_measurement(&echo).to_json()),
        (
            "identity-2.channel",
            ChannelFile::from_choi(&choi_identity::<f64>(2)).to_json(),
        ),
        (
            "phaseflip-4.channel",
            ChannelFile::from_choi(&hedging_strategy()).to_json(),
        ),
    ]
}

pub fn fixtures_cmd(dir: &Path) -> Outcome {
    fs::create_dir_all(dir).map_err(|e| Failure::new(exit::USAGE, "io", format!("{}: {e}", dir.display())))?;
    let mut written = Vec::new();
    for (name, text) in fixtures() {
        let path: PathBuf = dir.join(name);
        write_file(&path, &text)?;
        written.push(path.display().to_string());
    }
    Ok(json!({ "written": written }))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::new(exit::USAGE, "io", format!("{}: {e}", path.display())))
}
