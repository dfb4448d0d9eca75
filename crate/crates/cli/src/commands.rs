use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use ire_core::admissibility::{alpha_curve, alpha_infinity_probe, write_alpha_csv};
use ire_core::risk::{risk_sweep, write_risk_csv};
use ire_core::suites::{algebraic_suites, model_suites, SuiteOptions};
use ire_core::{FamilyKind, LossSpec, ModelSpec, WeightPair};

use crate::config::{Command, ExperimentConfig};
use crate::error::CliError;
use crate::svg::{line_chart, Series};

/// Models used by `check` when no family is configured.
pub fn default_check_models() -> Vec<ModelSpec> {
    vec![
        ModelSpec::normal(1.0, 1.0, 0.0).expect("valid"),
        ModelSpec::exponential_location(1.0, 2.0).expect("valid"),
        ModelSpec::gamma_scale(2.0, 3.0).expect("valid"),
        ModelSpec::power_scale(1.0, 2.0).expect("valid"),
    ]
}

fn model(cfg: &ExperimentConfig) -> Result<ModelSpec, CliError> {
    cfg.model.ok_or_else(|| CliError::Config("missing `family`".into()))
}

fn output_path(cfg: &ExperimentConfig, suffix: &str) -> Result<PathBuf, CliError> {
    fs::create_dir_all(&cfg.out)?;
    Ok(cfg.out.join(format!("{}_{suffix}", cfg.name)))
}

/// What a command produced.
#[derive(Debug, Default)]
pub struct Execution {
    pub files: Vec<PathBuf>,
    /// Human-readable summary, also written to the report file when there is one.
    pub report: String,
    pub failed_suites: usize,
}

impl Execution {
    /// Turns failed property suites into an error.
    pub fn into_result(self) -> Result<Self, CliError> {
        if self.failed_suites > 0 {
            Err(CliError::SuiteFailure(self.failed_suites))
        } else {
            Ok(self)
        }
    }
}

/// Runs the configured command. Failed suites are reported in the result, not as an error.
pub fn run(cfg: &ExperimentConfig) -> Result<Execution, CliError> {
    let go = || match cfg.command {
        Command::AlphaCurve => alpha_curve_cmd(cfg),
        Command::RiskSweep => risk_sweep_cmd(cfg),
        Command::AdmissibleInterval => interval_cmd(cfg),
        Command::Check => check_cmd(cfg),
    };
    match cfg.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?
            .install(go),
        None => go(),
    }
}

fn alpha_curve_cmd(cfg: &ExperimentConfig) -> Result<Execution, CliError> {
    let m = model(cfg)?;
    let pts = alpha_curve(&m, cfg.weights, &cfg.lambdas)?;
    let path = output_path(cfg, "alpha.csv")?;
    write_alpha_csv(fs::File::create(&path)?, &m, &pts)?;
    Ok(Execution {
        files: vec![path],
        ..Default::default()
    })
}

fn risk_sweep_cmd(cfg: &ExperimentConfig) -> Result<Execution, CliError> {
    let m = model(cfg)?;
    let loss = LossSpec::squared(m.kind(), cfg.weights);
    let rows = risk_sweep(&m, &loss, &cfg.estimators, &cfg.lambdas, cfg.n, cfg.seed)?;
    let csv_path = output_path(cfg, "risk.csv")?;
    write_risk_csv(fs::File::create(&csv_path)?, &m, &rows)?;

    let series: Vec<Series> = cfg
        .estimators
        .iter()
        .map(|e| Series {
            label: e.to_string(),
            points: rows.iter().filter(|r| r.estimator == *e).map(|r| (r.lambda, r.mean)).collect(),
        })
        .collect();
    let x_label = match m.kind() {
        FamilyKind::Location => "λ = θ2 − θ1",
        FamilyKind::Scale => "λ = θ2 / θ1",
    };
    let title = format!("Simulated risk, {m}, n = {}", cfg.n);
    let svg_path = output_path(cfg, "risk.svg")?;
    fs::write(&svg_path, line_chart(&title, x_label, "risk", &series))?;
    Ok(Execution {
        files: vec![csv_path, svg_path],
        ..Default::default()
    })
}

fn interval_cmd(cfg: &ExperimentConfig) -> Result<Execution, CliError> {
    let m = model(cfg)?;
    let i = alpha_infinity_probe(&m, cfg.weights, &cfg.schedule)?;
    let mut s = String::new();
    let _ = writeln!(s, "model: {m}");
    let _ = writeln!(s, "weights: p1 = {}, p2 = {}", cfg.weights.p1(), cfg.weights.p2());
    let _ = writeln!(s, "interval: {i}");
    let _ = writeln!(s, "status: {:?}", i.status);
    let _ = writeln!(s, "diverges: {}", i.diverges);
    for p in &i.probes {
        let _ = writeln!(s, "probe: lambda = {}, alpha = {}, quad_error = {:e}", p.lambda, p.alpha, p.quad_error);
    }
    if let Some(w) = &i.warning {
        let _ = writeln!(s, "warning: {w}");
    }
    let _ = writeln!(s, "note: divergence is inferred from a finite probe schedule, not proven");
    let path = output_path(cfg, "interval.txt")?;
    fs::write(&path, &s)?;
    Ok(Execution {
        files: vec![path],
        report: s,
        failed_suites: 0,
    })
}

fn check_cmd(cfg: &ExperimentConfig) -> Result<Execution, CliError> {
    let opts = SuiteOptions {
        tuples: cfg.check_tuples,
        seed: cfg.seed,
        identity_alpha: cfg.identity_alpha,
        scale_relative: cfg.check_scale_ratio,
    };
    let mut outcomes = algebraic_suites(&opts)?;
    let (models, weights): (Vec<ModelSpec>, WeightPair) = match cfg.model {
        Some(m) => (vec![m], cfg.weights),
        None => (default_check_models(), cfg.weights),
    };
    for m in &models {
        outcomes.extend(model_suites(m, weights)?);
    }
    let failed = outcomes.iter().filter(|o| !o.passed()).count();
    let mut s = String::new();
    for o in &outcomes {
        let _ = writeln!(s, "{o}");
    }
    let _ = writeln!(s, "{} suites, {failed} failed", outcomes.len());
    let path = output_path(cfg, "check.txt")?;
    fs::write(&path, &s)?;
    Ok(Execution {
        files: vec![path],
        report: s,
        failed_suites: failed,
    })
}
