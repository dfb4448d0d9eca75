//! Flat `key = value` experiment files.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use ire_core::{EstimatorSpec, FamilyKind, FamilyName, ModelSpec, WeightPair};

use crate::error::CliError;

/// Which subcommand a configuration is validated for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    AlphaCurve,
    RiskSweep,
    AdmissibleInterval,
    Check,
}

impl Command {
    fn extra_keys(self) -> &'static [&'static str] {
        match self {
            Command::AlphaCurve => &["lambda_start", "lambda_stop", "lambda_step"],
            Command::RiskSweep => &["lambda_start", "lambda_stop", "lambda_step", "estimators", "n"],
            Command::AdmissibleInterval => &["schedule"],
            Command::Check => &["identity_alpha", "check_scale_ratio", "check_tuples"],
        }
    }
}

const COMMON_KEYS: &[&str] = &["family", "p1", "p2", "seed", "out", "name", "threads"];
const FAMILY_KEYS: &[&str] = &["sigma1", "sigma2", "rho", "a1", "a2"];

pub const DEFAULT_SEED: u64 = 20_240_601;

/// Raw key/value pairs with their line numbers.
#[derive(Debug, Clone, Default)]
pub struct RawConfig {
    entries: BTreeMap<String, (usize, String)>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(CliError::Config(format!("line {}: expected `key = value`", i + 1)));
            };
            let (k, v) = (k.trim(), v.trim());
            if k.is_empty() || v.is_empty() {
                return Err(CliError::Config(format!("line {}: empty key or value", i + 1)));
            }
            if entries.insert(k.to_string(), (i + 1, v.to_string())).is_some() {
                return Err(CliError::Config(format!("line {}: duplicate key `{k}`", i + 1)));
            }
        }
        Ok(RawConfig { entries })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(_, v)| v.as_str())
    }

    fn parse_value<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        match self.entries.get(key) {
            None => Ok(None),
            Some((line, v)) => v
                .parse()
                .map(Some)
                .map_err(|e| CliError::Config(format!("line {line}: bad value `{v}` for `{key}`: {e}"))),
        }
    }

    fn require<T: std::str::FromStr>(&self, key: &str, family: &str) -> Result<T, CliError>
    where
        T::Err: std::fmt::Display,
    {
        self.parse_value(key)?
            .ok_or_else(|| CliError::Config(format!("family `{family}` needs `{key}`")))
    }
}

/// Validated settings for one invocation.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub command: Command,
    /// `None` means every family (only allowed for `check`).
    pub model: Option<ModelSpec>,
    pub weights: WeightPair,
    pub estimators: Vec<EstimatorSpec>,
    pub lambdas: Vec<f64>,
    pub n: usize,
    pub seed: u64,
    pub out: PathBuf,
    pub name: String,
    pub threads: Option<usize>,
    pub schedule: Vec<f64>,
    pub identity_alpha: f64,
    pub check_scale_ratio: bool,
    pub check_tuples: u64,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub n: Option<usize>,
    pub threads: Option<usize>,
    /// Used for the default output name.
    pub config_stem: Option<String>,
}

fn family_keys(f: FamilyName) -> &'static [&'static str] {
    match f {
        FamilyName::Normal => &["sigma1", "sigma2", "rho"],
        FamilyName::ExpLoc => &["sigma1", "sigma2"],
        FamilyName::GammaScale | FamilyName::PowerScale => &["a1", "a2"],
    }
}

fn build_model(raw: &RawConfig, family: FamilyName) -> Result<ModelSpec, CliError> {
    let t = family.token();
    let m = match family {
        FamilyName::Normal => ModelSpec::normal(
            raw.require("sigma1", t)?,
            raw.require("sigma2", t)?,
            raw.parse_value("rho")?.unwrap_or(0.0),
        ),
        FamilyName::ExpLoc => ModelSpec::exponential_location(raw.require("sigma1", t)?, raw.require("sigma2", t)?),
        FamilyName::GammaScale => ModelSpec::gamma_scale(raw.require("a1", t)?, raw.require("a2", t)?),
        FamilyName::PowerScale => ModelSpec::power_scale(raw.require("a1", t)?, raw.require("a2", t)?),
    };
    m.map_err(|e| CliError::Config(e.to_string()))
}

fn parse_list(raw: &RawConfig, key: &str) -> Result<Option<Vec<f64>>, CliError> {
    let Some(v) = raw.get(key) else { return Ok(None) };
    v.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| CliError::Config(format!("bad number `{}` in `{key}`: {e}", s.trim())))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(Some)
}

/// `start, start + step, …` up to `stop` inclusive, built from integer multiples.
pub fn lambda_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>, CliError> {
    if !(step > 0.0) || !start.is_finite() || !stop.is_finite() || stop < start {
        return Err(CliError::Config(format!(
            "invalid λ grid: start {start}, stop {stop}, step {step}"
        )));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize;
    if count > 100_000 {
        return Err(CliError::Config(format!("λ grid has {count} points; at most 100000 allowed")));
    }
    Ok((0..=count).map(|i| start + step * i as f64).collect())
}

/// Resolves one estimator token; `mix:a0` stands for `mix:p1/(p1+p2)`.
fn parse_estimator(token: &str, weights: WeightPair) -> Result<EstimatorSpec, CliError> {
    if token == "mix:a0" {
        return Ok(EstimatorSpec::Mix(weights.alpha0()));
    }
    token
        .parse()
        .map_err(|e: ire_core::Error| CliError::Config(format!("estimator `{token}`: {e}")))
}

impl ExperimentConfig {
    pub fn from_raw(raw: &RawConfig, command: Command, ov: &Overrides) -> Result<Self, CliError> {
        let family = match raw.get("family") {
            None if command == Command::Check => None,
            Some("all") if command == Command::Check => None,
            None => return Err(CliError::Config("missing `family`".into())),
            Some(tok) => Some(
                tok.parse::<FamilyName>()
                    .map_err(|_| CliError::Config(format!("unknown family `{tok}`")))?,
            ),
        };

        let allowed_family: &[&str] = family.map_or(&[], family_keys);
        for (key, (line, _)) in &raw.entries {
            let k = key.as_str();
            let known = COMMON_KEYS.contains(&k) || FAMILY_KEYS.contains(&k) || command.extra_keys().contains(&k);
            let all_extras = [Command::AlphaCurve, Command::RiskSweep, Command::AdmissibleInterval, Command::Check]
                .iter()
                .any(|c| c.extra_keys().contains(&k));
            if !known && !all_extras {
                return Err(CliError::Config(format!("line {line}: unknown key `{k}`")));
            }
            if !known {
                return Err(CliError::Config(format!("line {line}: key `{k}` does not apply to this command")));
            }
            if FAMILY_KEYS.contains(&k) && !allowed_family.contains(&k) {
                let fam = family.map_or("all".to_string(), |f| f.token().to_string());
                return Err(CliError::Config(format!("line {line}: key `{k}` does not apply to family `{fam}`")));
            }
        }

        let model = family.map(|f| build_model(raw, f)).transpose()?;
        let weights = WeightPair::new(
            raw.parse_value("p1")?.unwrap_or(1.0),
            raw.parse_value("p2")?.unwrap_or(1.0),
        )
        .map_err(|e| CliError::Config(e.to_string()))?;

        let estimators = match raw.get("estimators") {
            None if command == Command::RiskSweep => return Err(CliError::Config("missing `estimators`".into())),
            None => Vec::new(),
            Some(list) => list
                .split(',')
                .map(|t| parse_estimator(t.trim(), weights))
                .collect::<Result<Vec<_>, _>>()?,
        };
        if let Some(m) = &model {
            for e in &estimators {
                e.check_applicable(m)
                    .map_err(|err| CliError::Config(format!("estimator `{e}` on {}: {err}", m.name())))?;
            }
        }

        let lambdas = match model.map(|m| m.kind()) {
            Some(kind) if matches!(command, Command::AlphaCurve | Command::RiskSweep) => {
                let (start, stop) = match kind {
                    FamilyKind::Location => (0.0, 5.0),
                    FamilyKind::Scale => (1.0, 6.0),
                };
                let g = lambda_grid(
                    raw.parse_value("lambda_start")?.unwrap_or(start),
                    raw.parse_value("lambda_stop")?.unwrap_or(stop),
                    raw.parse_value("lambda_step")?.unwrap_or(0.25),
                )?;
                if g[0] < start {
                    return Err(CliError::Config(format!(
                        "λ grid starts at {} but the {kind} model needs λ ≥ {start}",
                        g[0]
                    )));
                }
                g
            }
            _ => Vec::new(),
        };

        let n = ov
            .n
            .map(Ok)
            .unwrap_or_else(|| raw.parse_value("n").map(|v| v.unwrap_or(ire_core::risk::DEFAULT_REPLICATIONS)))?;
        if command == Command::RiskSweep && n < 2 {
            return Err(CliError::Config(format!("need n ≥ 2 replications, got {n}")));
        }
        let seed = match ov.seed {
            Some(s) => s,
            None => raw.parse_value("seed")?.unwrap_or(DEFAULT_SEED),
        };
        let out = ov
            .out
            .clone()
            .or_else(|| raw.get("out").map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("."));
        let name = raw
            .get("name")
            .map(str::to_string)
            .or_else(|| ov.config_stem.clone())
            .unwrap_or_else(|| family.map_or("all".to_string(), |f| f.token().to_string()));
        if name.contains(['/', '\\']) {
            return Err(CliError::Config(format!("`name` must not contain path separators: {name}")));
        }
        let threads = match ov.threads {
            Some(t) => Some(t),
            None => raw.parse_value("threads")?,
        };
        if threads == Some(0) {
            return Err(CliError::Config("`threads` must be at least 1".into()));
        }
        let schedule = parse_list(raw, "schedule")?
            .unwrap_or_else(|| ire_core::admissibility::DEFAULT_PROBE_SCHEDULE.to_vec());
        if schedule.is_empty() || !schedule.windows(2).all(|w| w[0] < w[1]) {
            return Err(CliError::Config("`schedule` must be strictly increasing".into()));
        }
        Ok(ExperimentConfig {
            command,
            model,
            weights,
            estimators,
            lambdas,
            n,
            seed,
            out,
            name,
            threads,
            schedule,
            identity_alpha: raw.parse_value("identity_alpha")?.unwrap_or(1.0),
            check_scale_ratio: raw.parse_value("check_scale_ratio")?.unwrap_or(false),
            check_tuples: raw.parse_value("check_tuples")?.unwrap_or(100_000),
        })
    }
}
