//! Monte Carlo risk engine with common random numbers.
//!
//! Replication `i` always draws its observation from substream `i` of the seed,
//! and every estimator in a call is evaluated on that same observation. Losses
//! are reduced in replication order, so results do not depend on the thread pool.

use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::estimators::EstimatorSpec;
use crate::loss::LossSpec;
use crate::models::{FamilyKind, ModelSpec, ParamPoint};
use crate::rng::RandomStream;
use crate::stats::mean_and_std_error;

/// Default number of replications per risk estimate.
pub const DEFAULT_REPLICATIONS: usize = 50_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiskEstimate {
    pub mean: f64,
    /// Sample standard deviation over `sqrt(replications)`.
    pub std_error: f64,
    pub replications: usize,
    pub seed: u64,
    pub estimator: EstimatorSpec,
    pub lambda: f64,
}

fn validate(
    model: &ModelSpec,
    params: &ParamPoint,
    estimators: &[EstimatorSpec],
    loss: &LossSpec,
    n: usize,
) -> Result<()> {
    if n < 2 {
        return Err(Error::Precondition(format!(
            "need at least 2 replications, got {n}"
        )));
    }
    if params.kind() != model.kind() || loss.kind() != model.kind() {
        return Err(Error::Precondition(format!(
            "{} family with {} parameters and a {} loss",
            model.name(),
            params.kind(),
            loss.kind()
        )));
    }
    for e in estimators {
        e.check_applicable(model)?;
    }
    Ok(())
}

/// Per-replication losses, row-major: `out[i * k + j]` is the loss of
/// estimator `j` on replication `i`.
fn loss_matrix(
    model: &ModelSpec,
    params: &ParamPoint,
    estimators: &[EstimatorSpec],
    loss: &LossSpec,
    n: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    let k = estimators.len();
    let root = RandomStream::new(seed);
    let weights = loss.weights();
    let (t1, t2) = (params.theta1(), params.theta2());
    let mut out = vec![0.0; n * k];
    out.par_chunks_mut(k)
        .enumerate()
        .try_for_each(|(i, row)| -> Result<()> {
            let mut stream = root.substream(i as u64);
            let obs = model.sample(params, &mut stream)?;
            for (slot, e) in row.iter_mut().zip(estimators) {
                let est = e.evaluate(model, weights, &obs)?;
                *slot = loss.loss_unchecked(t1, t2, &est);
            }
            Ok(())
        })?;
    Ok(out)
}

/// Risks of several estimators evaluated on one shared sequence of observations.
pub fn monte_carlo_risks(
    model: &ModelSpec,
    params: &ParamPoint,
    estimators: &[EstimatorSpec],
    loss: &LossSpec,
    n: usize,
    seed: u64,
) -> Result<Vec<RiskEstimate>> {
    validate(model, params, estimators, loss, n)?;
    if estimators.is_empty() {
        return Ok(Vec::new());
    }
    let k = estimators.len();
    let matrix = loss_matrix(model, params, estimators, loss, n, seed)?;
    let mut column = vec![0.0; n];
    Ok(estimators
        .iter()
        .enumerate()
        .map(|(j, &estimator)| {
            for (i, c) in column.iter_mut().enumerate() {
                *c = matrix[i * k + j];
            }
            let (mean, std_error) = mean_and_std_error(&column);
            RiskEstimate {
                mean,
                std_error,
                replications: n,
                seed,
                estimator,
                lambda: params.lambda(),
            }
        })
        .collect())
}

/// Simulated risk `E_θ[L(θ, δ(X))]` from `n` replications.
pub fn monte_carlo_risk(
    model: &ModelSpec,
    params: &ParamPoint,
    estimator: EstimatorSpec,
    loss: &LossSpec,
    n: usize,
    seed: u64,
) -> Result<RiskEstimate> {
    Ok(monte_carlo_risks(model, params, &[estimator], loss, n, seed)?[0])
}

/// Risks on a grid of `λ`, at `θ = (0, λ)` (location) or `(1, λ)` (scale).
/// Every grid point reuses the same seed. Rows are ordered by `λ`, then by estimator.
pub fn risk_sweep(
    model: &ModelSpec,
    loss: &LossSpec,
    estimators: &[EstimatorSpec],
    lambdas: &[f64],
    n: usize,
    seed: u64,
) -> Result<Vec<RiskEstimate>> {
    let min_lambda = match model.kind() {
        FamilyKind::Location => 0.0,
        FamilyKind::Scale => 1.0,
    };
    if let Some(bad) = lambdas.iter().find(|l| !(**l >= min_lambda) || !l.is_finite()) {
        return Err(Error::Precondition(format!(
            "λ = {bad} outside [{min_lambda}, ∞) for the {} family",
            model.name()
        )));
    }
    let mut rows = Vec::with_capacity(lambdas.len() * estimators.len());
    for &lambda in lambdas {
        let params = ParamPoint::at_lambda(model.kind(), lambda)?;
        rows.extend(monte_carlo_risks(model, &params, estimators, loss, n, seed)?);
    }
    Ok(rows)
}

pub const RISK_CSV_HEADER: [&str; 7] = ["family", "lambda", "estimator", "risk", "std_error", "n", "seed"];

/// Writes a risk table as CSV with a fixed header.
pub fn write_risk_csv<W: Write>(out: W, model: &ModelSpec, rows: &[RiskEstimate]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RISK_CSV_HEADER)?;
    for r in rows {
        w.write_record([
            model.name().token().to_string(),
            r.lambda.to_string(),
            r.estimator.to_string(),
            r.mean.to_string(),
            r.std_error.to_string(),
            r.replications.to_string(),
            r.seed.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
