//! Equivariant base estimators, the mixed (isotonic regression) family built on
//! them, and the named competitors for the normal, exponential and gamma models.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::models::{Family, FamilyKind, ModelSpec, Observation};

/// Loss weights `(p1, p2)`, both strictly positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightPair {
    p1: f64,
    p2: f64,
}

impl WeightPair {
    pub fn new(p1: f64, p2: f64) -> Result<Self> {
        if !(p1.is_finite() && p1 > 0.0 && p2.is_finite() && p2 > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "weights must be positive, got ({p1}, {p2})"
            )));
        }
        Ok(WeightPair { p1, p2 })
    }

    pub fn equal() -> Self {
        WeightPair { p1: 1.0, p2: 1.0 }
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }

    /// `p1 / (p1 + p2)`: the upper end of the admissible range of α.
    pub fn alpha0(&self) -> f64 {
        self.p1 / (self.p1 + self.p2)
    }

    /// `max(0, (p1 − p2)/p1)`: mixed estimators with α in `[edge, 1)` improve on the base pair.
    pub fn dominance_edge(&self) -> f64 {
        ((self.p1 - self.p2) / self.p1).max(0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub d1: f64,
    pub d2: f64,
}

impl Estimate {
    pub fn new(d1: f64, d2: f64) -> Self {
        Estimate { d1, d2 }
    }
}

/// Replaces a crossed pair `d1 > d2` by the α-combination that keeps
/// `p1 d1 + p2 d2` fixed. Ordered pairs (ties included) are returned unchanged.
pub fn mix_general(base: Estimate, weights: WeightPair, alpha: f64) -> Estimate {
    let Estimate { d1, d2 } = base;
    if d1 <= d2 {
        return base;
    }
    let r = weights.p1 / weights.p2;
    let b = r * (1.0 - alpha);
    Estimate {
        d1: alpha * d1 + (1.0 - alpha) * d2,
        d2: b * d1 + (1.0 - b) * d2,
    }
}

fn require_kind(model: &ModelSpec, kind: FamilyKind, what: &str) -> Result<()> {
    if model.kind() == kind {
        Ok(())
    } else {
        Err(Error::Unsupported(format!(
            "{what} is defined for {kind} families, not {}",
            model.name()
        )))
    }
}

fn require_positive(obs: &Observation) -> Result<()> {
    if obs.x1 > 0.0 && obs.x2 > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "scale observations must be positive, got ({}, {})",
            obs.x1, obs.x2
        )))
    }
}

/// Best location equivariant estimator `(x1 − c01, x2 − c02)`.
pub fn blee(model: &ModelSpec, obs: &Observation) -> Result<Estimate> {
    require_kind(model, FamilyKind::Location, "blee")?;
    let (c1, c2) = model.equivariant_constants();
    Ok(Estimate::new(obs.x1 - c1, obs.x2 - c2))
}

/// Best scale equivariant estimator `(c01 x1, c02 x2)`.
pub fn bsee(model: &ModelSpec, obs: &Observation) -> Result<Estimate> {
    require_kind(model, FamilyKind::Scale, "bsee")?;
    require_positive(obs)?;
    let (c1, c2) = model.equivariant_constants();
    Ok(Estimate::new(c1 * obs.x1, c2 * obs.x2))
}

pub fn mixed_location(
    model: &ModelSpec,
    weights: WeightPair,
    alpha: f64,
    obs: &Observation,
) -> Result<Estimate> {
    Ok(mix_general(blee(model, obs)?, weights, alpha))
}

/// Mixed scale estimator. Outputs are not clamped, so α outside `[0, 1]` may
/// produce nonpositive estimates.
pub fn mixed_scale(
    model: &ModelSpec,
    weights: WeightPair,
    alpha: f64,
    obs: &Observation,
) -> Result<Estimate> {
    Ok(mix_general(bsee(model, obs)?, weights, alpha))
}

/// Restricted maximum likelihood estimator under `θ1 ≤ θ2`.
pub fn restricted_mle(model: &ModelSpec, obs: &Observation) -> Result<Estimate> {
    let Observation { x1, x2 } = *obs;
    match model.family() {
        Family::BivariateNormal { .. } => {
            if x1 <= x2 {
                Ok(Estimate::new(x1, x2))
            } else {
                let a0 = model.normal_pooling_weight().unwrap();
                let m = a0 * x1 + (1.0 - a0) * x2;
                Ok(Estimate::new(m, m))
            }
        }
        Family::ExponentialLocation { .. } => Ok(Estimate::new(x1.min(x2), x2)),
        Family::GammaScale { a1, a2 } => {
            require_positive(obs)?;
            let pooled = (x1 + x2) / (a1 + a2);
            Ok(Estimate::new((x1 / a1).min(pooled), (x2 / a2).max(pooled)))
        }
        Family::PowerScale { .. } => Err(Error::Unsupported(
            "no restricted MLE is available for power_scale".into(),
        )),
    }
}

fn min_max_pool(x1: f64, x2: f64, a: f64) -> Estimate {
    let m = a * x1 + (1.0 - a) * x2;
    Estimate::new(x1.min(m), x1.max(m))
}

fn require_normal(model: &ModelSpec, what: &str) -> Result<f64> {
    model.normal_pooling_weight().ok_or_else(|| {
        Error::Unsupported(format!(
            "{what} is defined for the normal family, not {}",
            model.name()
        ))
    })
}

/// Hwang–Peddada estimator `(min{x1, m}, max{x1, m})` with `m = α0 x1 + (1 − α0) x2`
/// and `α0` the normal pooling weight.
pub fn hp_estimator(model: &ModelSpec, obs: &Observation) -> Result<Estimate> {
    let a0 = require_normal(model, "hp")?;
    Ok(min_max_pool(obs.x1, obs.x2, a0))
}

/// Tan–Peddada estimator: as [`hp_estimator`] with the pooling weight clamped at 0.
pub fn pdt_estimator(model: &ModelSpec, obs: &Observation) -> Result<Estimate> {
    let a0 = require_normal(model, "pdt")?;
    Ok(min_max_pool(obs.x1, obs.x2, a0.max(0.0)))
}

/// Estimator tag shared by the risk engine and the configuration files.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EstimatorSpec {
    Blee,
    Bsee,
    Mix(f64),
    Rmle,
    Hp,
    Pdt,
}

impl EstimatorSpec {
    /// Fails with the same error the estimator itself would raise on `model`.
    pub fn check_applicable(&self, model: &ModelSpec) -> Result<()> {
        match self {
            EstimatorSpec::Blee => require_kind(model, FamilyKind::Location, "blee"),
            EstimatorSpec::Bsee => require_kind(model, FamilyKind::Scale, "bsee"),
            EstimatorSpec::Mix(a) => {
                if a.is_finite() {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter(format!("mixing coefficient {a}")))
                }
            }
            EstimatorSpec::Rmle => match model.family() {
                Family::PowerScale { .. } => Err(Error::Unsupported(
                    "no restricted MLE is available for power_scale".into(),
                )),
                _ => Ok(()),
            },
            EstimatorSpec::Hp => require_normal(model, "hp").map(|_| ()),
            EstimatorSpec::Pdt => require_normal(model, "pdt").map(|_| ()),
        }
    }

    pub fn evaluate(
        &self,
        model: &ModelSpec,
        weights: WeightPair,
        obs: &Observation,
    ) -> Result<Estimate> {
        match *self {
            EstimatorSpec::Blee => blee(model, obs),
            EstimatorSpec::Bsee => bsee(model, obs),
            EstimatorSpec::Mix(a) => match model.kind() {
                FamilyKind::Location => mixed_location(model, weights, a, obs),
                FamilyKind::Scale => mixed_scale(model, weights, a, obs),
            },
            EstimatorSpec::Rmle => restricted_mle(model, obs),
            EstimatorSpec::Hp => hp_estimator(model, obs),
            EstimatorSpec::Pdt => pdt_estimator(model, obs),
        }
    }
}

impl fmt::Display for EstimatorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EstimatorSpec::Blee => f.write_str("blee"),
            EstimatorSpec::Bsee => f.write_str("bsee"),
            EstimatorSpec::Mix(a) => write!(f, "mix:{a}"),
            EstimatorSpec::Rmle => f.write_str("rmle"),
            EstimatorSpec::Hp => f.write_str("hp"),
            EstimatorSpec::Pdt => f.write_str("pdt"),
        }
    }
}

impl FromStr for EstimatorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let spec = match s {
            "blee" => EstimatorSpec::Blee,
            "bsee" => EstimatorSpec::Bsee,
            "rmle" => EstimatorSpec::Rmle,
            "hp" => EstimatorSpec::Hp,
            "pdt" => EstimatorSpec::Pdt,
            _ => {
                let a = s
                    .strip_prefix("mix:")
                    .and_then(|v| v.parse::<f64>().ok())
                    .filter(|a| a.is_finite())
                    .ok_or_else(|| {
                        Error::InvalidParameter(format!("unknown estimator token `{s}`"))
                    })?;
                EstimatorSpec::Mix(a)
            }
        };
        Ok(spec)
    }
}
