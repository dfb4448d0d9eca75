//! Weighted losses and the pointwise dominance check for mixed estimators.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::estimators::{mix_general, Estimate, WeightPair};
use crate::models::{FamilyKind, ParamPoint};

const FALSIFIER_POINTS: usize = 1001;

type LossFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Penalty {
    /// `p (d − θ)²` for both kinds.
    Squared,
    /// Location: `W(d − θ)`; scale: `W(d / θ)` with `W(1) = 0`.
    Custom(LossFn),
}

/// A weighted loss `p1 W(·) + p2 W(·)` over the two coordinates.
#[derive(Clone)]
pub struct LossSpec {
    kind: FamilyKind,
    weights: WeightPair,
    penalty: Penalty,
}

impl fmt::Debug for LossSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let penalty = match self.penalty {
            Penalty::Squared => "squared",
            Penalty::Custom(_) => "custom",
        };
        f.debug_struct("LossSpec")
            .field("kind", &self.kind)
            .field("weights", &self.weights)
            .field("penalty", &penalty)
            .finish()
    }
}

impl LossSpec {
    /// Weighted squared error `p1 (d1 − θ1)² + p2 (d2 − θ2)²`, for either kind.
    pub fn squared(kind: FamilyKind, weights: WeightPair) -> Self {
        LossSpec {
            kind,
            weights,
            penalty: Penalty::Squared,
        }
    }

    /// Scale loss `p1 (d1/θ1 − 1)² + p2 (d2/θ2 − 1)²`.
    pub fn scale_relative_squared(weights: WeightPair) -> Self {
        LossSpec {
            kind: FamilyKind::Scale,
            weights,
            penalty: Penalty::Custom(Arc::new(|r: f64| (r - 1.0) * (r - 1.0))),
        }
    }

    /// Loss built on a user penalty `w`. For location losses `w` acts on `d − θ`
    /// and must vanish at 0; for scale losses it acts on `d / θ` and must vanish at 1.
    ///
    /// `w` is screened on a 1001-point grid over `[-10, 10]` (location) or
    /// `[1e-3, 10]` (scale): it must be zero at the minimizer, strictly monotone
    /// on either side and convex. Passing the screen is not a proof.
    pub fn with_penalty<F>(kind: FamilyKind, weights: WeightPair, w: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        check_penalty(kind, &w)?;
        Ok(LossSpec {
            kind,
            weights,
            penalty: Penalty::Custom(Arc::new(w)),
        })
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn weights(&self) -> WeightPair {
        self.weights
    }

    pub fn loss(&self, params: &ParamPoint, est: &Estimate) -> Result<f64> {
        if params.kind() != self.kind {
            return Err(Error::Precondition(format!(
                "{} loss evaluated at {} parameters",
                self.kind,
                params.kind()
            )));
        }
        let (t1, t2) = (params.theta1(), params.theta2());
        if self.kind == FamilyKind::Scale && !(t1 > 0.0 && t2 > 0.0) {
            return Err(Error::Domain(format!(
                "scale loss needs positive parameters, got ({t1}, {t2})"
            )));
        }
        Ok(self.loss_unchecked(t1, t2, est))
    }

    /// Loss at raw parameters, skipping validation. Used in hot loops.
    pub(crate) fn loss_unchecked(&self, t1: f64, t2: f64, est: &Estimate) -> f64 {
        let (p1, p2) = (self.weights.p1(), self.weights.p2());
        match (&self.penalty, self.kind) {
            (Penalty::Squared, _) => {
                let (e1, e2) = (est.d1 - t1, est.d2 - t2);
                p1 * e1 * e1 + p2 * e2 * e2
            }
            (Penalty::Custom(w), FamilyKind::Location) => p1 * w(est.d1 - t1) + p2 * w(est.d2 - t2),
            (Penalty::Custom(w), FamilyKind::Scale) => p1 * w(est.d1 / t1) + p2 * w(est.d2 / t2),
        }
    }
}

fn check_penalty<F: Fn(f64) -> f64>(kind: FamilyKind, w: &F) -> Result<()> {
    let (lo, hi, min_at) = match kind {
        FamilyKind::Location => (-10.0, 10.0, 0.0),
        FamilyKind::Scale => (1e-3, 10.0, 1.0),
    };
    let step = (hi - lo) / (FALSIFIER_POINTS - 1) as f64;
    let mut xs: Vec<f64> = (0..FALSIFIER_POINTS).map(|i| lo + i as f64 * step).collect();
    xs.push(min_at);
    xs.sort_by(f64::total_cmp);
    xs.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let ys: Vec<f64> = xs.iter().map(|&x| w(x)).collect();

    let reject = |msg: String| Err(Error::InvalidLoss(msg));
    if let Some(i) = ys.iter().position(|y| !y.is_finite() || *y < 0.0) {
        return reject(format!("W({}) = {} is not a finite nonnegative value", xs[i], ys[i]));
    }
    let w_min = w(min_at);
    if w_min.abs() > 1e-12 {
        return reject(format!("W must vanish at {min_at}, got {w_min}"));
    }
    for i in 1..xs.len() {
        let (x0, x1) = (xs[i - 1], xs[i]);
        let ok = if x1 <= min_at {
            ys[i] < ys[i - 1]
        } else if x0 >= min_at {
            ys[i] > ys[i - 1]
        } else {
            true
        };
        if !ok {
            return reject(format!("W is not strictly monotone between {x0} and {x1}"));
        }
    }
    for i in 1..xs.len() - 1 {
        let s0 = (ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]);
        let s1 = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
        if s1 < s0 - 1e-9 * s0.abs().max(s1.abs()).max(1.0) {
            return reject(format!("W is not convex near {}", xs[i]));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DominanceOutcome {
    pub loss_base: f64,
    pub loss_mixed: f64,
    /// `loss_mixed < loss_base`.
    pub dominated: bool,
}

/// Compares the loss of a crossed base pair `d1 > d2` with that of its α-mix.
pub fn dominance_pointwise(
    spec: &LossSpec,
    params: &ParamPoint,
    base: Estimate,
    alpha: f64,
) -> Result<DominanceOutcome> {
    if !(base.d1 > base.d2) {
        return Err(Error::Precondition(format!(
            "base estimate must be crossed (d1 > d2), got ({}, {})",
            base.d1, base.d2
        )));
    }
    if spec.kind() == FamilyKind::Scale && !(base.d2 > 0.0) {
        return Err(Error::Precondition(format!(
            "scale base estimate must satisfy d1 > d2 > 0, got ({}, {})",
            base.d1, base.d2
        )));
    }
    let mixed = mix_general(base, spec.weights(), alpha);
    let loss_base = spec.loss(params, &base)?;
    let loss_mixed = spec.loss(params, &mixed)?;
    Ok(DominanceOutcome {
        loss_base,
        loss_mixed,
        dominated: loss_mixed < loss_base,
    })
}
