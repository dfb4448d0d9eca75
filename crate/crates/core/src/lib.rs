//! Mixed (isotonic regression) estimators of two ordered location or scale
//! parameters: families, estimators, losses, Monte Carlo risk, and the
//! risk-minimizing mixing coefficient curves.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod admissibility;
pub mod error;
pub mod estimators;
pub mod loss;
pub mod models;
pub mod quadrature;
pub mod risk;
pub mod rng;
pub mod stats;
pub mod suites;

pub use admissibility::{
    alpha_curve, alpha_infinity_probe, alpha_location, alpha_point, alpha_scale,
    alpha_star_location, lemma51_condition_check, s_lambda_density, AdmissibleInterval,
    AlphaCurvePoint, LimitStatus, SLambdaDensity,
};
pub use error::{Error, Result};
pub use estimators::{
    blee, bsee, hp_estimator, mix_general, mixed_location, mixed_scale, pdt_estimator,
    restricted_mle, Estimate, EstimatorSpec, WeightPair,
};
pub use loss::{dominance_pointwise, DominanceOutcome, LossSpec};
pub use models::{
    log_concavity_check, Family, FamilyKind, FamilyName, ModelSpec, Observation, ParamPoint,
};
pub use risk::{monte_carlo_risk, monte_carlo_risks, risk_sweep, RiskEstimate};
pub use rng::RandomStream;
