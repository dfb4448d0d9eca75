//! The four concrete bivariate families, their samplers, the densities of the
//! reduced statistic `Z`, and the equivariant-estimator constants.
//!
//! For location families `Z = Z2 - Z1` with `Zi = Xi - θi`; for scale families
//! `Z = Z2 / Z1` with `Zi = Xi / θi`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma, StandardNormal};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::quadrature::{self, Integral, QuadratureOptions};
use crate::rng::RandomStream;

/// Whether a family is indexed by location or by scale parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    Location,
    Scale,
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyKind::Location => f.write_str("location"),
            FamilyKind::Scale => f.write_str("scale"),
        }
    }
}

/// Family names as they appear in configuration files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyName {
    Normal,
    ExpLoc,
    GammaScale,
    PowerScale,
}

impl FamilyName {
    pub const ALL: [FamilyName; 4] = [
        FamilyName::Normal,
        FamilyName::ExpLoc,
        FamilyName::GammaScale,
        FamilyName::PowerScale,
    ];

    pub fn token(self) -> &'static str {
        match self {
            FamilyName::Normal => "normal",
            FamilyName::ExpLoc => "exp_loc",
            FamilyName::GammaScale => "gamma_scale",
            FamilyName::PowerScale => "power_scale",
        }
    }

    pub fn kind(self) -> FamilyKind {
        match self {
            FamilyName::Normal | FamilyName::ExpLoc => FamilyKind::Location,
            FamilyName::GammaScale | FamilyName::PowerScale => FamilyKind::Scale,
        }
    }
}

impl fmt::Display for FamilyName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for FamilyName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyName::ALL
            .into_iter()
            .find(|n| n.token() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown family token `{s}`")))
    }
}

/// A family together with its known hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    /// `σ1, σ2 > 0` standard deviations, `ρ ∈ (-1, 1)`.
    BivariateNormal { sigma1: f64, sigma2: f64, rho: f64 },
    /// Independent exponentials with known scales `σ1, σ2 > 0`.
    ExponentialLocation { sigma1: f64, sigma2: f64 },
    /// Independent gammas with known shapes `a1, a2 > 0`.
    GammaScale { a1: f64, a2: f64 },
    /// Independent power-function laws `a z^(a-1)` on `(0, 1)`.
    PowerScale { a1: f64, a2: f64 },
}

/// Validated model. Immutable and freely shareable across threads.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelSpec {
    family: Family,
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::InvalidParameter(format!("{name} must be > 0, got {v}")))
    }
}

impl ModelSpec {
    pub fn normal(sigma1: f64, sigma2: f64, rho: f64) -> Result<Self> {
        positive("sigma1", sigma1)?;
        positive("sigma2", sigma2)?;
        if !(rho.is_finite() && rho > -1.0 && rho < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "rho must lie in (-1, 1), got {rho}"
            )));
        }
        Ok(ModelSpec {
            family: Family::BivariateNormal { sigma1, sigma2, rho },
        })
    }

    pub fn exponential_location(sigma1: f64, sigma2: f64) -> Result<Self> {
        positive("sigma1", sigma1)?;
        positive("sigma2", sigma2)?;
        Ok(ModelSpec {
            family: Family::ExponentialLocation { sigma1, sigma2 },
        })
    }

    pub fn gamma_scale(a1: f64, a2: f64) -> Result<Self> {
        positive("a1", a1)?;
        positive("a2", a2)?;
        Ok(ModelSpec {
            family: Family::GammaScale { a1, a2 },
        })
    }

    pub fn power_scale(a1: f64, a2: f64) -> Result<Self> {
        positive("a1", a1)?;
        positive("a2", a2)?;
        Ok(ModelSpec {
            family: Family::PowerScale { a1, a2 },
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn name(&self) -> FamilyName {
        match self.family {
            Family::BivariateNormal { .. } => FamilyName::Normal,
            Family::ExponentialLocation { .. } => FamilyName::ExpLoc,
            Family::GammaScale { .. } => FamilyName::GammaScale,
            Family::PowerScale { .. } => FamilyName::PowerScale,
        }
    }

    pub fn kind(&self) -> FamilyKind {
        self.name().kind()
    }

    /// `τ² = σ1² + σ2² − 2ρσ1σ2`, the variance of `Z` in the normal model.
    pub fn normal_tau2(&self) -> Option<f64> {
        match self.family {
            Family::BivariateNormal { sigma1, sigma2, rho } => {
                Some(sigma1 * sigma1 + sigma2 * sigma2 - 2.0 * rho * sigma1 * sigma2)
            }
            _ => None,
        }
    }

    /// Pooling weight `σ2(σ2 − ρσ1)/τ²` of the normal restricted MLE.
    pub fn normal_pooling_weight(&self) -> Option<f64> {
        match self.family {
            Family::BivariateNormal { sigma1, sigma2, rho } => {
                Some(sigma2 * (sigma2 - rho * sigma1) / self.normal_tau2()?)
            }
            _ => None,
        }
    }

    /// Draws one observation from `f_θ`. Deterministic given the stream state.
    pub fn sample(&self, params: &ParamPoint, stream: &mut RandomStream) -> Result<Observation> {
        if params.kind() != self.kind() {
            return Err(Error::Precondition(format!(
                "{} parameters supplied to the {} family",
                params.kind(),
                self.name()
            )));
        }
        let (t1, t2) = (params.theta1(), params.theta2());
        let obs = match self.family {
            Family::BivariateNormal { sigma1, sigma2, rho } => {
                let u: f64 = stream.sample(StandardNormal);
                let v: f64 = stream.sample(StandardNormal);
                Observation {
                    x1: t1 + sigma1 * u,
                    x2: t2 + sigma2 * (rho * u + (1.0 - rho * rho).sqrt() * v),
                }
            }
            Family::ExponentialLocation { sigma1, sigma2 } => {
                let e1: f64 = stream.sample(Exp1);
                let e2: f64 = stream.sample(Exp1);
                Observation {
                    x1: t1 + sigma1 * e1,
                    x2: t2 + sigma2 * e2,
                }
            }
            Family::GammaScale { a1, a2 } => {
                let g1 = Gamma::new(a1, 1.0).expect("validated shape");
                let g2 = Gamma::new(a2, 1.0).expect("validated shape");
                Observation {
                    x1: t1 * g1.sample(stream),
                    x2: t2 * g2.sample(stream),
                }
            }
            Family::PowerScale { a1, a2 } => {
                // Inverse CDF on U ∈ (0, 1], one uniform per coordinate.
                let u1 = 1.0 - stream.random::<f64>();
                let u2 = 1.0 - stream.random::<f64>();
                Observation {
                    x1: t1 * u1.powf(1.0 / a1),
                    x2: t2 * u2.powf(1.0 / a2),
                }
            }
        };
        Ok(obs)
    }

    /// Density of `Z` (difference for location families, ratio for scale families).
    /// Returns 0 outside the support.
    pub fn density_fz(&self, z: f64) -> f64 {
        match self.family {
            Family::BivariateNormal { .. } => self.ln_density_fz(z).exp(),
            Family::ExponentialLocation { sigma1, sigma2 } => {
                let c = 1.0 / (sigma1 + sigma2);
                if z < 0.0 {
                    c * (z / sigma1).exp()
                } else {
                    c * (-z / sigma2).exp()
                }
            }
            Family::GammaScale { .. } | Family::PowerScale { .. } => {
                if z > 0.0 {
                    self.ln_density_fz(z).exp()
                } else {
                    0.0
                }
            }
        }
    }

    /// `ln f_Z(z)`; `-inf` outside the support.
    pub fn ln_density_fz(&self, z: f64) -> f64 {
        match self.family {
            Family::BivariateNormal { .. } => {
                let tau2 = self.normal_tau2().unwrap();
                -0.5 * z * z / tau2 - 0.5 * (2.0 * PI * tau2).ln()
            }
            Family::ExponentialLocation { sigma1, sigma2 } => {
                let c = -(sigma1 + sigma2).ln();
                if z < 0.0 {
                    c + z / sigma1
                } else {
                    c - z / sigma2
                }
            }
            Family::GammaScale { a1, a2 } => {
                if z <= 0.0 {
                    return f64::NEG_INFINITY;
                }
                ln_gamma(a1 + a2) - ln_gamma(a1) - ln_gamma(a2) + (a2 - 1.0) * z.ln()
                    - (a1 + a2) * z.ln_1p()
            }
            Family::PowerScale { a1, a2 } => {
                if z <= 0.0 {
                    return f64::NEG_INFINITY;
                }
                let ln_min = if z <= 1.0 { 0.0 } else { -z.ln() };
                (a1 * a2 / (a1 + a2)).ln() + (a2 - 1.0) * z.ln() + (a1 + a2) * ln_min
            }
        }
    }

    /// Equivariant-estimator constants `(c01, c02)`: `E[Zi]` for location families,
    /// `E[Zi]/E[Zi²]` for scale families.
    pub fn equivariant_constants(&self) -> (f64, f64) {
        match self.family {
            Family::BivariateNormal { .. } => (0.0, 0.0),
            Family::ExponentialLocation { sigma1, sigma2 } => (sigma1, sigma2),
            Family::GammaScale { a1, a2 } => (1.0 / (a1 + 1.0), 1.0 / (a2 + 1.0)),
            Family::PowerScale { a1, a2 } => ((a1 + 2.0) / (a1 + 1.0), (a2 + 2.0) / (a2 + 1.0)),
        }
    }

    /// Conditional moments `(E[Z1 | Z = z], E[Z1² | Z = z])` for scale families.
    pub fn conditional_moments(&self, z: f64) -> Result<(f64, f64)> {
        if !(z > 0.0) {
            return Err(Error::Domain(format!(
                "conditional moments need z > 0, got {z}"
            )));
        }
        match self.family {
            Family::GammaScale { a1, a2 } => {
                let s = a1 + a2;
                let w = 1.0 + z;
                Ok((s / w, (s + 1.0) * s / (w * w)))
            }
            Family::PowerScale { a1, a2 } => {
                let s = a1 + a2;
                let m = if z <= 1.0 { 1.0 } else { 1.0 / z };
                Ok((s / (s + 1.0) * m, s / (s + 2.0) * m * m))
            }
            _ => Err(Error::Unsupported(format!(
                "conditional moments are defined for scale families, not {}",
                self.name()
            ))),
        }
    }

    /// Points where `f_Z` is not smooth.
    pub fn fz_kinks(&self) -> Vec<f64> {
        match self.family {
            Family::ExponentialLocation { .. } | Family::PowerScale { .. } => {
                vec![if self.kind() == FamilyKind::Location { 0.0 } else { 1.0 }]
            }
            _ => Vec::new(),
        }
    }

    /// Finite interval carrying all but < 1e-12 of the mass of `f_Z`, for the
    /// location families (`±8τ` for the normal, analytic exponential cuts).
    /// Scale families have polynomial tails and are integrated on a mapped half-line.
    pub fn fz_truncated_support(&self) -> Option<(f64, f64)> {
        match self.family {
            Family::BivariateNormal { .. } => {
                let tau = self.normal_tau2().unwrap().sqrt();
                Some((-8.0 * tau, 8.0 * tau))
            }
            Family::ExponentialLocation { sigma1, sigma2 } => {
                // Tail mass σi/(σ1+σ2)·e^{-30} < 1e-12.
                Some((-30.0 * sigma1, 30.0 * sigma2))
            }
            _ => None,
        }
    }

    /// `∫ g(z) f_Z(z) dz` over the support of `Z`.
    pub fn integrate_against_fz<G: Fn(f64) -> f64>(
        &self,
        g: G,
        opts: QuadratureOptions,
    ) -> Result<Integral> {
        let kinks = self.fz_kinks();
        let r = match self.fz_truncated_support() {
            Some((lo, hi)) => {
                quadrature::integrate(|z| g(z) * self.density_fz(z), lo, hi, &kinks, opts)?
            }
            None => quadrature::integrate_half_line(
                |z| {
                    let f = self.density_fz(z);
                    if f == 0.0 {
                        0.0
                    } else {
                        g(z) * f
                    }
                },
                0.0,
                &kinks,
                opts,
            )?,
        };
        Ok(r)
    }

    /// View of a location family as the law of `Z = Z2 − Z1`.
    pub fn location_reduction(&self) -> Result<LocationView> {
        match self.kind() {
            FamilyKind::Location => Ok(LocationView(*self)),
            FamilyKind::Scale => Err(Error::Unsupported(format!(
                "{} is a scale family",
                self.name()
            ))),
        }
    }

    /// View of a scale family as the law of `Z = Z2 / Z1` with conditional moments.
    pub fn scale_reduction(&self) -> Result<ScaleView> {
        match self.kind() {
            FamilyKind::Scale => Ok(ScaleView(*self)),
            FamilyKind::Location => Err(Error::Unsupported(format!(
                "{} is a location family",
                self.name()
            ))),
        }
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::BivariateNormal { sigma1, sigma2, rho } => {
                write!(f, "normal(sigma1={sigma1}, sigma2={sigma2}, rho={rho})")
            }
            Family::ExponentialLocation { sigma1, sigma2 } => {
                write!(f, "exp_loc(sigma1={sigma1}, sigma2={sigma2})")
            }
            Family::GammaScale { a1, a2 } => write!(f, "gamma_scale(a1={a1}, a2={a2})"),
            Family::PowerScale { a1, a2 } => write!(f, "power_scale(a1={a1}, a2={a2})"),
        }
    }
}

/// A point of the restricted parameter space `θ1 ≤ θ2` (and `θ1 > 0` for scale).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamPoint {
    theta1: f64,
    theta2: f64,
    kind: FamilyKind,
}

impl ParamPoint {
    pub fn location(theta1: f64, theta2: f64) -> Result<Self> {
        if !(theta1.is_finite() && theta2.is_finite()) || theta1 > theta2 {
            return Err(Error::InvalidParameter(format!(
                "location parameters must satisfy θ1 ≤ θ2, got ({theta1}, {theta2})"
            )));
        }
        Ok(ParamPoint {
            theta1,
            theta2,
            kind: FamilyKind::Location,
        })
    }

    pub fn scale(theta1: f64, theta2: f64) -> Result<Self> {
        if !(theta1.is_finite() && theta2.is_finite()) || !(theta1 > 0.0) || theta1 > theta2 {
            return Err(Error::InvalidParameter(format!(
                "scale parameters must satisfy 0 < θ1 ≤ θ2, got ({theta1}, {theta2})"
            )));
        }
        Ok(ParamPoint {
            theta1,
            theta2,
            kind: FamilyKind::Scale,
        })
    }

    /// Canonical point with the given `λ`: `(0, λ)` for location, `(1, λ)` for scale.
    pub fn at_lambda(kind: FamilyKind, lambda: f64) -> Result<Self> {
        match kind {
            FamilyKind::Location => ParamPoint::location(0.0, lambda),
            FamilyKind::Scale => ParamPoint::scale(1.0, lambda),
        }
    }

    pub fn theta1(&self) -> f64 {
        self.theta1
    }

    pub fn theta2(&self) -> f64 {
        self.theta2
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    /// `θ2 − θ1` (location) or `θ2 / θ1` (scale).
    pub fn lambda(&self) -> f64 {
        match self.kind {
            FamilyKind::Location => self.theta2 - self.theta1,
            FamilyKind::Scale => self.theta2 / self.theta1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observation {
    pub x1: f64,
    pub x2: f64,
}

impl Observation {
    pub fn new(x1: f64, x2: f64) -> Self {
        Observation { x1, x2 }
    }
}

/// Law of the location difference `Z = Z2 − Z1` as needed by the coefficient curve.
pub trait LocationReduction: Sync {
    /// `(c01, c02)`.
    fn constants(&self) -> (f64, f64);
    fn ln_density(&self, z: f64) -> f64;
    /// A maximizer of the density.
    fn mode(&self) -> f64;
    /// A typical width of the density, used to seed tail searches.
    fn spread(&self) -> f64;
    fn kinks(&self) -> Vec<f64> {
        Vec::new()
    }
}

/// Law of the scale ratio `Z = Z2 / Z1` with the conditional moments of `Z1`.
pub trait ScaleReduction: Sync {
    /// `(c01, c02)`.
    fn constants(&self) -> (f64, f64);
    fn density(&self, z: f64) -> f64;
    /// `(h1(z), h2(z)) = (E[Z1 | Z = z], E[Z1² | Z = z])`.
    fn moments(&self, z: f64) -> (f64, f64);
    fn kinks(&self) -> Vec<f64> {
        Vec::new()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct LocationView(ModelSpec);

impl LocationReduction for LocationView {
    fn constants(&self) -> (f64, f64) {
        self.0.equivariant_constants()
    }

    fn ln_density(&self, z: f64) -> f64 {
        self.0.ln_density_fz(z)
    }

    fn mode(&self) -> f64 {
        0.0
    }

    fn spread(&self) -> f64 {
        match self.0.family {
            Family::BivariateNormal { .. } => self.0.normal_tau2().unwrap().sqrt(),
            Family::ExponentialLocation { sigma1, sigma2 } => sigma1.min(sigma2),
            _ => unreachable!("location view over a scale family"),
        }
    }

    fn kinks(&self) -> Vec<f64> {
        self.0.fz_kinks()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ScaleView(ModelSpec);

impl ScaleReduction for ScaleView {
    fn constants(&self) -> (f64, f64) {
        self.0.equivariant_constants()
    }

    fn density(&self, z: f64) -> f64 {
        self.0.density_fz(z)
    }

    fn moments(&self, z: f64) -> (f64, f64) {
        self.0
            .conditional_moments(z)
            .expect("scale view evaluates moments on z > 0")
    }

    fn kinks(&self) -> Vec<f64> {
        self.0.fz_kinks()
    }
}

/// Grid falsifier for log-concavity of a univariate density on `(a, b)`.
///
/// Tests `g(x1) g(x2 − δ) ≥ g(x1 − δ) g(x2)` for every grid triple with
/// `a + δ < x1 < x2 < b`, where the `x` points and `δ` are multiples of
/// `(b − a)/grid_size`. A `false` result is a certified counterexample; `true`
/// only means no violation was found on the grid. A relative slack of 1e-12
/// absorbs roundoff.
pub fn log_concavity_check<F: Fn(f64) -> f64>(
    density: F,
    interval: (f64, f64),
    grid_size: usize,
) -> Result<bool> {
    Ok(find_log_concavity_violation(density, interval, grid_size)?.is_none())
}

/// Like [`log_concavity_check`] but returns the first violating `(x1, x2, δ)`.
pub fn find_log_concavity_violation<F: Fn(f64) -> f64>(
    density: F,
    interval: (f64, f64),
    grid_size: usize,
) -> Result<Option<(f64, f64, f64)>> {
    let (a, b) = interval;
    if grid_size < 3 {
        return Err(Error::Precondition(format!(
            "grid_size must be at least 3, got {grid_size}"
        )));
    }
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::Precondition(format!(
            "need a finite interval a < b, got ({a}, {b})"
        )));
    }
    let h = (b - a) / grid_size as f64;
    let x = |i: usize| a + i as f64 * h;
    let mut g = vec![0.0; grid_size];
    for (i, gi) in g.iter_mut().enumerate().skip(1) {
        let v = density(x(i));
        if !(v >= 0.0) || !v.is_finite() {
            return Err(Error::InvalidDensity(format!(
                "density evaluates to {v} at {}",
                x(i)
            )));
        }
        *gi = v;
    }
    // x1 = x(i), x2 = x(j), δ = k h with 1 ≤ k < i < j ≤ grid_size - 1.
    for i in 2..grid_size {
        for j in (i + 1)..grid_size {
            for k in 1..i {
                let lhs = g[i] * g[j - k];
                let rhs = g[i - k] * g[j];
                if lhs - rhs < -1e-12 * lhs.max(rhs).max(1.0) {
                    return Ok(Some((x(i), x(j), k as f64 * h)));
                }
            }
        }
    }
    Ok(None)
}
