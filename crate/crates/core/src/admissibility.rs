//! Risk-minimizing mixing coefficients, the admissible range of α, and the
//! auxiliary `S_λ` laws whose ordering drives the monotonicity of the curves.
//!
//! For a location family with `c = c02 − c01` the optimal coefficient at `λ` is
//!
//! ```text
//! α*(λ) = λ ∫_{z<0} z f_Z(z + c − λ) dz / ∫_{z<0} z² f_Z(z + c − λ) dz
//! α(λ)  = p1/(p1+p2) + p2/(p1+p2) α*(λ)
//! ```
//!
//! and for a scale family, with `κ = c01 / (c02 λ)`,
//!
//! ```text
//! α1(λ) = (λ−1) ∫₀¹ h1(κt)(1−t) f_Z(κt) dt / (c01 ∫₀¹ h2(κt)(1−t)² f_Z(κt) dt)
//! α(λ)  = p1/(p1+p2) − p2/(p1+p2) α1(λ)
//! ```
//!
//! Location integrands are evaluated relative to the peak of the shifted density,
//! so the ratio stays representable long after the raw integrals underflow.

use std::fmt;
use std::io::Write;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::estimators::WeightPair;
use crate::models::{FamilyKind, LocationReduction, ModelSpec, ScaleReduction};
use crate::quadrature::{self, QuadratureOptions};

/// Per-integral quadrature tolerance for the coefficient curves.
const CURVE_QUAD: QuadratureOptions = QuadratureOptions {
    abs_tol: 0.0,
    rel_tol: 1e-10,
    max_panels: 4000,
};

/// Log-density drop at which a location window is cut.
const LOG_CUT: f64 = 50.0;

/// Default λ schedule of the divergence probe.
pub const DEFAULT_PROBE_SCHEDULE: [f64; 4] = [10.0, 1e2, 1e3, 1e4];

/// Threshold below (above) which a monotone probe is declared divergent.
pub const DIVERGENCE_THRESHOLD: f64 = 1e3;

const ORDER_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaCurvePoint {
    pub lambda: f64,
    /// `α*(λ)` for location families, `α1(λ)` for scale families.
    pub alpha_star: f64,
    pub alpha: f64,
    /// Bound on the absolute quadrature error of `alpha`.
    pub quad_error: f64,
}

/// Integration window for the location integrals at one `λ`.
#[derive(Debug, Clone)]
struct LocationWindow {
    /// Shift: the integrand uses `f_Z(z + shift)`.
    shift: f64,
    lo: f64,
    ln_ref: f64,
    breaks: Vec<f64>,
}

impl LocationWindow {
    fn new<R: LocationReduction>(r: &R, lambda: f64) -> Result<Self> {
        let (c1, c2) = r.constants();
        let shift = c2 - c1 - lambda;
        let z_ref = (r.mode() - shift).min(0.0);
        let ln_ref = r.ln_density(z_ref + shift);
        if !ln_ref.is_finite() {
            return Err(Error::DegenerateModel(format!(
                "density vanishes at the reference point for λ = {lambda}"
            )));
        }
        let spread = r.spread();
        let eps = 1e-6 * spread.max(1e-12);
        let slope = (ln_ref - r.ln_density(z_ref + shift - eps)) / eps;
        let mut step = if slope.is_finite() && slope > 0.0 {
            spread.min(5.0 / slope)
        } else {
            spread
        };
        let drop = |z: f64| r.ln_density(z + shift) - ln_ref + 2.0 * z.abs().max(1.0).ln();
        let mut lo = z_ref - step;
        let mut tries = 0;
        while drop(lo) > -LOG_CUT {
            step *= 2.0;
            lo = z_ref - step;
            tries += 1;
            if tries > 200 || !lo.is_finite() {
                return Err(Error::DegenerateModel(format!(
                    "no lower cut found for the location window at λ = {lambda}"
                )));
            }
        }
        let mut breaks: Vec<f64> = r.kinks().into_iter().map(|k| k - shift).collect();
        breaks.push(z_ref);
        breaks.retain(|&b| b > lo && b < 0.0);
        Ok(LocationWindow {
            shift,
            lo,
            ln_ref,
            breaks,
        })
    }

    /// `z^k f_Z(z + shift) / f_Z(z_ref + shift)`.
    fn scaled<R: LocationReduction>(&self, r: &R, z: f64, k: i32) -> f64 {
        let d = (r.ln_density(z + self.shift) - self.ln_ref).exp();
        if d == 0.0 {
            0.0
        } else {
            z.powi(k) * d
        }
    }

    fn integral<R: LocationReduction>(&self, r: &R, k: i32) -> Result<quadrature::Integral> {
        Ok(quadrature::integrate(
            |z| self.scaled(r, z, k),
            self.lo,
            0.0,
            &self.breaks,
            CURVE_QUAD,
        )?)
    }
}

fn check_denominator(den: f64, lambda: f64) -> Result<()> {
    if den.is_finite() && den > 1e-300 {
        Ok(())
    } else {
        Err(Error::DegenerateModel(format!(
            "normalizing integral {den} vanished at λ = {lambda}"
        )))
    }
}

/// `α*(λ)` and a bound on its absolute quadrature error, for any location reduction.
pub fn alpha_star_location_with<R: LocationReduction>(r: &R, lambda: f64) -> Result<(f64, f64)> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::Precondition(format!(
            "location curves need λ ≥ 0, got {lambda}"
        )));
    }
    if lambda == 0.0 {
        return Ok((0.0, 0.0));
    }
    let w = LocationWindow::new(r, lambda)?;
    let num = w.integral(r, 1)?;
    let den = w.integral(r, 2)?;
    check_denominator(den.value, lambda)?;
    let value = lambda * num.value / den.value;
    let rel = num.error / num.value.abs().max(f64::MIN_POSITIVE) + den.error / den.value;
    Ok((value, value.abs() * rel))
}

pub fn alpha_star_location(model: &ModelSpec, weights: WeightPair, lambda: f64) -> Result<(f64, f64)> {
    let _ = weights;
    alpha_star_location_with(&model.location_reduction()?, lambda)
}

pub fn alpha_location_with<R: LocationReduction>(
    r: &R,
    weights: WeightPair,
    lambda: f64,
) -> Result<AlphaCurvePoint> {
    let (star, err) = alpha_star_location_with(r, lambda)?;
    let a0 = weights.alpha0();
    Ok(AlphaCurvePoint {
        lambda,
        alpha_star: star,
        alpha: a0 + (1.0 - a0) * star,
        quad_error: (1.0 - a0) * err,
    })
}

pub fn alpha_location(model: &ModelSpec, weights: WeightPair, lambda: f64) -> Result<AlphaCurvePoint> {
    alpha_location_with(&model.location_reduction()?, weights, lambda)
}

struct ScaleSetup {
    kappa: f64,
    c1: f64,
    /// Density value used to rescale the integrands.
    f_ref: f64,
    breaks: Vec<f64>,
}

impl ScaleSetup {
    fn new<R: ScaleReduction>(r: &R, lambda: f64) -> Self {
        let (c1, c2) = r.constants();
        let kappa = c1 / (c2 * lambda);
        let f_mid = r.density(0.5 * kappa);
        let f_ref = if f_mid.is_finite() && f_mid > 0.0 { f_mid } else { 1.0 };
        let breaks = r
            .kinks()
            .into_iter()
            .map(|k| k / kappa)
            .filter(|&t| t > 0.0 && t < 1.0)
            .collect();
        ScaleSetup {
            kappa,
            c1,
            f_ref,
            breaks,
        }
    }

    /// `(h1(κt)(1−t) f(κt), h2(κt)(1−t)² f(κt))`, rescaled.
    fn integrands<R: ScaleReduction>(&self, r: &R, t: f64) -> (f64, f64) {
        let z = self.kappa * t;
        let f = r.density(z) / self.f_ref;
        if f == 0.0 {
            return (0.0, 0.0);
        }
        let (h1, h2) = r.moments(z);
        let u = 1.0 - t;
        (h1 * u * f, h2 * u * u * f)
    }
}

fn scale_lambda_check(lambda: f64) -> Result<()> {
    if lambda >= 1.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "scale curves need λ ≥ 1, got {lambda}"
        )))
    }
}

pub fn alpha_scale_with<R: ScaleReduction>(
    r: &R,
    weights: WeightPair,
    lambda: f64,
) -> Result<AlphaCurvePoint> {
    scale_lambda_check(lambda)?;
    let a0 = weights.alpha0();
    if lambda == 1.0 {
        return Ok(AlphaCurvePoint {
            lambda,
            alpha_star: 0.0,
            alpha: a0,
            quad_error: 0.0,
        });
    }
    let s = ScaleSetup::new(r, lambda);
    let num = quadrature::integrate(|t| s.integrands(r, t).0, 0.0, 1.0, &s.breaks, CURVE_QUAD)?;
    let den = quadrature::integrate(|t| s.integrands(r, t).1, 0.0, 1.0, &s.breaks, CURVE_QUAD)?;
    check_denominator(den.value, lambda)?;
    let a1 = (lambda - 1.0) * num.value / (s.c1 * den.value);
    let rel = num.error / num.value.abs().max(f64::MIN_POSITIVE) + den.error / den.value;
    Ok(AlphaCurvePoint {
        lambda,
        alpha_star: a1,
        alpha: a0 - (1.0 - a0) * a1,
        quad_error: (1.0 - a0) * a1.abs() * rel,
    })
}

pub fn alpha_scale(model: &ModelSpec, weights: WeightPair, lambda: f64) -> Result<AlphaCurvePoint> {
    alpha_scale_with(&model.scale_reduction()?, weights, lambda)
}

/// The coefficient curve of either kind at one `λ`.
pub fn alpha_point(model: &ModelSpec, weights: WeightPair, lambda: f64) -> Result<AlphaCurvePoint> {
    match model.kind() {
        FamilyKind::Location => alpha_location(model, weights, lambda),
        FamilyKind::Scale => alpha_scale(model, weights, lambda),
    }
}

/// Curve points for every `λ`, computed in parallel and returned in input order.
pub fn alpha_curve(model: &ModelSpec, weights: WeightPair, lambdas: &[f64]) -> Result<Vec<AlphaCurvePoint>> {
    lambdas
        .par_iter()
        .map(|&l| alpha_point(model, weights, l))
        .collect()
}

pub const ALPHA_CSV_HEADER: [&str; 5] = ["family", "lambda", "alpha_star", "alpha", "quad_error"];

pub fn write_alpha_csv<W: Write>(out: W, model: &ModelSpec, points: &[AlphaCurvePoint]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(ALPHA_CSV_HEADER)?;
    for p in points {
        w.write_record([
            model.name().token().to_string(),
            p.lambda.to_string(),
            p.alpha_star.to_string(),
            p.alpha.to_string(),
            p.quad_error.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// How far the probe got in identifying `α∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitStatus {
    /// Monotone past the divergence threshold; `α∞` taken as infinite.
    Diverges,
    /// Finite last value reported; the limit is not certified.
    Uncertified,
    /// Evaluation failed before a trend was established.
    Inconclusive,
}

/// Admissible range of α within the mixed class, from a divergence probe.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibleInterval {
    /// `-inf` when the decreasing curve diverges.
    pub lower: f64,
    /// `+inf` when the increasing curve diverges.
    pub upper: f64,
    pub diverges: bool,
    pub status: LimitStatus,
    /// Curve points actually evaluated, in schedule order.
    pub probes: Vec<AlphaCurvePoint>,
    pub warning: Option<String>,
}

impl fmt::Display for AdmissibleInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let open_lo = self.lower == f64::NEG_INFINITY;
        let open_hi = self.upper == f64::INFINITY;
        write!(
            f,
            "{}{}, {}{}",
            if open_lo { "(" } else { "[" },
            if open_lo { "-inf".to_string() } else { self.lower.to_string() },
            if open_hi { "inf".to_string() } else { self.upper.to_string() },
            if open_hi { ")" } else { "]" },
        )
    }
}

fn strictly(values: &[f64], decreasing: bool) -> bool {
    values.len() >= 2
        && values.windows(2).all(|w| if decreasing { w[1] < w[0] } else { w[1] > w[0] })
}

/// Probe of `α∞ = lim α(λ)` along `schedule`, for any curve evaluator.
///
/// Divergence is declared when the values are strictly monotone and the last one
/// is beyond `∓1e3`. This is a heuristic, not a proof of the limit.
pub fn alpha_infinity_probe_with<F>(eval: F, weights: WeightPair, schedule: &[f64]) -> Result<AdmissibleInterval>
where
    F: Fn(f64) -> Result<AlphaCurvePoint>,
{
    if schedule.is_empty() || !schedule.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::Precondition(
            "probe schedule must be non-empty and strictly increasing".into(),
        ));
    }
    let a0 = weights.alpha0();
    let mut probes = Vec::with_capacity(schedule.len());
    let mut failure = None;
    for &l in schedule {
        match eval(l) {
            Ok(p) => probes.push(p),
            Err(e) => {
                failure = Some((l, e));
                break;
            }
        }
    }
    let values: Vec<f64> = probes.iter().map(|p| p.alpha).collect();
    let last = values.last().copied().unwrap_or(f64::NAN);
    let falls = strictly(&values, true) && last < -DIVERGENCE_THRESHOLD;
    let rises = strictly(&values, false) && last > DIVERGENCE_THRESHOLD;
    let failed_note = failure
        .as_ref()
        .map(|(l, e)| format!("evaluation failed at λ = {l}: {e}"));

    let (lower, upper, status) = if falls {
        (f64::NEG_INFINITY, a0, LimitStatus::Diverges)
    } else if rises {
        (a0, f64::INFINITY, LimitStatus::Diverges)
    } else if failure.is_some() {
        (f64::NAN, f64::NAN, LimitStatus::Inconclusive)
    } else if last <= a0 {
        (last, a0, LimitStatus::Uncertified)
    } else {
        (a0, last, LimitStatus::Uncertified)
    };
    let warning = match status {
        LimitStatus::Diverges => failed_note.map(|n| format!("{n}; divergence inferred from the preceding trend")),
        LimitStatus::Uncertified => Some(format!(
            "limit not certified: last probe value {last} at λ = {}",
            schedule[schedule.len() - 1]
        )),
        LimitStatus::Inconclusive => failed_note,
    };
    Ok(AdmissibleInterval {
        lower,
        upper,
        diverges: status == LimitStatus::Diverges,
        status,
        probes,
        warning,
    })
}

pub fn alpha_infinity_probe(model: &ModelSpec, weights: WeightPair, schedule: &[f64]) -> Result<AdmissibleInterval> {
    alpha_infinity_probe_with(|l| alpha_point(model, weights, l), weights, schedule)
}

/// Normalized density of the auxiliary variable `S_λ`.
#[derive(Clone)]
pub struct SLambdaDensity {
    lambda: f64,
    support: (f64, f64),
    breaks: Vec<f64>,
    pdf: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl fmt::Debug for SLambdaDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SLambdaDensity")
            .field("lambda", &self.lambda)
            .field("support", &self.support)
            .finish()
    }
}

impl SLambdaDensity {
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Interval carrying the mass: `[lo, 0]` for location, `[0, 1]` for scale.
    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    pub fn pdf(&self, x: f64) -> f64 {
        (self.pdf)(x)
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        let (lo, hi) = self.support;
        if x <= lo {
            return Ok(0.0);
        }
        let x = x.min(hi);
        let r = quadrature::integrate(|t| self.pdf(t), lo, x, &self.breaks, QuadratureOptions::with_tolerance(1e-10))?;
        Ok(r.value)
    }

    /// Total mass by quadrature.
    pub fn mass(&self) -> Result<f64> {
        self.cdf(self.support.1)
    }
}

pub fn s_lambda_location_with<R>(r: &R, lambda: f64) -> Result<SLambdaDensity>
where
    R: LocationReduction + Clone + Send + 'static,
{
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::Precondition(format!("need λ ≥ 0, got {lambda}")));
    }
    let w = LocationWindow::new(r, lambda)?;
    let den = w.integral(r, 2)?;
    check_denominator(den.value, lambda)?;
    let norm = den.value;
    let support = (w.lo, 0.0);
    let breaks = w.breaks.clone();
    let r = r.clone();
    Ok(SLambdaDensity {
        lambda,
        support,
        breaks,
        pdf: Arc::new(move |z| if z < 0.0 { w.scaled(&r, z, 2) / norm } else { 0.0 }),
    })
}

pub fn s_lambda_scale_with<R>(r: &R, lambda: f64) -> Result<SLambdaDensity>
where
    R: ScaleReduction + Clone + Send + 'static,
{
    scale_lambda_check(lambda)?;
    let s = ScaleSetup::new(r, lambda);
    let den = quadrature::integrate(|t| s.integrands(r, t).1, 0.0, 1.0, &s.breaks, CURVE_QUAD)?;
    check_denominator(den.value, lambda)?;
    let norm = den.value;
    let breaks = s.breaks.clone();
    let r = r.clone();
    Ok(SLambdaDensity {
        lambda,
        support: (0.0, 1.0),
        breaks,
        pdf: Arc::new(move |t| {
            if t > 0.0 && t < 1.0 {
                s.integrands(&r, t).1 / norm
            } else {
                0.0
            }
        }),
    })
}

pub fn s_lambda_density(model: &ModelSpec, weights: WeightPair, lambda: f64) -> Result<SLambdaDensity> {
    let _ = weights;
    match model.kind() {
        FamilyKind::Location => s_lambda_location_with(&model.location_reduction()?, lambda),
        FamilyKind::Scale => s_lambda_scale_with(&model.scale_reduction()?, lambda),
    }
}

/// Grid falsifier for `a ≤lr b`: `pdf_b / pdf_a` must not decrease along `grid`.
/// Checks `pdf_b(z') pdf_a(z) ≥ pdf_b(z) pdf_a(z')` for all grid pairs `z < z'`.
pub fn lr_order_holds(a: &SLambdaDensity, b: &SLambdaDensity, grid: &[f64]) -> bool {
    let fa: Vec<f64> = grid.iter().map(|&z| a.pdf(z)).collect();
    let fb: Vec<f64> = grid.iter().map(|&z| b.pdf(z)).collect();
    for i in 0..grid.len() {
        for j in (i + 1)..grid.len() {
            let lhs = fb[j] * fa[i];
            let rhs = fb[i] * fa[j];
            if lhs - rhs < -ORDER_SLACK * lhs.max(rhs).max(1.0) {
                return false;
            }
        }
    }
    true
}

/// Grid check of `a ≤st b`, i.e. `CDF_a ≥ CDF_b` at every grid point, up to `tol`.
pub fn st_order_holds(a: &SLambdaDensity, b: &SLambdaDensity, grid: &[f64], tol: f64) -> Result<bool> {
    for &z in grid {
        if a.cdf(z)? < b.cdf(z)? - tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Outcome of the grid checks behind the monotonicity of the scale curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScaleConditionReport {
    /// `h2(θz) f(θz) / (h2(z) f(z))` non-decreasing in `z` for every grid `θ`.
    pub ratio_increasing: bool,
    pub ratio_decreasing: bool,
    /// `k(t, λ)` non-decreasing in `t` for every grid `λ`.
    pub k_increasing_in_t: bool,
    pub k_decreasing_in_t: bool,
    /// `k(t, λ)` non-decreasing in `λ` for every grid `t`.
    pub k_increasing_in_lambda: bool,
    pub k_decreasing_in_lambda: bool,
}

impl ScaleConditionReport {
    /// Conditions under which `α(λ)` decreases from `p1/(p1+p2)`.
    pub fn decreasing_case(&self) -> bool {
        self.k_increasing_in_lambda
            && ((self.ratio_increasing && self.k_increasing_in_t)
                || (self.ratio_decreasing && self.k_decreasing_in_t))
    }

    /// Conditions under which `α(λ)` increases from `p1/(p1+p2)`.
    pub fn increasing_case(&self) -> bool {
        self.k_decreasing_in_lambda
            && ((self.ratio_increasing && self.k_decreasing_in_t)
                || (self.ratio_decreasing && self.k_increasing_in_t))
    }

    pub fn holds(&self) -> bool {
        self.decreasing_case() || self.increasing_case()
    }
}

/// `(non-decreasing, non-increasing)` along a sequence, with relative slack.
fn monotone(values: &[f64]) -> (bool, bool) {
    if values.iter().any(|v| !v.is_finite()) {
        return (false, false);
    }
    let slack = |a: f64, b: f64| ORDER_SLACK * a.abs().max(b.abs()).max(1.0);
    let inc = values.windows(2).all(|w| w[1] >= w[0] - slack(w[0], w[1]));
    let dec = values.windows(2).all(|w| w[1] <= w[0] + slack(w[0], w[1]));
    (inc, dec)
}

fn k_value<R: ScaleReduction>(r: &R, t: f64, lambda: f64) -> f64 {
    let (c1, c2) = r.constants();
    let (h1, h2) = r.moments(c1 * t / (c2 * lambda));
    (lambda - 1.0) * h1 / ((1.0 - t) * h2)
}

/// Grid checks on `θ ∈ theta_grid ⊂ (0,1)`, `t ∈ t_grid ⊂ (0,1)` and `λ ∈ lambda_grid`.
/// The ratio is tested at `z = t · c01/c02`, which covers `(0, c01/c02)`.
pub fn scale_condition_report_with<R: ScaleReduction>(
    r: &R,
    theta_grid: &[f64],
    t_grid: &[f64],
    lambda_grid: &[f64],
) -> Result<ScaleConditionReport> {
    let inside = |g: &[f64]| g.iter().all(|&x| x > 0.0 && x < 1.0);
    if !inside(theta_grid) || !inside(t_grid) || lambda_grid.iter().any(|&l| !(l >= 1.0)) {
        return Err(Error::Precondition(
            "θ and t grids must lie in (0, 1) and λ grid in [1, ∞)".into(),
        ));
    }
    let mut t_sorted = t_grid.to_vec();
    t_sorted.sort_by(f64::total_cmp);
    let mut l_sorted = lambda_grid.to_vec();
    l_sorted.sort_by(f64::total_cmp);
    let (c1, c2) = r.constants();
    let g = |z: f64| r.moments(z).1 * r.density(z);

    let mut report = ScaleConditionReport {
        ratio_increasing: true,
        ratio_decreasing: true,
        k_increasing_in_t: true,
        k_decreasing_in_t: true,
        k_increasing_in_lambda: true,
        k_decreasing_in_lambda: true,
    };
    for &th in theta_grid {
        let ratios: Vec<f64> = t_sorted
            .iter()
            .map(|&t| {
                let z = t * c1 / c2;
                g(th * z) / g(z)
            })
            .collect();
        let (inc, dec) = monotone(&ratios);
        report.ratio_increasing &= inc;
        report.ratio_decreasing &= dec;
    }
    for &l in &l_sorted {
        let ks: Vec<f64> = t_sorted.iter().map(|&t| k_value(r, t, l)).collect();
        let (inc, dec) = monotone(&ks);
        report.k_increasing_in_t &= inc;
        report.k_decreasing_in_t &= dec;
    }
    for &t in &t_sorted {
        let ks: Vec<f64> = l_sorted.iter().map(|&l| k_value(r, t, l)).collect();
        let (inc, dec) = monotone(&ks);
        report.k_increasing_in_lambda &= inc;
        report.k_decreasing_in_lambda &= dec;
    }
    Ok(report)
}

/// Default λ grid used by [`lemma51_condition_check`]: `1, 1.25, …, 10`.
pub fn default_condition_lambdas() -> Vec<f64> {
    (0..=36).map(|i| 1.0 + 0.25 * i as f64).collect()
}

/// `true` when no grid violation of either set of monotonicity conditions is found.
pub fn lemma51_condition_check(model: &ModelSpec, theta_grid: &[f64], z_grid: &[f64]) -> Result<bool> {
    let r = model.scale_reduction()?;
    Ok(scale_condition_report_with(&r, theta_grid, z_grid, &default_condition_lambdas())?.holds())
}
