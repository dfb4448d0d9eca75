//! Randomized and grid property suites. Each suite counts the cases it tried
//! and the violations it found; a suite passes when there are none.

use std::fmt;

use rand::Rng;

use crate::admissibility::{
    alpha_curve, lemma51_condition_check, lr_order_holds, s_lambda_density, st_order_holds,
};
use crate::error::Result;
use crate::estimators::{mix_general, Estimate, WeightPair};
use crate::loss::{dominance_pointwise, LossSpec};
use crate::models::{log_concavity_check, FamilyKind, ModelSpec, ParamPoint};
use crate::rng::RandomStream;

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOutcome {
    pub name: String,
    pub cases: u64,
    pub violations: u64,
    /// First violating case, if any.
    pub example: Option<String>,
}

impl SuiteOutcome {
    fn new(name: impl Into<String>) -> Self {
        SuiteOutcome {
            name: name.into(),
            cases: 0,
            violations: 0,
            example: None,
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.violations += 1;
            if self.example.is_none() {
                self.example = Some(describe());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0 && self.cases > 0
    }
}

impl fmt::Display for SuiteOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: {} cases, {} violations",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.cases,
            self.violations
        )?;
        if let Some(e) = &self.example {
            write!(f, " (first: {e})")?;
        }
        Ok(())
    }
}

/// Which pointwise dominance statement a location suite exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DominanceVariant {
    /// Mixing with α strictly inside `(edge, 1)` lowers the loss for all `θ1 ≤ θ2`.
    Interior,
    /// α may sit on the lower edge; requires `θ1 < θ2`.
    Edge,
    /// For `p1/(p1+p2) ≤ α1 < α2` the α1-mix has the smaller loss.
    Ordered,
}

/// Scale loss used by the scale dominance suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScaleLossForm {
    /// `p (d − θ)²`.
    Absolute,
    /// `p (d/θ − 1)²`.
    Relative,
}

fn weights<R: Rng>(rng: &mut R) -> WeightPair {
    let p1 = 10f64.powf(rng.random_range(-1.0..1.0));
    let p2 = 10f64.powf(rng.random_range(-1.0..1.0));
    WeightPair::new(p1, p2).expect("positive weights")
}

/// Uniform on the open interval `(a, b)`.
fn open_uniform<R: Rng>(rng: &mut R, a: f64, b: f64) -> f64 {
    loop {
        let x = a + (b - a) * rng.random::<f64>();
        if x > a && x < b {
            return x;
        }
    }
}

fn crossed_pair<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> Estimate {
    loop {
        let a = rng.random_range(lo..hi);
        let b = rng.random_range(lo..hi);
        if a != b {
            return Estimate::new(a.max(b), a.min(b));
        }
    }
}

/// Pointwise dominance for the location squared-error loss over random tuples.
pub fn location_dominance_suite(variant: DominanceVariant, tuples: u64, seed: u64) -> Result<SuiteOutcome> {
    let name = match variant {
        DominanceVariant::Interior => "location dominance, interior alpha",
        DominanceVariant::Edge => "location dominance, edge alpha",
        DominanceVariant::Ordered => "location dominance, ordered alphas",
    };
    let mut out = SuiteOutcome::new(name);
    let mut rng = RandomStream::new(seed);
    for i in 0..tuples {
        let w = weights(&mut rng);
        let loss = LossSpec::squared(FamilyKind::Location, w);
        let t1 = rng.random_range(-10.0..10.0);
        let gap = match variant {
            DominanceVariant::Edge => open_uniform(&mut rng, 0.0, 10.0),
            // Every tenth tuple sits on the boundary θ1 = θ2.
            _ if i % 10 == 0 => 0.0,
            _ => rng.random_range(0.0..10.0),
        };
        let theta = ParamPoint::location(t1, t1 + gap)?;
        let base = crossed_pair(&mut rng, -15.0, 15.0);
        let edge = w.dominance_edge();
        match variant {
            DominanceVariant::Interior | DominanceVariant::Edge => {
                let alpha = if variant == DominanceVariant::Edge && i % 4 == 0 {
                    edge
                } else {
                    open_uniform(&mut rng, edge, 1.0)
                };
                let r = dominance_pointwise(&loss, &theta, base, alpha)?;
                out.record(r.dominated, || {
                    format!("θ=({t1}, {}), δ=({}, {}), p=({}, {}), α={alpha}", t1 + gap, base.d1, base.d2, w.p1(), w.p2())
                });
            }
            DominanceVariant::Ordered => {
                let a0 = w.alpha0();
                let x = if i % 10 == 1 { a0 } else { rng.random_range(a0..a0 + 5.0) };
                let y = rng.random_range(a0..a0 + 5.0);
                if x == y {
                    continue;
                }
                let (a1, a2) = (x.min(y), x.max(y));
                let l1 = loss.loss(&theta, &mix_general(base, w, a1))?;
                let l2 = loss.loss(&theta, &mix_general(base, w, a2))?;
                out.record(l1 < l2, || {
                    format!("θ=({t1}, {}), δ=({}, {}), α1={a1}, α2={a2}", t1 + gap, base.d1, base.d2)
                });
            }
        }
    }
    Ok(out)
}

/// Pointwise dominance for scale losses with `d1 > d2 > 0` and `0 < θ1 ≤ θ2`.
pub fn scale_dominance_suite(form: ScaleLossForm, tuples: u64, seed: u64) -> Result<SuiteOutcome> {
    let name = match form {
        ScaleLossForm::Absolute => "scale dominance, absolute squared loss",
        ScaleLossForm::Relative => "scale dominance, relative squared loss",
    };
    let mut out = SuiteOutcome::new(name);
    let mut rng = RandomStream::new(seed);
    for i in 0..tuples {
        let w = weights(&mut rng);
        let loss = match form {
            ScaleLossForm::Absolute => LossSpec::squared(FamilyKind::Scale, w),
            ScaleLossForm::Relative => LossSpec::scale_relative_squared(w),
        };
        let t1 = 10f64.powf(rng.random_range(-1.0..1.0));
        let ratio = if i % 10 == 0 { 1.0 } else { 10f64.powf(rng.random_range(0.0..2.0)) };
        let theta = ParamPoint::scale(t1, t1 * ratio)?;
        let base = loop {
            let c = crossed_pair(&mut rng, 0.0, 20.0);
            if c.d2 > 0.0 {
                break c;
            }
        };
        let alpha = open_uniform(&mut rng, w.dominance_edge(), 1.0);
        let r = dominance_pointwise(&loss, &theta, base, alpha)?;
        out.record(r.dominated, || {
            format!(
                "θ=({t1}, {}), δ=({}, {}), p=({}, {}), α={alpha}, losses {} -> {}",
                t1 * ratio,
                base.d1,
                base.d2,
                w.p1(),
                w.p2(),
                r.loss_base,
                r.loss_mixed
            )
        });
    }
    Ok(out)
}

/// Ordering after mixing: ordered output for `α ≤ p1/(p1+p2)`, crossed output kept
/// crossed for larger α.
pub fn ordering_suite(tuples: u64, seed: u64) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("mixing order invariants");
    let mut rng = RandomStream::new(seed);
    for i in 0..tuples {
        let w = weights(&mut rng);
        let a0 = w.alpha0();
        let crossed = crossed_pair(&mut rng, -20.0, 20.0);
        let below = if i % 10 == 0 { a0 } else { a0 - 10f64.powf(rng.random_range(-6.0..1.5)) };
        let m = mix_general(crossed, w, below);
        // At α = p1/(p1+p2) both outputs coincide exactly; allow for rounding there.
        let slack = 1e-12 * (crossed.d1.abs() + crossed.d2.abs());
        out.record(m.d1 <= m.d2 + slack, || format!("α={below} gave ({}, {})", m.d1, m.d2));
        let above = a0 + 10f64.powf(rng.random_range(-6.0..1.5));
        let m = mix_general(crossed, w, above);
        out.record(m.d1 > m.d2, || format!("α={above} gave ({}, {})", m.d1, m.d2));
    }
    out
}

/// `p1 out1 + p2 out2 = p1 d1 + p2 d2` up to rounding.
pub fn weighted_sum_suite(tuples: u64, seed: u64) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("weighted sum preservation");
    let mut rng = RandomStream::new(seed);
    for _ in 0..tuples {
        let w = weights(&mut rng);
        let base = Estimate::new(rng.random_range(-20.0..20.0), rng.random_range(-20.0..20.0));
        let alpha = rng.random_range(-10.0..10.0);
        let m = mix_general(base, w, alpha);
        let before = w.p1() * base.d1 + w.p2() * base.d2;
        let after = w.p1() * m.d1 + w.p2() * m.d2;
        let scale = (w.p1() + w.p2()) * (base.d1.abs() + base.d2.abs()) * (1.0 + alpha.abs());
        out.record((before - after).abs() <= 1e-13 * scale.max(1.0), || {
            format!("{before} vs {after}")
        });
    }
    out
}

/// Mixing with `alpha` must return every base pair unchanged. Holds only for `alpha = 1`.
pub fn identity_suite(alpha: f64, tuples: u64, seed: u64) -> SuiteOutcome {
    let mut out = SuiteOutcome::new(format!("identity at alpha = {alpha}"));
    let mut rng = RandomStream::new(seed);
    for _ in 0..tuples {
        let w = weights(&mut rng);
        let base = Estimate::new(rng.random_range(-20.0..20.0), rng.random_range(-20.0..20.0));
        let m = mix_general(base, w, alpha);
        out.record(m == base, || format!("({}, {}) -> ({}, {})", base.d1, base.d2, m.d1, m.d2));
    }
    out
}

/// Log-concavity of `f_Z` on its truncated support (location families only).
pub fn log_concavity_suite(model: &ModelSpec, grid: usize) -> Result<Option<SuiteOutcome>> {
    let Some(support) = model.fz_truncated_support() else {
        return Ok(None);
    };
    let mut out = SuiteOutcome::new(format!("log-concavity of f_Z, {}", model.name()));
    let ok = log_concavity_check(|z| model.density_fz(z), support, grid)?;
    out.record(ok, || format!("violation on ({}, {})", support.0, support.1));
    Ok(Some(out))
}

/// λ pairs used by the ordering checks of `S_λ`.
pub fn default_order_pairs(kind: FamilyKind) -> [(f64, f64); 2] {
    match kind {
        FamilyKind::Location => [(0.0, 1.0), (1.0, 5.0)],
        FamilyKind::Scale => [(1.0, 2.0), (2.0, 5.0)],
    }
}

/// `S_a ≤lr S_b` and `S_a ≤st S_b` on a 200-point grid for each λ pair `(a, b)`.
pub fn s_lambda_order_suite(model: &ModelSpec, weights: WeightPair) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new(format!("S_lambda orders, {}", model.name()));
    for (la, lb) in default_order_pairs(model.kind()) {
        let a = s_lambda_density(model, weights, la)?;
        let b = s_lambda_density(model, weights, lb)?;
        let lo = a.support().0.min(b.support().0);
        let hi = a.support().1.max(b.support().1);
        let grid: Vec<f64> = (1..200).map(|i| lo + (hi - lo) * i as f64 / 200.0).collect();
        out.record(lr_order_holds(&a, &b, &grid), || format!("lr order fails for λ = ({la}, {lb})"));
        let st = st_order_holds(&a, &b, &grid[..].iter().step_by(10).copied().collect::<Vec<_>>(), 1e-8)?;
        out.record(st, || format!("st order fails for λ = ({la}, {lb})"));
    }
    Ok(out)
}

/// Default curve grids: `0, 0.25, …, 10` (location) and `1, 1.25, …, 10` (scale).
pub fn default_curve_grid(kind: FamilyKind) -> Vec<f64> {
    match kind {
        FamilyKind::Location => (0..=40).map(|i| 0.25 * i as f64).collect(),
        FamilyKind::Scale => (0..=36).map(|i| 1.0 + 0.25 * i as f64).collect(),
    }
}

/// The coefficient curve does not increase along the default grid, beyond the
/// quadrature error of neighbouring points.
pub fn curve_monotonicity_suite(model: &ModelSpec, weights: WeightPair) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new(format!("alpha curve monotonicity, {}", model.name()));
    let pts = alpha_curve(model, weights, &default_curve_grid(model.kind()))?;
    for w in pts.windows(2) {
        let tol = w[0].quad_error + w[1].quad_error + 1e-12 * w[0].alpha.abs().max(1.0);
        out.record(w[1].alpha <= w[0].alpha + tol, || {
            format!("α({}) = {} > α({}) = {}", w[1].lambda, w[1].alpha, w[0].lambda, w[0].alpha)
        });
    }
    Ok(out)
}

/// Grid check of the monotonicity conditions behind the scale curve.
pub fn scale_condition_suite(model: &ModelSpec) -> Result<Option<SuiteOutcome>> {
    if model.kind() != FamilyKind::Scale {
        return Ok(None);
    }
    let mut out = SuiteOutcome::new(format!("scale curve conditions, {}", model.name()));
    let theta: Vec<f64> = (1..20).map(|i| i as f64 / 20.0).collect();
    let z: Vec<f64> = (1..50).map(|i| i as f64 / 50.0).collect();
    let ok = lemma51_condition_check(model, &theta, &z)?;
    out.record(ok, || "monotonicity conditions violated on the grid".into());
    Ok(Some(out))
}

/// Options for [`algebraic_suites`].
#[derive(Debug, Clone, Copy)]
pub struct SuiteOptions {
    pub tuples: u64,
    pub seed: u64,
    /// Coefficient expected to act as the identity.
    pub identity_alpha: f64,
    /// Also run the scale dominance suite under the relative loss.
    pub scale_relative: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            tuples: 100_000,
            seed: 20_240_601,
            identity_alpha: 1.0,
            scale_relative: false,
        }
    }
}

/// Model-free suites: dominance, ordering, identity and weighted-sum checks.
pub fn algebraic_suites(opts: &SuiteOptions) -> Result<Vec<SuiteOutcome>> {
    let s = opts.seed;
    let n = opts.tuples;
    let mut v = vec![
        location_dominance_suite(DominanceVariant::Interior, n, s)?,
        location_dominance_suite(DominanceVariant::Edge, n, s.wrapping_add(1))?,
        location_dominance_suite(DominanceVariant::Ordered, n, s.wrapping_add(2))?,
        scale_dominance_suite(ScaleLossForm::Absolute, n, s.wrapping_add(3))?,
    ];
    if opts.scale_relative {
        v.push(scale_dominance_suite(ScaleLossForm::Relative, n, s.wrapping_add(4))?);
    }
    v.push(ordering_suite(n, s.wrapping_add(5)));
    v.push(weighted_sum_suite(n, s.wrapping_add(6)));
    v.push(identity_suite(opts.identity_alpha, n, s.wrapping_add(7)));
    Ok(v)
}

/// Structural suites for one model.
pub fn model_suites(model: &ModelSpec, weights: WeightPair) -> Result<Vec<SuiteOutcome>> {
    let mut v = Vec::new();
    if let Some(o) = log_concavity_suite(model, 120)? {
        v.push(o);
    }
    if let Some(o) = scale_condition_suite(model)? {
        v.push(o);
    }
    v.push(s_lambda_order_suite(model, weights)?);
    v.push(curve_monotonicity_suite(model, weights)?);
    Ok(v)
}
