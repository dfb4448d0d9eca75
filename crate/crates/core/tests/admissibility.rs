mod common;

use approx::assert_relative_eq;
use common::{alpha_oracle, example_models, standardized_draws};
use ire_core::admissibility::{
    alpha_infinity_probe_with, alpha_location_with, alpha_scale_with, scale_condition_report_with,
    lr_order_holds, s_lambda_scale_with, st_order_holds, LimitStatus, DEFAULT_PROBE_SCHEDULE,
};
use ire_core::models::{LocationReduction, ScaleReduction};
use ire_core::suites::default_curve_grid;
use ire_core::*;

#[test]
fn curve_matches_monte_carlo_oracle() {
    let w = WeightPair::new(1.0, 2.0).unwrap();
    for (k, model) in example_models().into_iter().enumerate() {
        let draws = standardized_draws(&model, 400_000, 100 + k as u64);
        let grid: &[f64] = match model.kind() {
            FamilyKind::Location => &[0.5, 1.0, 2.0],
            FamilyKind::Scale => &[1.25, 2.0, 3.0],
        };
        for &l in grid {
            let p = alpha_point(&model, w, l).unwrap();
            let o = alpha_oracle(&model, w, l, &draws);
            assert!(o.events >= 1000, "{model} λ={l}: {} events", o.events);
            assert!(
                (p.alpha - o.alpha).abs() < 4.0 * o.std_error,
                "{model} λ={l}: quadrature {} vs oracle {} ± {}",
                p.alpha,
                o.alpha,
                o.std_error
            );
            assert!(p.quad_error < 1e-6);
        }
    }
}

#[test]
fn curves_decrease_on_default_grids() {
    for model in example_models() {
        let w = WeightPair::equal();
        let pts = alpha_curve(&model, w, &default_curve_grid(model.kind())).unwrap();
        assert_eq!(pts[0].alpha, 0.5);
        for p in pts.windows(2) {
            assert!(
                p[1].alpha <= p[0].alpha + p[0].quad_error + p[1].quad_error,
                "{model}: {:?} then {:?}",
                p[0],
                p[1]
            );
        }
    }
}

#[test]
fn curve_ordering_examples() {
    let n = ModelSpec::normal(1.0, 1.0, 0.0).unwrap();
    let g = ModelSpec::gamma_scale(1.0, 1.0).unwrap();
    let w = WeightPair::equal();
    let a = |m: &ModelSpec, l: f64| alpha_point(m, w, l).unwrap().alpha;
    assert!(a(&n, 1.0) > a(&n, 2.0) && a(&n, 2.0) > a(&n, 5.0));
    assert!(a(&g, 1.0) > a(&g, 2.0) && a(&g, 2.0) > a(&g, 5.0));
    assert_eq!(alpha_location(&n, w, 0.0).unwrap().alpha, 0.5);
    assert_eq!(alpha_location(&n, WeightPair::new(3.0, 1.0).unwrap(), 0.0).unwrap().alpha, 0.75);
    assert_eq!(alpha_scale(&g, w, 1.0).unwrap().alpha, 0.5);
    assert_eq!(alpha_star_location(&n, w, 0.0).unwrap().0, 0.0);
}

#[test]
fn s_lambda_densities_are_normalized() {
    let w = WeightPair::equal();
    for model in example_models() {
        let lambdas: &[f64] = match model.kind() {
            FamilyKind::Location => &[0.0, 1.0, 5.0],
            FamilyKind::Scale => &[1.0, 2.0, 5.0],
        };
        for &l in lambdas {
            let s = s_lambda_density(&model, w, l).unwrap();
            assert!((s.mass().unwrap() - 1.0).abs() < 1e-6, "{model} λ={l}");
        }
    }
}

#[test]
fn s_lambda_orders_for_normal() {
    let n = ModelSpec::normal(1.0, 1.0, 0.0).unwrap();
    let w = WeightPair::equal();
    let s0 = s_lambda_density(&n, w, 0.0).unwrap();
    let s1 = s_lambda_density(&n, w, 1.0).unwrap();
    let lo = s0.support().0.min(s1.support().0);
    let grid: Vec<f64> = (1..300).map(|i| lo * (1.0 - i as f64 / 300.0)).collect();
    assert!(lr_order_holds(&s0, &s1, &grid));
    assert!(!lr_order_holds(&s1, &s0, &grid));
    assert!(st_order_holds(&s0, &s1, &grid, 1e-9).unwrap());
    assert!(!st_order_holds(&s1, &s0, &grid, 1e-9).unwrap());
}

#[test]
fn scale_monotonicity_conditions_hold_for_examples() {
    let theta: Vec<f64> = (1..20).map(|i| i as f64 / 20.0).collect();
    let z: Vec<f64> = (1..50).map(|i| i as f64 / 50.0).collect();
    for m in [
        ModelSpec::gamma_scale(2.0, 3.0).unwrap(),
        ModelSpec::gamma_scale(0.5, 0.5).unwrap(),
        ModelSpec::power_scale(1.0, 2.0).unwrap(),
        ModelSpec::power_scale(3.0, 1.5).unwrap(),
    ] {
        assert!(lemma51_condition_check(&m, &theta, &z).unwrap(), "{m}");
    }
}

/// Gamma-ratio law with a narrow bump mixed in; its `h2 f` ratio is not monotone.
#[derive(Clone)]
struct BumpyScale;

impl ScaleReduction for BumpyScale {
    fn constants(&self) -> (f64, f64) {
        (0.5, 0.5)
    }

    fn density(&self, z: f64) -> f64 {
        let base = 1.0 / ((1.0 + z) * (1.0 + z));
        let bump = (-(z - 0.4) * (z - 0.4) / (2.0 * 0.02 * 0.02)).exp() / (0.02 * (2.0 * std::f64::consts::PI).sqrt());
        0.7 * base + 0.3 * bump
    }

    fn moments(&self, z: f64) -> (f64, f64) {
        (2.0 / (1.0 + z), 6.0 / ((1.0 + z) * (1.0 + z)))
    }
}

#[test]
fn scale_monotonicity_conditions_reject_bumpy_fixture() {
    let theta: Vec<f64> = (1..20).map(|i| i as f64 / 20.0).collect();
    let z: Vec<f64> = (1..50).map(|i| i as f64 / 50.0).collect();
    let lambdas: Vec<f64> = (0..=36).map(|i| 1.0 + 0.25 * i as f64).collect();
    let report = scale_condition_report_with(&BumpyScale, &theta, &z, &lambdas).unwrap();
    // Brute-force oracle: locate a θ where the ratio both rises and falls.
    let g = |x: f64| BumpyScale.moments(x).1 * BumpyScale.density(x);
    let mut found = false;
    for &th in &theta {
        let r: Vec<f64> = z.iter().map(|&t| g(th * t) / g(t)).collect();
        let ups = r.windows(2).any(|w| w[1] > w[0] * (1.0 + 1e-9));
        let downs = r.windows(2).any(|w| w[1] < w[0] * (1.0 - 1e-9));
        found |= ups && downs;
    }
    assert!(found);
    assert!(!report.ratio_increasing && !report.ratio_decreasing);
    assert!(!report.holds());
}

/// Scale law whose `k(t, λ)` decreases in λ and in t while the `h2 f` ratio
/// increases: the mirrored set of conditions, under which the curve rises.
#[derive(Clone)]
struct RisingScale;

impl ScaleReduction for RisingScale {
    fn constants(&self) -> (f64, f64) {
        (1.0, 1.0)
    }

    fn density(&self, z: f64) -> f64 {
        1.0 / ((1.0 + z) * (1.0 + z))
    }

    // Not a real moment pair: a negative h1 is what flips the sign of k.
    fn moments(&self, z: f64) -> (f64, f64) {
        (-(1.0 / (1.0 + z)), 1.0 / ((1.0 + z) * (1.0 + z)))
    }
}

#[test]
fn rising_fixture_gives_increasing_curve_and_upper_divergence() {
    let theta: Vec<f64> = (1..20).map(|i| i as f64 / 20.0).collect();
    let z: Vec<f64> = (1..50).map(|i| i as f64 / 50.0).collect();
    let lambdas: Vec<f64> = (0..=36).map(|i| 1.0 + 0.25 * i as f64).collect();
    let report = scale_condition_report_with(&RisingScale, &theta, &z, &lambdas).unwrap();
    assert!(report.ratio_increasing);
    assert!(report.k_decreasing_in_lambda && report.k_decreasing_in_t);
    assert!(report.increasing_case() && !report.decreasing_case());

    let w = WeightPair::equal();
    let pts: Vec<AlphaCurvePoint> = lambdas
        .iter()
        .map(|&l| alpha_scale_with(&RisingScale, w, l).unwrap())
        .collect();
    for p in pts.windows(2) {
        assert!(p[1].alpha >= p[0].alpha - 1e-12);
    }
    let probe = alpha_infinity_probe_with(|l| alpha_scale_with(&RisingScale, w, l), w, &DEFAULT_PROBE_SCHEDULE).unwrap();
    assert!(probe.diverges);
    assert_eq!(probe.lower, 0.5);
    assert_eq!(probe.upper, f64::INFINITY);
    assert_eq!(probe.to_string(), "[0.5, inf)");

    // Increasing curve means the S_λ laws are lr-ordered upwards as well.
    let a = s_lambda_scale_with(&RisingScale, 1.0).unwrap();
    let b = s_lambda_scale_with(&RisingScale, 3.0).unwrap();
    let grid: Vec<f64> = (1..100).map(|i| i as f64 / 100.0).collect();
    assert!(lr_order_holds(&a, &b, &grid));
}

#[test]
fn probes_declare_divergence() {
    for (model, w) in [
        (ModelSpec::normal(1.0, 1.0, 0.0).unwrap(), WeightPair::equal()),
        (ModelSpec::exponential_location(1.0, 2.0).unwrap(), WeightPair::equal()),
        (ModelSpec::gamma_scale(1.0, 1.0).unwrap(), WeightPair::new(2.0, 1.0).unwrap()),
        (ModelSpec::power_scale(1.0, 2.0).unwrap(), WeightPair::equal()),
    ] {
        let i = alpha_infinity_probe(&model, w, &DEFAULT_PROBE_SCHEDULE).unwrap();
        assert!(i.diverges, "{model}: {i:?}");
        assert_eq!(i.lower, f64::NEG_INFINITY);
        assert_relative_eq!(i.upper, w.alpha0());
        assert_eq!(i.probes.len(), 4);
    }
}

/// Location law that is normal but whose curve stays bounded on a short schedule.
#[derive(Clone)]
struct Flat;

impl LocationReduction for Flat {
    fn constants(&self) -> (f64, f64) {
        (0.0, 0.0)
    }
    fn ln_density(&self, z: f64) -> f64 {
        -0.5 * z * z
    }
    fn mode(&self) -> f64 {
        0.0
    }
    fn spread(&self) -> f64 {
        1.0
    }
}

#[test]
fn probe_reports_uncertified_and_inconclusive() {
    let w = WeightPair::equal();
    let i = alpha_infinity_probe_with(|l| alpha_location_with(&Flat, w, l), w, &[0.5, 1.0]).unwrap();
    assert_eq!(i.status, LimitStatus::Uncertified);
    assert!(!i.diverges && i.lower.is_finite() && i.warning.is_some());

    let failing = |l: f64| {
        if l > 50.0 {
            Err(Error::DegenerateModel("underflow".into()))
        } else {
            alpha_location_with(&Flat, w, l)
        }
    };
    let i = alpha_infinity_probe_with(failing, w, &DEFAULT_PROBE_SCHEDULE).unwrap();
    assert_eq!(i.status, LimitStatus::Inconclusive);
    assert!(!i.diverges);

    // A failure after the trend is established still counts as divergence.
    let late = |l: f64| {
        if l > 5e3 {
            Err(Error::DegenerateModel("underflow".into()))
        } else {
            alpha_location_with(&Flat, w, l)
        }
    };
    let i = alpha_infinity_probe_with(late, w, &DEFAULT_PROBE_SCHEDULE).unwrap();
    assert_eq!(i.status, LimitStatus::Diverges);
    assert_eq!(i.probes.len(), 3);
    assert!(i.warning.unwrap().contains("failed"));
}
