use ire_core::risk::{write_risk_csv, RISK_CSV_HEADER};
use ire_core::*;

fn within(r: &RiskEstimate, target: f64) -> bool {
    (r.mean - target).abs() < 4.0 * r.std_error
}

#[test]
fn loss_examples() {
    let loc = LossSpec::squared(FamilyKind::Location, WeightPair::equal());
    let origin = ParamPoint::location(0.0, 0.0).unwrap();
    assert_eq!(loc.loss(&origin, &Estimate::new(3.0, 1.0)).unwrap(), 10.0);
    let w21 = LossSpec::squared(FamilyKind::Location, WeightPair::new(2.0, 1.0).unwrap());
    assert_eq!(w21.loss(&ParamPoint::location(1.0, 2.0).unwrap(), &Estimate::new(1.0, 2.0)).unwrap(), 0.0);
    let sc = LossSpec::squared(FamilyKind::Scale, WeightPair::equal());
    assert_eq!(sc.loss(&ParamPoint::scale(1.0, 2.0).unwrap(), &Estimate::new(2.0, 1.0)).unwrap(), 2.0);
    assert!(matches!(sc.loss(&origin, &Estimate::new(1.0, 1.0)), Err(Error::Precondition(_))));
}

#[test]
fn dominance_examples() {
    let loc = LossSpec::squared(FamilyKind::Location, WeightPair::equal());
    let origin = ParamPoint::location(0.0, 0.0).unwrap();
    let d = |a| dominance_pointwise(&loc, &origin, Estimate::new(3.0, 1.0), a).unwrap();
    let o = d(0.5);
    assert_eq!((o.loss_base, o.loss_mixed, o.dominated), (10.0, 8.0, true));
    let o = d(0.9);
    assert!((o.loss_mixed - 9.28).abs() < 1e-12 && o.dominated);
    let o = d(1.0);
    assert_eq!((o.loss_base, o.loss_mixed, o.dominated), (10.0, 10.0, false));
    assert!(dominance_pointwise(&loc, &origin, Estimate::new(1.0, 3.0), 0.5).is_err());
    let sc = LossSpec::squared(FamilyKind::Scale, WeightPair::equal());
    let p = ParamPoint::scale(1.0, 2.0).unwrap();
    assert!(dominance_pointwise(&sc, &p, Estimate::new(1.0, -1.0), 0.5).is_err());
}

#[test]
fn custom_penalties_are_validated() {
    let w = WeightPair::equal();
    assert!(LossSpec::with_penalty(FamilyKind::Location, w, |t: f64| t.abs()).is_ok());
    assert!(LossSpec::with_penalty(FamilyKind::Location, w, |t: f64| t.exp() - 1.0 - t).is_ok());
    assert!(matches!(
        LossSpec::with_penalty(FamilyKind::Location, w, |t: f64| t * t + 1.0),
        Err(Error::InvalidLoss(_))
    ));
    assert!(LossSpec::with_penalty(FamilyKind::Location, w, |t: f64| t).is_err());
    assert!(LossSpec::with_penalty(FamilyKind::Location, w, |t: f64| t.abs().sqrt()).is_err());
    assert!(LossSpec::with_penalty(FamilyKind::Scale, w, |r: f64| (r - 1.0).powi(2)).is_ok());
    assert!(LossSpec::with_penalty(FamilyKind::Scale, w, |r: f64| r * r).is_err());
    let pow = LossSpec::with_penalty(FamilyKind::Location, w, |t: f64| t.abs().powf(1.5)).unwrap();
    let o = dominance_pointwise(&pow, &ParamPoint::location(0.0, 0.5).unwrap(), Estimate::new(3.0, 1.0), 0.6).unwrap();
    assert!(o.dominated);
    // |t| is convex but not strictly so: here the mix only ties.
    let abs = LossSpec::with_penalty(FamilyKind::Location, w, |t: f64| t.abs()).unwrap();
    let o = dominance_pointwise(&abs, &ParamPoint::location(0.0, 0.5).unwrap(), Estimate::new(3.0, 1.0), 0.6).unwrap();
    assert!((o.loss_base - o.loss_mixed).abs() < 1e-12);
}

#[test]
fn closed_form_risks() {
    let n = 100_000;
    let normal = ModelSpec::normal(1.0, 1.0, 0.0).unwrap();
    let loc = LossSpec::squared(FamilyKind::Location, WeightPair::equal());
    let r = monte_carlo_risk(&normal, &ParamPoint::location(0.0, 0.0).unwrap(), EstimatorSpec::Blee, &loc, n, 1).unwrap();
    assert!(within(&r, 2.0), "{r:?}");

    let exp = ModelSpec::exponential_location(1.0, 2.0).unwrap();
    for (i, t) in [(0.0, 0.0), (-1.0, 3.0)].into_iter().enumerate() {
        let p = ParamPoint::location(t.0, t.1).unwrap();
        let r = monte_carlo_risk(&exp, &p, EstimatorSpec::Blee, &loc, n, 2 + i as u64).unwrap();
        assert!(within(&r, 5.0), "{r:?}");
    }

    let g = ModelSpec::gamma_scale(2.0, 3.0).unwrap();
    let sc = LossSpec::squared(FamilyKind::Scale, WeightPair::equal());
    let r = monte_carlo_risk(&g, &ParamPoint::scale(1.0, 1.0).unwrap(), EstimatorSpec::Bsee, &sc, n, 4).unwrap();
    assert!(within(&r, 1.0 / 3.0 + 0.25), "{r:?}");
}

#[test]
fn blee_risk_is_flat_in_lambda() {
    let normal = ModelSpec::normal(1.0, 1.0, 0.0).unwrap();
    let loc = LossSpec::squared(FamilyKind::Location, WeightPair::equal());
    let rows = risk_sweep(&normal, &loc, &[EstimatorSpec::Blee], &[0.0, 1.0, 2.0], 100_000, 8).unwrap();
    assert_eq!(rows.len(), 3);
    for r in &rows {
        assert!(within(r, 2.0));
    }
    // Same seed at every λ and a shift-equivariant estimator: identical risks.
    assert!(rows.windows(2).all(|w| (w[0].mean - w[1].mean).abs() < 1e-9));
}

#[test]
fn mixing_helps_at_the_boundary() {
    let normal = ModelSpec::normal(1.0, 1.0, 0.0).unwrap();
    let loc = LossSpec::squared(FamilyKind::Location, WeightPair::equal());
    let rows = risk_sweep(&normal, &loc, &[EstimatorSpec::Blee, EstimatorSpec::Mix(0.5)], &[0.0], 100_000, 9).unwrap();
    assert!(rows[1].mean < rows[0].mean - 2.0 * rows[0].std_error);

    let exp = ModelSpec::exponential_location(1.0, 1.0).unwrap();
    let grid: Vec<f64> = (0..=20).map(|i| 0.25 * i as f64).collect();
    let rows = risk_sweep(&exp, &loc, &[EstimatorSpec::Mix(1.0), EstimatorSpec::Mix(0.75)], &grid, 50_000, 10).unwrap();
    for pair in rows.chunks(2) {
        assert!(pair[1].mean <= pair[0].mean + 2.0 * pair[0].std_error, "{pair:?}");
    }
}

#[test]
fn crn_results_do_not_depend_on_thread_count() {
    let g = ModelSpec::gamma_scale(1.0, 2.0).unwrap();
    let sc = LossSpec::squared(FamilyKind::Scale, WeightPair::equal());
    let ests = [EstimatorSpec::Bsee, EstimatorSpec::Mix(0.5), EstimatorSpec::Rmle];
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| risk_sweep(&g, &sc, &ests, &[1.0, 2.5], 20_001, 77).unwrap())
    };
    let one = run(1);
    let four = run(4);
    for (a, b) in one.iter().zip(&four) {
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        assert_eq!(a.std_error.to_bits(), b.std_error.to_bits());
    }
    // Single-estimator calls see the same observations as the joint call.
    let p = ParamPoint::scale(1.0, 2.5).unwrap();
    let solo = monte_carlo_risk(&g, &p, EstimatorSpec::Mix(0.5), &sc, 20_001, 77).unwrap();
    assert_eq!(solo.mean.to_bits(), one[4].mean.to_bits());
}

#[test]
fn inapplicable_estimators_fail_early() {
    let p = ModelSpec::power_scale(1.0, 2.0).unwrap();
    let sc = LossSpec::squared(FamilyKind::Scale, WeightPair::equal());
    let params = ParamPoint::scale(1.0, 2.0).unwrap();
    assert!(monte_carlo_risk(&p, &params, EstimatorSpec::Rmle, &sc, 100, 1).is_err());
    assert!(monte_carlo_risk(&p, &params, EstimatorSpec::Blee, &sc, 100, 1).is_err());
    assert!(monte_carlo_risk(&p, &params, EstimatorSpec::Bsee, &sc, 1, 1).is_err());
    assert!(risk_sweep(&p, &sc, &[EstimatorSpec::Bsee], &[0.5], 100, 1).is_err());
}

#[test]
fn csv_output_is_reproducible() {
    let m = ModelSpec::exponential_location(1.0, 2.0).unwrap();
    let loc = LossSpec::squared(FamilyKind::Location, WeightPair::equal());
    let write = || {
        let rows = risk_sweep(&m, &loc, &[EstimatorSpec::Blee, EstimatorSpec::Rmle], &[0.0, 0.5], 5_000, 3).unwrap();
        let mut buf = Vec::new();
        write_risk_csv(&mut buf, &m, &rows).unwrap();
        String::from_utf8(buf).unwrap()
    };
    let a = write();
    assert_eq!(a, write());
    let mut lines = a.lines();
    assert_eq!(lines.next().unwrap(), RISK_CSV_HEADER.join(","));
    assert_eq!(a.lines().count(), 5);
    assert!(a.lines().nth(2).unwrap().starts_with("exp_loc,0,rmle,"));
}
