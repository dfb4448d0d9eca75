//! Independent Monte Carlo oracles shared by the integration tests.
#![allow(dead_code)]

use ire_core::stats::ratio_of_means;
use ire_core::{FamilyKind, ModelSpec, ParamPoint, RandomStream, WeightPair};

/// Standardized draws `(Z1, Z2)`: `Xi − θi` at `θ = (0, 0)` or `Xi / θi` at `θ = (1, 1)`.
pub fn standardized_draws(model: &ModelSpec, n: usize, seed: u64) -> Vec<(f64, f64)> {
    let params = match model.kind() {
        FamilyKind::Location => ParamPoint::location(0.0, 0.0).unwrap(),
        FamilyKind::Scale => ParamPoint::scale(1.0, 1.0).unwrap(),
    };
    let mut rng = RandomStream::new(seed);
    (0..n)
        .map(|_| {
            let o = model.sample(&params, &mut rng).unwrap();
            (o.x1, o.x2)
        })
        .collect()
}

#[derive(Debug, Clone, Copy)]
pub struct OracleValue {
    pub alpha: f64,
    pub std_error: f64,
    /// Draws on which the indicator of the expectations was active.
    pub events: usize,
}

/// Ratio-of-expectations estimate of the mixing curve at `λ`, computed directly
/// from simulated `(Z1, Z2)` without any density or quadrature.
pub fn alpha_oracle(model: &ModelSpec, weights: WeightPair, lambda: f64, draws: &[(f64, f64)]) -> OracleValue {
    let (c1, c2) = model.equivariant_constants();
    let a0 = weights.alpha0();
    let mut num = Vec::with_capacity(draws.len());
    let mut den = Vec::with_capacity(draws.len());
    let mut events = 0;
    match model.kind() {
        FamilyKind::Location => {
            for &(z1, z2) in draws {
                // Y has density f_Z(y + c − λ).
                let y = (z2 - z1) - (c2 - c1) + lambda;
                if y < 0.0 {
                    events += 1;
                    num.push(y);
                    den.push(y * y);
                } else {
                    num.push(0.0);
                    den.push(0.0);
                }
            }
            let (r, se) = ratio_of_means(&num, &den);
            OracleValue {
                alpha: a0 + (1.0 - a0) * lambda * r,
                std_error: (1.0 - a0) * lambda * se,
                events,
            }
        }
        FamilyKind::Scale => {
            let kappa = c1 / (c2 * lambda);
            for &(z1, z2) in draws {
                let z = z2 / z1;
                if z < kappa {
                    events += 1;
                    let g = c1 - c2 * lambda * z;
                    num.push(z1 * g);
                    den.push(z1 * z1 * g * g);
                } else {
                    num.push(0.0);
                    den.push(0.0);
                }
            }
            let (r, se) = ratio_of_means(&num, &den);
            OracleValue {
                alpha: a0 - (1.0 - a0) * (lambda - 1.0) * r,
                std_error: (1.0 - a0) * (lambda - 1.0) * se,
                events,
            }
        }
    }
}

/// Representative models of each family.
pub fn example_models() -> Vec<ModelSpec> {
    vec![
        ModelSpec::normal(1.0, 1.0, 0.0).unwrap(),
        ModelSpec::normal(2.0, 0.5, -0.4).unwrap(),
        ModelSpec::exponential_location(1.0, 2.0).unwrap(),
        ModelSpec::exponential_location(1.0, 1.0).unwrap(),
        ModelSpec::gamma_scale(1.0, 1.0).unwrap(),
        ModelSpec::gamma_scale(2.0, 3.0).unwrap(),
        ModelSpec::power_scale(1.0, 2.0).unwrap(),
        ModelSpec::power_scale(3.0, 1.5).unwrap(),
    ]
}
