//! Deterministic reductions over replication-indexed samples.

const PAIRWISE_BLOCK: usize = 64;

/// Pairwise (cascade) summation. The split points depend only on the slice
/// length, so the result is independent of how the terms were produced.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= PAIRWISE_BLOCK {
        xs.iter().sum()
    } else {
        let mid = xs.len() / 2;
        pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
    }
}

/// Sample mean and standard error of the mean (`sd / sqrt(n)`), two-pass.
pub fn mean_and_std_error(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = pairwise_sum(xs) / n as f64;
    if n < 2 {
        return (mean, f64::NAN);
    }
    let centered: Vec<f64> = xs.iter().map(|x| (x - mean) * (x - mean)).collect();
    let var = pairwise_sum(&centered) / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// Ratio-of-means estimate `mean(a) / mean(b)` with its delta-method standard error.
pub fn ratio_of_means(a: &[f64], b: &[f64]) -> (f64, f64) {
    assert_eq!(a.len(), b.len());
    let n = a.len() as f64;
    let ma = pairwise_sum(a) / n;
    let mb = pairwise_sum(b) / n;
    let r = ma / mb;
    let resid: Vec<f64> = a
        .iter()
        .zip(b)
        .map(|(x, y)| {
            let e = x - r * y;
            e * e
        })
        .collect();
    let var = pairwise_sum(&resid) / (n - 1.0);
    (r, (var / n).sqrt() / mb.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_exact_integer_sum() {
        let xs: Vec<f64> = (1..=10_000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&xs), 50_005_000.0);
    }

    #[test]
    fn pairwise_error_is_small_relative_to_abs_sum() {
        let xs: Vec<f64> = (0..1_000_000).map(|i| 0.1 + 1e-7 * (i % 13) as f64).collect();
        let exact: f64 = (0..1_000_000u64).map(|i| 1e-7 * (i % 13) as f64).sum::<f64>() + 100_000.0;
        let abs_sum: f64 = xs.iter().map(|x| x.abs()).sum();
        assert!((pairwise_sum(&xs) - exact).abs() < 1e-9 * abs_sum);
    }

    #[test]
    fn mean_and_se_small_case() {
        let (m, se) = mean_and_std_error(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        // sd = sqrt(5/3)
        assert!((se - (5.0f64 / 3.0).sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn ratio_of_proportional_samples_has_zero_error() {
        let a = [2.0, 4.0, 6.0];
        let b = [1.0, 2.0, 3.0];
        let (r, se) = ratio_of_means(&a, &b);
        assert_eq!(r, 2.0);
        assert_eq!(se, 0.0);
    }
}
