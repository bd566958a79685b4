//! Order statistics: the empirical CDF and its left-continuous inverse.

use super::{ScoreSample, StatsError};

/// 1-based rank `⌈q·n⌉`, snapping products that land within rounding noise
/// of an integer so that e.g. `0.3 · 10` selects the 3rd order statistic.
fn rank(q: f64, n: usize) -> usize {
    let x = q * n as f64;
    let nearest = x.round();
    let k = if (x - nearest).abs() <= 1e-9 * x.max(1.0) {
        nearest
    } else {
        x.ceil()
    };
    (k as usize).clamp(1, n)
}

/// Smallest observed score `s` with `empirical_cdf(s) >= q`.
///
/// `q` must lie in `(0, 1]`; `q = 1` returns the maximum.
pub fn quantile(sample: &ScoreSample, q: f64) -> Result<f64, StatsError> {
    if !(q > 0.0 && q <= 1.0) {
        return Err(StatsError::QuantileDomain(q));
    }
    Ok(sample.sorted()[rank(q, sample.len()) - 1])
}

/// Fraction of scores `<= x` (right-continuous step function).
pub fn empirical_cdf(sample: &ScoreSample, x: f64) -> f64 {
    let below = sample.sorted().partition_point(|&v| v <= x);
    below as f64 / sample.len() as f64
}

/// Performance profile: `(q, quantile(q))` for `q = i / n_points`,
/// `i = 1..=n_points`.
pub fn inverse_cdf_curve(sample: &ScoreSample, n_points: usize) -> Result<Vec<(f64, f64)>, StatsError> {
    if n_points < 2 {
        return Err(StatsError::TooFewPoints { min: 2, got: n_points });
    }
    let n = sample.len();
    let sorted = sample.sorted();
    Ok((1..=n_points)
        .map(|i| {
            // exact integer ceil(i·n / n_points)
            let k = (i * n).div_ceil(n_points).clamp(1, n);
            (i as f64 / n_points as f64, sorted[k - 1])
        })
        .collect())
}
