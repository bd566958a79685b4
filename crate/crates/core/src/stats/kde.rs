//! Gaussian kernel density estimation with Silverman's rule-of-thumb bandwidth.

use std::f64::consts::PI;

use super::order::quantile;
use super::summary::summarize;
use super::{ScoreSample, StatsError};

/// Kernels are ignored beyond this many bandwidths when evaluating on a grid.
/// `φ(12) ≈ 5·10⁻³²`, far below any pdf floor used for KL.
pub const KERNEL_CUTOFF: f64 = 12.0;

// keeps 1/(n·h) finite for means near the subnormal range
const MIN_BANDWIDTH: f64 = 1e-150;
const SUPPORT_HALO: f64 = 4.0;
const MIN_MASS_GRID: usize = 2048;
const MAX_MASS_GRID: usize = 1 << 20;

fn std_normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * PI).sqrt()
}

/// `0.9 · min(σ̂, IQR/1.34) · n^(−1/5)`.
///
/// A zero IQR falls back to `σ̂` alone. If the spread is zero as well the
/// bandwidth is floored at `10⁻⁶ · |mean|` (or `10⁻⁶` for a zero mean).
pub fn silverman_bandwidth(sample: &ScoreSample) -> f64 {
    let stats = summarize(sample, &[]).expect("no quantile levels requested");
    let n = sample.len() as f64;
    let iqr = quantile(sample, 0.75).unwrap() - quantile(sample, 0.25).unwrap();
    let spread = if iqr > 0.0 {
        stats.std.min(iqr / 1.34)
    } else {
        stats.std
    };
    let h = 0.9 * spread * n.powf(-0.2);
    if h > 0.0 && h.is_finite() {
        h
    } else {
        let scale = if stats.mean != 0.0 { stats.mean.abs() } else { 1.0 };
        (1e-6 * scale).max(MIN_BANDWIDTH)
    }
}

/// Gaussian-kernel density over a set of score centers.
#[derive(Debug, Clone, PartialEq)]
pub struct Density {
    centers: Vec<f64>,
    bandwidth: f64,
}

impl Density {
    /// Fit with [`silverman_bandwidth`].
    pub fn fit(sample: &ScoreSample) -> Self {
        Self {
            centers: sample.sorted().to_vec(),
            bandwidth: silverman_bandwidth(sample),
        }
    }

    pub fn with_bandwidth(sample: &ScoreSample, bandwidth: f64) -> Result<Self, StatsError> {
        if !(bandwidth > 0.0 && bandwidth.is_finite()) {
            return Err(StatsError::Bandwidth(bandwidth));
        }
        Ok(Self {
            centers: sample.sorted().to_vec(),
            bandwidth,
        })
    }

    /// Centers in ascending order.
    pub fn centers(&self) -> &[f64] {
        &self.centers
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    /// `[min − 4h, max + 4h]`.
    pub fn support(&self) -> (f64, f64) {
        let h = self.bandwidth;
        (
            self.centers[0] - SUPPORT_HALO * h,
            self.centers[self.centers.len() - 1] + SUPPORT_HALO * h,
        )
    }

    /// Exact density: `(1/(n·h)) Σ φ((x − cᵢ)/h)` over every center.
    pub fn pdf(&self, x: f64) -> f64 {
        let h = self.bandwidth;
        let sum: f64 = self.centers.iter().map(|c| std_normal_pdf((x - c) / h)).sum();
        sum / (self.centers.len() as f64 * h)
    }

    /// Density at ascending `xs`, summing only centers within
    /// [`KERNEL_CUTOFF`] bandwidths of each point.
    pub fn pdf_on_grid(&self, xs: &[f64]) -> Vec<f64> {
        debug_assert!(xs.windows(2).all(|w| w[0] <= w[1]));
        let h = self.bandwidth;
        let reach = KERNEL_CUTOFF * h;
        let norm = 1.0 / (self.centers.len() as f64 * h);
        let (mut lo, mut hi) = (0usize, 0usize);
        xs.iter()
            .map(|&x| {
                while lo < self.centers.len() && self.centers[lo] < x - reach {
                    lo += 1;
                }
                hi = hi.max(lo);
                while hi < self.centers.len() && self.centers[hi] <= x + reach {
                    hi += 1;
                }
                norm * self.centers[lo..hi]
                    .iter()
                    .map(|c| std_normal_pdf((x - c) / h))
                    .sum::<f64>()
            })
            .collect()
    }

    /// Trapezoid integral of the density over its support on a uniform grid
    /// fine enough that the spacing is at most `h/2`.
    pub fn total_mass(&self) -> f64 {
        let (lo, hi) = self.support();
        let needed = ((hi - lo) / (0.5 * self.bandwidth)).ceil() as usize + 1;
        let n = needed.clamp(MIN_MASS_GRID, MAX_MASS_GRID);
        let xs = uniform_grid(lo, hi, n);
        trapezoid(&xs, &self.pdf_on_grid(&xs))
    }
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub(crate) fn uniform_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { hi } else { lo + step * i as f64 })
        .collect()
}

pub(crate) fn trapezoid(xs: &[f64], ys: &[f64]) -> f64 {
    xs.windows(2)
        .zip(ys.windows(2))
        .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
        .sum()
}
