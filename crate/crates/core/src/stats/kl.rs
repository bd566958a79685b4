//! KL-divergence between two score samples via KDE and a trapezoid grid.

use std::fmt::Write as _;

use super::kde::{trapezoid, uniform_grid, Density};
use super::summary::{summarize, SummaryStats, DECILES};
use super::{ScoreSample, StatsError};

pub const DEFAULT_GRID_POINTS: usize = 2048;
pub const DEFAULT_PDF_FLOOR: f64 = 1e-12;
const MIN_GRID_POINTS: usize = 64;

/// One directional KL estimate with the inputs needed to reproduce it.
#[derive(Debug, Clone, PartialEq)]
pub struct KlEstimate {
    /// Raw trapezoid value; may dip slightly below zero.
    pub raw: f64,
    pub bandwidth_p: f64,
    pub bandwidth_q: f64,
    pub grid_points: usize,
}

impl KlEstimate {
    /// The reported value, clamped to `[0, ∞)`.
    pub fn value(&self) -> f64 {
        self.raw.max(0.0)
    }
}

/// `∫ p log(p/q) dx` between Silverman KDEs of the two samples.
///
/// The grid spans the union of both supports; `q` is clamped below at
/// `pdf_floor` so disjoint supports give a large finite value.
pub fn kl_divergence(
    p: &ScoreSample,
    q: &ScoreSample,
    grid_points: usize,
    pdf_floor: f64,
) -> Result<KlEstimate, StatsError> {
    if grid_points < MIN_GRID_POINTS {
        return Err(StatsError::TooFewPoints {
            min: MIN_GRID_POINTS,
            got: grid_points,
        });
    }
    if !(pdf_floor > 0.0 && pdf_floor.is_finite()) {
        return Err(StatsError::PdfFloor(pdf_floor));
    }
    let dp = Density::fit(p);
    let dq = Density::fit(q);
    Ok(KlEstimate {
        raw: kl_between(&dp, &dq, grid_points, pdf_floor),
        bandwidth_p: dp.bandwidth(),
        bandwidth_q: dq.bandwidth(),
        grid_points,
    })
}

fn kl_between(p: &Density, q: &Density, grid_points: usize, pdf_floor: f64) -> f64 {
    let (plo, phi) = p.support();
    let (qlo, qhi) = q.support();
    let xs = uniform_grid(plo.min(qlo), phi.max(qhi), grid_points);
    let pv = p.pdf_on_grid(&xs);
    let qv = q.pdf_on_grid(&xs);
    let integrand: Vec<f64> = pv
        .iter()
        .zip(&qv)
        .map(|(&pp, &qq)| {
            if pp > 0.0 {
                pp * (pp / qq.max(pdf_floor)).ln()
            } else {
                0.0
            }
        })
        .collect();
    trapezoid(&xs, &integrand)
}

/// Both summaries and both KL directions, with the settings used.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub summary_p: SummaryStats,
    pub summary_q: SummaryStats,
    pub kl_pq: f64,
    pub kl_qp: f64,
    pub kl_pq_raw: f64,
    pub kl_qp_raw: f64,
    pub bandwidth_p: f64,
    pub bandwidth_q: f64,
    pub grid_points: usize,
}

const CSV_FIELDS: [&str; 15] = [
    "p_n",
    "p_mean",
    "p_std",
    "p_min",
    "p_max",
    "q_n",
    "q_mean",
    "q_std",
    "q_min",
    "q_max",
    "kl_pq",
    "kl_qp",
    "bandwidth_p",
    "bandwidth_q",
    "grid_points",
];

impl ComparisonReport {
    fn values(&self) -> [String; 15] {
        let (p, q) = (&self.summary_p, &self.summary_q);
        [
            p.n.to_string(),
            p.mean.to_string(),
            p.std.to_string(),
            p.min.to_string(),
            p.max.to_string(),
            q.n.to_string(),
            q.mean.to_string(),
            q.std.to_string(),
            q.min.to_string(),
            q.max.to_string(),
            self.kl_pq.to_string(),
            self.kl_qp.to_string(),
            self.bandwidth_p.to_string(),
            self.bandwidth_q.to_string(),
            self.grid_points.to_string(),
        ]
    }

    pub fn csv_header() -> String {
        CSV_FIELDS.join(",")
    }

    pub fn csv_row(&self) -> String {
        self.values().join(",")
    }

    /// One `key: value` line per field.
    pub fn to_kv_block(&self) -> String {
        let mut out = String::new();
        for (k, v) in CSV_FIELDS.iter().zip(self.values()) {
            writeln!(out, "{k}: {v}").unwrap();
        }
        out
    }
}

/// Summaries (with deciles) plus KL in both directions at the default
/// grid and floor.
pub fn compare(p: &ScoreSample, q: &ScoreSample) -> Result<ComparisonReport, StatsError> {
    let pq = kl_divergence(p, q, DEFAULT_GRID_POINTS, DEFAULT_PDF_FLOOR)?;
    let qp = kl_divergence(q, p, DEFAULT_GRID_POINTS, DEFAULT_PDF_FLOOR)?;
    Ok(ComparisonReport {
        summary_p: summarize(p, &DECILES)?,
        summary_q: summarize(q, &DECILES)?,
        kl_pq: pq.value(),
        kl_qp: qp.value(),
        kl_pq_raw: pq.raw,
        kl_qp_raw: qp.raw,
        bandwidth_p: pq.bandwidth_p,
        bandwidth_q: pq.bandwidth_q,
        grid_points: DEFAULT_GRID_POINTS,
    })
}
