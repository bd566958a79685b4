use std::fmt;

use super::order::quantile;
use super::{ScoreSample, StatsError};

/// `0.1, 0.2, ..., 0.9`.
pub const DECILES: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryStats {
    pub n: usize,
    pub mean: f64,
    /// Sample standard deviation (n − 1 denominator); 0 when n = 1.
    pub std: f64,
    pub min: f64,
    pub max: f64,
    pub quantiles: Vec<(f64, f64)>,
}

impl SummaryStats {
    /// `mean±std` at three decimals, e.g. `0.592±0.021`.
    pub fn mean_pm_std(&self) -> String {
        format!("{:.3}±{:.3}", self.mean, self.std)
    }
}

impl fmt::Display for SummaryStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} {} [min {:.3}, max {:.3}]",
            self.n,
            self.mean_pm_std(),
            self.min,
            self.max
        )
    }
}

/// Mean, sample std, range, and the requested quantiles.
///
/// Levels must lie in `[0, 1]`; level 0 reports the minimum.
pub fn summarize(sample: &ScoreSample, quantile_list: &[f64]) -> Result<SummaryStats, StatsError> {
    let sorted = sample.sorted();
    let n = sorted.len();
    let (min, max) = (sample.min(), sample.max());

    let (mean, std) = if min == max {
        (min, 0.0)
    } else {
        // summing in sorted order makes the result permutation-invariant
        let mean = sorted.iter().sum::<f64>() / n as f64;
        let ss: f64 = sorted.iter().map(|x| (x - mean) * (x - mean)).sum();
        (mean, (ss / (n - 1) as f64).sqrt())
    };

    let quantiles = quantile_list
        .iter()
        .map(|&q| {
            if q == 0.0 {
                Ok((q, min))
            } else {
                quantile(sample, q).map(|v| (q, v))
            }
        })
        .collect::<Result<Vec<_>, _>>()?;

    Ok(SummaryStats {
        n,
        mean,
        std,
        min,
        max,
        quantiles,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn three_point_example() {
        let s = ScoreSample::new("lstm", vec![0.661, 0.665, 0.669]).unwrap();
        let st = summarize(&s, &[]).unwrap();
        assert!((st.mean - 0.665).abs() < 1e-12);
        // sqrt((0.004² + 0 + 0.004²) / 2) = 0.004
        assert!((st.std - 0.004).abs() < 1e-12);
        assert_eq!(st.mean_pm_std(), "0.665±0.004");
    }

    #[test]
    fn constant_and_singleton() {
        let s = ScoreSample::new("c", vec![0.5; 3]).unwrap();
        let st = summarize(&s, &[0.0, 0.5, 1.0]).unwrap();
        assert_eq!((st.mean, st.std), (0.5, 0.0));
        assert_eq!(st.quantiles, vec![(0.0, 0.5), (0.5, 0.5), (1.0, 0.5)]);

        let one = summarize(&ScoreSample::new("1", vec![0.1]).unwrap(), &[]).unwrap();
        assert_eq!(one.std, 0.0);
        assert_eq!(one.mean_pm_std(), "0.100±0.000");

        // 0.1 is not exactly representable; constant input must still give std 0
        let tenth = summarize(&ScoreSample::new("t", vec![0.1; 7]).unwrap(), &[]).unwrap();
        assert_eq!((tenth.mean, tenth.std), (0.1, 0.0));
    }

    #[test]
    fn display_format() {
        let st = SummaryStats {
            n: 5,
            mean: 0.592,
            std: 0.021,
            min: 0.5,
            max: 0.6,
            quantiles: vec![],
        };
        assert_eq!(st.mean_pm_std(), "0.592±0.021");
    }

    #[test]
    fn rejects_bad_levels() {
        let s = ScoreSample::new("x", vec![1.0, 2.0]).unwrap();
        assert!(summarize(&s, &[1.5]).is_err());
        assert!(summarize(&s, &[-0.5]).is_err());
    }

    proptest! {
        #[test]
        fn permutation_invariant(v in prop::collection::vec(-1e6f64..1e6, 1..100), seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let mut w = v.clone();
            w.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let a = summarize(&ScoreSample::new("a", v).unwrap(), &DECILES).unwrap();
            let b = summarize(&ScoreSample::new("b", w).unwrap(), &DECILES).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn quantiles_within_range(v in prop::collection::vec(-1e3f64..1e3, 1..100)) {
            let st = summarize(&ScoreSample::new("a", v.clone()).unwrap(), &DECILES).unwrap();
            prop_assert!(st.std >= 0.0);
            prop_assert!(st.quantiles.iter().all(|&(_, q)| st.min <= q && q <= st.max));
            let all_equal = v.iter().all(|&x| x == v[0]);
            prop_assert_eq!(st.std == 0.0, all_equal);
        }
    }
}
