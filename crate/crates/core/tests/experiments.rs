//! Built-in experiments: surrogate statistics, bandit learning and purity.

use distro_eval_core::experiments::{by_name, seed_sensitivity_report, Bandit, NoisyQuadratic, Regime, REGISTERED};
use distro_eval_core::stats::{summarize, ScoreSample};
use distro_eval_core::sweep::{derive_trial_seed, HyperParamPoint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn quadratic_noise_has_the_requested_scale() {
    let scores: Vec<f64> = (0..10_000)
        .map(|i| NoisyQuadratic::metric(0.0, 0.1, derive_trial_seed(42, i)))
        .collect();
    let s = summarize(&ScoreSample::new("q", scores).unwrap(), &[]).unwrap();
    assert!((0.095..=0.105).contains(&s.std), "std {}", s.std);
    assert!((s.mean - 1.0).abs() < 0.005);
}

#[test]
fn bandit_learns_the_better_arm() {
    let probs: Vec<f64> = (0..50)
        .map(|i| Bandit::train(0.1, 2_000, derive_trial_seed(8, i)))
        .collect();
    let mean = probs.iter().sum::<f64>() / probs.len() as f64;
    assert!(mean > 0.9, "mean {mean}");
}

#[test]
fn sensitivity_report_orders_regimes_by_noise() {
    let regimes = [
        Regime::new(
            "high-data",
            HyperParamPoint::new().with("x", 0.0).with("noise_scale", 0.01),
        ),
        Regime::new(
            "low-data",
            HyperParamPoint::new().with("x", 0.0).with("noise_scale", 0.1),
        ),
    ];
    let r = seed_sensitivity_report(&NoisyQuadratic, &regimes, 20, 1).unwrap();
    let std = |l: &str| r.regime(l).unwrap().summary.as_ref().unwrap().std;
    assert!(std("low-data") > std("high-data"));
    let text = r.to_string();
    assert!(text.contains("high-data: ") && text.contains("±"));
}

fn random_point(name: &str, rng: &mut ChaCha8Rng) -> HyperParamPoint {
    let exp = by_name(name).unwrap();
    let space = exp.space();
    let unit: Vec<f64> = (0..space.len()).map(|_| rng.random::<f64>()).collect();
    let mut p = space.denormalize(&unit);
    // keep the pendulum runs short
    if let Some(h) = p.get("hidden") {
        p = p.with("hidden", h.min(12.0));
    }
    if let Some(e) = p.get("episodes") {
        p = p.with("episodes", e.min(200.0));
    }
    p
}

#[test]
fn every_registered_experiment_is_pure() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for name in REGISTERED {
        let exp = by_name(name).unwrap();
        for k in 0..3 {
            let p = random_point(name, &mut rng);
            let seed = derive_trial_seed(17, k);
            let a = exp.run_trial(&p, seed);
            let b = exp.run_trial(&p, seed);
            match (a, b) {
                (Ok(a), Ok(b)) => assert_eq!(a.to_bits(), b.to_bits(), "{name} at {p}"),
                (a, b) => assert_eq!(a, b, "{name} at {p}"),
            }
        }
    }
}

#[test]
fn unknown_names_are_not_registered() {
    assert!(by_name("Bandit").is_none());
    assert!(by_name("").is_none());
}
