//! Sweep engine end to end: sampling, parallel execution, persistence, resume.

use std::fs;
use std::path::Path;

use distro_eval_core::experiments::{Experiment, NoisyQuadratic, TrialError};
use distro_eval_core::sweep::{
    epsilon_ball_unclipped, load_records, resume, run_sweep, Dim, HyperParamPoint, HyperParamSpace, RunStore,
    SamplingMode, StoreHeader, SweepError, SweepPlan, TrialStatus,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_space(rng: &mut ChaCha8Rng) -> HyperParamSpace {
    let dims = (0..rng.random_range(1..=5))
        .map(|i| {
            let name = format!("d{i}");
            match rng.random_range(0..3) {
                0 => {
                    let lo = rng.random_range(-100.0..100.0);
                    Dim::linear(&name, lo, lo + rng.random_range(1e-3..50.0))
                }
                1 => {
                    let lo = 10f64.powf(rng.random_range(-8.0..0.0));
                    Dim::log(&name, lo, lo * 10f64.powf(rng.random_range(0.1..6.0)))
                }
                _ => {
                    let lo = rng.random_range(-20..20) as f64;
                    Dim::integer(&name, lo, lo + rng.random_range(1..100) as f64)
                }
            }
        })
        .collect();
    HyperParamSpace::new(dims).unwrap()
}

#[test]
fn epsilon_ball_containment() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut total = 0;
    while total < 100_000 {
        let space = random_space(&mut rng);
        let unit: Vec<f64> = (0..space.len()).map(|_| rng.random::<f64>()).collect();
        let center = space.denormalize(&unit);
        let c = space.normalize(&center).unwrap();
        let eps = rng.random_range(1e-6..=1.0);
        let raw = epsilon_ball_unclipped(&space, &center, eps, 100, &mut rng).unwrap();
        for u in &raw {
            for (a, b) in u.iter().zip(&c) {
                assert!((a - b).abs() <= eps + 1e-12, "{a} vs center {b}, eps {eps}");
            }
            let p = space.denormalize(u);
            space.validate(&p).unwrap();
            for d in space.dims() {
                let v = p.get(&d.name).unwrap();
                assert!(v >= d.lo && v <= d.hi);
            }
        }
        total += raw.len();
    }
}

fn quadratic_plan(n_points: usize, seeds_per_point: u32, master_seed: u64) -> SweepPlan {
    SweepPlan {
        space: NoisyQuadratic.space(),
        mode: SamplingMode::Uniform { n_points },
        seeds_per_point,
        master_seed,
    }
}

fn run_fresh(plan: &SweepPlan, exp: &dyn Experiment, workers: usize, path: &Path) {
    let mut store = RunStore::create(path, StoreHeader::new(exp.name(), plan.clone())).unwrap();
    run_sweep(plan, exp, workers, &mut store).unwrap();
}

/// Store text with every `wall_time` value removed.
fn without_wall_time(path: &Path) -> String {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| l.split(",\"wall_time\":").next().unwrap().to_owned())
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn stores_are_identical_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let plan = quadratic_plan(60, 3, 77);
    let (a, b) = (dir.path().join("w1.jsonl"), dir.path().join("w8.jsonl"));
    run_fresh(&plan, &NoisyQuadratic, 1, &a);
    run_fresh(&plan, &NoisyQuadratic, 8, &b);
    assert_eq!(without_wall_time(&a), without_wall_time(&b));
    assert_eq!(load_records(&a).unwrap().records.len(), 180);
}

#[test]
fn loading_restores_appended_records() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.jsonl");
    let plan = quadratic_plan(25, 2, 3);
    let mut store = RunStore::create(&path, StoreHeader::new("noisy-quadratic", plan.clone())).unwrap();
    let written = run_sweep(&plan, &NoisyQuadratic, 4, &mut store).unwrap();
    let loaded = load_records(&path).unwrap();
    assert_eq!(loaded.records, written);
    assert_eq!(loaded.header.unwrap().plan, plan);
}

struct OddFails;

impl Experiment for OddFails {
    fn name(&self) -> &str {
        "odd-fails"
    }
    fn space(&self) -> HyperParamSpace {
        NoisyQuadratic.space()
    }
    fn run_trial(&self, p: &HyperParamPoint, seed: u64) -> Result<f64, TrialError> {
        match seed % 3 {
            0 => panic!("boom"),
            1 => Err(TrialError::Diverged),
            _ => NoisyQuadratic.run_trial(p, seed),
        }
    }
}

#[test]
fn failing_trials_are_recorded_and_the_sweep_continues() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.jsonl");
    let plan = quadratic_plan(30, 2, 8);
    let mut store = RunStore::create(&path, StoreHeader::new("odd-fails", plan.clone())).unwrap();
    let recs = run_sweep(&plan, &OddFails, 3, &mut store).unwrap();
    assert_eq!(recs.len(), 60);
    for r in &recs {
        match r.spec.seed % 3 {
            0 => assert!(matches!(r.status(), TrialStatus::Failed(m) if m.contains("boom"))),
            1 => assert_eq!(r.status(), &TrialStatus::Failed("diverged".into())),
            _ => assert!(r.is_ok()),
        }
    }
    assert_eq!(load_records(&path).unwrap().records, recs);
}

#[test]
fn resuming_a_half_store_matches_a_fresh_run() {
    let dir = tempfile::tempdir().unwrap();
    let plan = quadratic_plan(50, 2, 21);
    let full = dir.path().join("full.jsonl");
    run_fresh(&plan, &NoisyQuadratic, 2, &full);

    let half = dir.path().join("half.jsonl");
    let text = fs::read_to_string(&full).unwrap();
    let kept: Vec<&str> = text.lines().take(1 + 50).collect();
    fs::write(&half, kept.join("\n") + "\n").unwrap();

    let out = resume(&plan, &half, &NoisyQuadratic, 8, &mut |_| {}).unwrap();
    assert_eq!(out.executed, 50);
    assert_eq!(without_wall_time(&half), without_wall_time(&full));

    let again = resume(&plan, &half, &NoisyQuadratic, 8, &mut |_| {}).unwrap();
    assert_eq!(again.executed, 0);
    assert_eq!(again.records.len(), 100);
}

#[test]
fn resume_rejects_a_different_plan() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.jsonl");
    run_fresh(&quadratic_plan(10, 1, 5), &NoisyQuadratic, 1, &path);
    for other in [
        quadratic_plan(10, 1, 6),
        quadratic_plan(11, 1, 5),
        quadratic_plan(10, 2, 5),
    ] {
        let err = resume(&other, &path, &NoisyQuadratic, 1, &mut |_| {}).unwrap_err();
        assert!(matches!(err, SweepError::PlanMismatch(_)), "{err}");
    }
}

#[test]
fn malformed_lines_report_their_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.jsonl");
    run_fresh(&quadratic_plan(3, 1, 5), &NoisyQuadratic, 1, &path);
    let mut text = fs::read_to_string(&path).unwrap();
    text.push_str("{\"trial_index\":3,\n");
    fs::write(&path, text).unwrap();
    match load_records(&path).unwrap_err() {
        SweepError::MalformedLine { line, .. } => assert_eq!(line, 5),
        e => panic!("unexpected {e}"),
    }
}
