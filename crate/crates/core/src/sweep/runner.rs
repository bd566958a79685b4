//! Parallel trial execution with a single coordinating writer.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::mpsc;
use std::time::Instant;

use super::plan::enumerate_trials;
use super::store::{RunStore, StoreHeader};
use super::{SweepError, SweepPlan, TrialRecord, TrialSpec};
use crate::experiments::Experiment;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Progress {
    pub completed: usize,
    pub total: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    /// Every record of the plan, sorted by trial index.
    pub records: Vec<TrialRecord>,
    /// Trials executed by this call (excludes those already in the store).
    pub executed: usize,
}

fn run_one(experiment: &dyn Experiment, spec: TrialSpec) -> TrialRecord {
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(|| experiment.run_trial(&spec.point, spec.seed)));
    let wall_time = start.elapsed().as_secs_f64();
    match result {
        Ok(Ok(m)) if m.is_finite() => TrialRecord::ok(spec, m, wall_time),
        Ok(Ok(m)) => TrialRecord::failed(spec, format!("non-finite metric {m}"), wall_time),
        Ok(Err(e)) => TrialRecord::failed(spec, e.to_string(), wall_time),
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            TrialRecord::failed(spec, format!("panicked: {msg}"), wall_time)
        }
    }
}

/// Run `specs` on up to `workers` threads. Records reach `sink` in the order
/// of `specs`, regardless of completion order.
fn execute(
    specs: Vec<TrialSpec>,
    experiment: &dyn Experiment,
    workers: usize,
    mut sink: impl FnMut(&TrialRecord) -> Result<(), SweepError>,
) -> Result<Vec<TrialRecord>, SweepError> {
    let total = specs.len();
    let workers = workers.max(1).min(total.max(1));
    let next = AtomicUsize::new(0);
    let abort = AtomicBool::new(false);
    let specs = &specs;

    std::thread::scope(|scope| {
        let (tx, rx) = mpsc::channel::<(usize, TrialRecord)>();
        for _ in 0..workers {
            let tx = tx.clone();
            let (next, abort) = (&next, &abort);
            scope.spawn(move || loop {
                if abort.load(Ordering::Relaxed) {
                    break;
                }
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= total {
                    break;
                }
                let record = run_one(experiment, specs[i].clone());
                if tx.send((i, record)).is_err() {
                    break;
                }
            });
        }
        drop(tx);

        let mut pending = BTreeMap::new();
        let mut done = Vec::with_capacity(total);
        for (i, record) in rx {
            pending.insert(i, record);
            while let Some(record) = pending.remove(&done.len()) {
                if let Err(e) = sink(&record) {
                    abort.store(true, Ordering::Relaxed);
                    return Err(e);
                }
                done.push(record);
            }
        }
        Ok(done)
    })
}

fn with_progress<'a>(
    total: usize,
    already: &[TrialRecord],
    progress: &'a mut dyn FnMut(Progress),
) -> impl FnMut(&TrialRecord) + 'a {
    let mut p = Progress {
        completed: already.len(),
        total,
        failed: already.iter().filter(|r| !r.is_ok()).count(),
    };
    move |r| {
        p.completed += 1;
        if !r.is_ok() {
            p.failed += 1;
        }
        progress(p);
    }
}

/// Execute every trial of `plan`, appending records to `store` in
/// trial-index order.
pub fn run_sweep(
    plan: &SweepPlan,
    experiment: &dyn Experiment,
    worker_count: usize,
    store: &mut RunStore,
) -> Result<Vec<TrialRecord>, SweepError> {
    run_sweep_with_progress(plan, experiment, worker_count, store, &mut |_| {})
}

pub fn run_sweep_with_progress(
    plan: &SweepPlan,
    experiment: &dyn Experiment,
    worker_count: usize,
    store: &mut RunStore,
    progress: &mut dyn FnMut(Progress),
) -> Result<Vec<TrialRecord>, SweepError> {
    if worker_count == 0 {
        return Err(SweepError::InvalidPlan("worker_count must be >= 1".into()));
    }
    let specs = enumerate_trials(plan)?;
    let mut tick = with_progress(specs.len(), &[], progress);
    execute(specs, experiment, worker_count, |r| {
        store.append_record(r)?;
        tick(r);
        Ok(())
    })
}

/// Run whatever part of `plan` the store at `store_path` is missing.
///
/// A missing or empty store is a fresh run. The merged result equals a full
/// run of the same plan.
pub fn resume(
    plan: &SweepPlan,
    store_path: &Path,
    experiment: &dyn Experiment,
    worker_count: usize,
    progress: &mut dyn FnMut(Progress),
) -> Result<SweepOutcome, SweepError> {
    if worker_count == 0 {
        return Err(SweepError::InvalidPlan("worker_count must be >= 1".into()));
    }
    let specs = enumerate_trials(plan)?;
    let header = StoreHeader::new(experiment.name(), plan.clone());
    let (mut store, existing) = RunStore::open_or_create(store_path, header)?;

    let mut have = vec![false; specs.len()];
    for r in &existing {
        let i = r.trial_index() as usize;
        if i >= specs.len() {
            return Err(SweepError::PlanMismatch(format!(
                "trial {i} outside the plan's {} trials",
                specs.len()
            )));
        }
        if have[i] {
            return Err(SweepError::PlanMismatch(format!("trial {i} recorded twice")));
        }
        if r.spec != specs[i] {
            return Err(SweepError::PlanMismatch(format!("trial {i} differs from the plan")));
        }
        have[i] = true;
    }

    let todo: Vec<TrialSpec> = specs.into_iter().filter(|s| !have[s.trial_index as usize]).collect();
    let executed = todo.len();
    let total = have.len();
    let mut tick = with_progress(total, &existing, progress);
    let fresh = execute(todo, experiment, worker_count, |r| {
        store.append_record(r)?;
        tick(r);
        Ok(())
    })?;

    let mut records = existing;
    records.extend(fresh);
    records.sort_by_key(TrialRecord::trial_index);
    Ok(SweepOutcome { records, executed })
}
