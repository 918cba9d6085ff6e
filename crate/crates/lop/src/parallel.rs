//! Synchronous master-worker execution of intensification batches.
//!
//! The evolutionary loop stays sequential on the master; only the per-
//! individual intensifications are farmed out. A batch call blocks until
//! every slot has completed and always returns results in slot order, so the
//! evolutionary process is identical whatever the worker count. Dynamic
//! dispatch hands the next pending slot to whichever worker frees up first,
//! which keeps heterogeneous task lengths balanced; static dispatch
//! pre-partitions the slots into contiguous chunks.

use std::panic::{self, AssertUnwindSafe};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ils::{ils_run_traced, IlsConfig};
use crate::instance::LopInstance;
use crate::local_search::local_search_traced;
use crate::perm::Individual;

/// What a worker runs on each slot.
#[derive(Clone, Debug)]
pub enum IntensifierKind {
    LocalSearch,
    Ils(IlsConfig),
}

/// A batch descriptor: the intensifier plus one rng seed per slot. Seeds are
/// supplied by the caller so that results never depend on scheduling.
#[derive(Clone, Debug)]
pub struct IntensifyTask {
    pub kind: IntensifierKind,
    pub seeds: Vec<u64>,
}

/// Result of one slot.
#[derive(Clone, Debug)]
pub struct Intensified {
    pub individual: Individual,
    /// Local-search passes spent on this slot.
    pub sweeps: u64,
}

/// Runs one slot's intensification with its own seeded rng stream.
pub fn intensify_one(
    inst: &LopInstance,
    individual: Individual,
    kind: &IntensifierKind,
    seed: u64,
) -> Intensified {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind {
        IntensifierKind::LocalSearch => {
            let out = local_search_traced(inst, individual, &mut rng);
            Intensified { individual: out.individual, sweeps: out.sweeps }
        }
        IntensifierKind::Ils(cfg) => {
            let out = ils_run_traced(inst, individual, cfg, &mut rng);
            Intensified { individual: out.individual, sweeps: out.sweeps }
        }
    }
}

/// Batch intensification behind a synchronous barrier.
pub trait IntensifyExecutor: Send + Sync {
    /// Intensifies every individual exactly once and returns the results in
    /// slot order. Fails as a whole if any task panics.
    fn intensify_all(
        &self,
        inst: &LopInstance,
        batch: Vec<Individual>,
        task: &IntensifyTask,
    ) -> Result<Vec<Intensified>>;
}

fn check_task(batch_len: usize, task: &IntensifyTask) -> Result<()> {
    if batch_len == 0 {
        return Err(Error::domain("intensification batch must be non-empty"));
    }
    if task.seeds.len() != batch_len {
        return Err(Error::domain(format!(
            "expected {batch_len} slot seeds, got {}",
            task.seeds.len()
        )));
    }
    Ok(())
}

/// Runs every slot on the calling thread, in order.
#[derive(Clone, Copy, Debug, Default)]
pub struct SequentialExecutor;

impl IntensifyExecutor for SequentialExecutor {
    fn intensify_all(
        &self,
        inst: &LopInstance,
        batch: Vec<Individual>,
        task: &IntensifyTask,
    ) -> Result<Vec<Intensified>> {
        check_task(batch.len(), task)?;
        Ok(batch
            .into_iter()
            .zip(&task.seeds)
            .map(|(ind, &seed)| intensify_one(inst, ind, &task.kind, seed))
            .collect())
    }
}

/// How pending slots are assigned to workers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dispatch {
    /// Next pending slot goes to the first idle worker.
    Dynamic,
    /// Slots are pre-partitioned into contiguous per-worker chunks.
    StaticBlock,
}

/// Start/end record of one executed slot, for scheduling diagnostics.
/// Offsets are relative to the start of the batch.
#[derive(Clone, Copy, Debug)]
pub struct TaskEvent {
    pub slot: usize,
    pub worker: usize,
    pub started: Duration,
    pub finished: Duration,
}

/// Shared batch state the workers write into.
struct BatchState<T> {
    results: Mutex<Vec<Option<T>>>,
    failure: Mutex<Option<(usize, String)>>,
    events: Mutex<Vec<TaskEvent>>,
    epoch: Instant,
}

impl<T> BatchState<T> {
    fn failed(&self) -> bool {
        self.failure.lock().unwrap().is_some()
    }

    /// Runs one slot; returns false when the worker should stop.
    fn execute<F: Fn(usize) -> T>(&self, task_fn: &F, worker: usize, slot: usize) -> bool {
        let started = self.epoch.elapsed();
        match panic::catch_unwind(AssertUnwindSafe(|| task_fn(slot))) {
            Ok(value) => {
                let finished = self.epoch.elapsed();
                self.results.lock().unwrap()[slot] = Some(value);
                self.events.lock().unwrap().push(TaskEvent { slot, worker, started, finished });
                true
            }
            Err(payload) => {
                let mut guard = self.failure.lock().unwrap();
                if guard.is_none() {
                    *guard = Some((slot, panic_message(payload)));
                }
                false
            }
        }
    }
}

/// In-process worker pool. One worker behaves exactly like
/// [`SequentialExecutor`]; population sizes that are multiples of the worker
/// count waste the least time at the end-of-batch barrier.
#[derive(Clone, Copy, Debug)]
pub struct PoolExecutor {
    workers: usize,
    dispatch: Dispatch,
}

impl PoolExecutor {
    pub fn new(workers: usize, dispatch: Dispatch) -> Result<Self> {
        if workers == 0 {
            return Err(Error::config("worker count must be >= 1"));
        }
        Ok(Self { workers, dispatch })
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    pub fn dispatch(&self) -> Dispatch {
        self.dispatch
    }

    /// Executes `task_fn` for every slot in `0..slots` across the pool and
    /// returns the outputs in slot order.
    pub fn run_batch<T, F>(&self, slots: usize, task_fn: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(usize) -> T + Sync,
    {
        self.run_batch_traced(slots, task_fn).map(|(out, _)| out)
    }

    /// [`run_batch`](Self::run_batch) plus the scheduling event log.
    pub fn run_batch_traced<T, F>(&self, slots: usize, task_fn: F) -> Result<(Vec<T>, Vec<TaskEvent>)>
    where
        T: Send,
        F: Fn(usize) -> T + Sync,
    {
        let mut results: Vec<Option<T>> = Vec::with_capacity(slots);
        results.resize_with(slots, || None);
        let state = BatchState {
            results: Mutex::new(results),
            failure: Mutex::new(None),
            events: Mutex::new(Vec::with_capacity(slots)),
            epoch: Instant::now(),
        };
        let next_slot = AtomicUsize::new(0);

        thread::scope(|scope| {
            for worker in 0..self.workers {
                let state = &state;
                let task_fn = &task_fn;
                let next_slot = &next_slot;
                let dispatch = self.dispatch;
                let workers = self.workers;
                scope.spawn(move || match dispatch {
                    Dispatch::Dynamic => loop {
                        if state.failed() {
                            return;
                        }
                        let slot = next_slot.fetch_add(1, Ordering::Relaxed);
                        if slot >= slots {
                            return;
                        }
                        if !state.execute(task_fn, worker, slot) {
                            return;
                        }
                    },
                    Dispatch::StaticBlock => {
                        for slot in chunk_range(slots, workers, worker) {
                            if state.failed() || !state.execute(task_fn, worker, slot) {
                                return;
                            }
                        }
                    }
                });
            }
        });

        if let Some((slot, cause)) = state.failure.into_inner().unwrap() {
            return Err(Error::WorkerFailed { slot, cause });
        }
        let outputs: Vec<T> = state
            .results
            .into_inner()
            .unwrap()
            .into_iter()
            .map(|r| r.expect("every slot completed"))
            .collect();
        let mut events = state.events.into_inner().unwrap();
        events.sort_by_key(|e| e.started);
        Ok((outputs, events))
    }
}

/// Contiguous chunk for `worker`, sized as evenly as possible.
fn chunk_range(slots: usize, workers: usize, worker: usize) -> std::ops::Range<usize> {
    let base = slots / workers;
    let extra = slots % workers;
    let start = worker * base + worker.min(extra);
    let len = base + usize::from(worker < extra);
    start..start + len
}

impl IntensifyExecutor for PoolExecutor {
    fn intensify_all(
        &self,
        inst: &LopInstance,
        batch: Vec<Individual>,
        task: &IntensifyTask,
    ) -> Result<Vec<Intensified>> {
        check_task(batch.len(), task)?;
        self.run_batch(batch.len(), |slot| {
            intensify_one(inst, batch[slot].clone(), &task.kind, task.seeds[slot])
        })
    }
}

/// Executor choice as plain configuration data.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case", tag = "type")]
pub enum ExecutorSpec {
    #[default]
    Sequential,
    Pool { workers: usize, dispatch: Dispatch },
}

impl ExecutorSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ExecutorSpec::Sequential => Ok(()),
            ExecutorSpec::Pool { workers, .. } if workers >= 1 => Ok(()),
            ExecutorSpec::Pool { .. } => Err(Error::config("worker count must be >= 1")),
        }
    }

    pub fn build(&self) -> Result<Box<dyn IntensifyExecutor>> {
        match *self {
            ExecutorSpec::Sequential => Ok(Box::new(SequentialExecutor)),
            ExecutorSpec::Pool { workers, dispatch } => {
                Ok(Box::new(PoolExecutor::new(workers, dispatch)?))
            }
        }
    }
}

fn panic_message(payload: Box<dyn std::any::Any + Send>) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        (*s).to_string()
    } else if let Some(s) = payload.downcast_ref::<String>() {
        s.clone()
    } else {
        "task panicked".to_string()
    }
}
