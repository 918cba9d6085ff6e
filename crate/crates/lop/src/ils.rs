//! Iterated Local Search: perturb the incumbent with a few random swaps,
//! re-run the local search, and accept the result when it is at least as good.

use std::time::{Duration, Instant};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::instance::LopInstance;
use crate::local_search::local_search_traced;
use crate::perm::{Individual, Permutation};

pub const DEFAULT_SWAP_COUNT: u32 = 3;
pub const DEFAULT_ILS_SECONDS: f64 = 3.6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IlsConfig {
    pub budget: Budget,
    /// Number of 2-position swaps per perturbation.
    pub swap_count: u32,
}

impl IlsConfig {
    pub fn new(budget: Budget) -> Self {
        Self { budget, swap_count: DEFAULT_SWAP_COUNT }
    }

    pub fn with_swaps(mut self, swap_count: u32) -> Self {
        self.swap_count = swap_count;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.swap_count == 0 {
            return Err(Error::config("ILS swap count must be >= 1"));
        }
        match self.budget {
            Budget::WallClockSeconds(_) | Budget::IlsIterations(_) => self.budget.validate(),
            other => Err(Error::config(format!(
                "ILS budget must be wall-clock or iteration-based, got {other:?}"
            ))),
        }
    }
}

impl Default for IlsConfig {
    fn default() -> Self {
        Self::new(Budget::WallClockSeconds(DEFAULT_ILS_SECONDS))
    }
}

/// Perturbation operators an ILS can be assembled from. Only [`MultiSwap`]
/// is wired into the solvers; the others exist for experiments.
pub trait Perturbation {
    fn perturb<R: Rng + ?Sized>(&self, perm: &Permutation, rng: &mut R) -> Permutation;
}

/// `swaps` successive exchanges of two distinct random ranks. The output
/// differs from the input in at most `2 * swaps` ranks.
#[derive(Clone, Copy, Debug)]
pub struct MultiSwap {
    pub swaps: u32,
}

impl Perturbation for MultiSwap {
    fn perturb<R: Rng + ?Sized>(&self, perm: &Permutation, rng: &mut R) -> Permutation {
        let n = perm.len();
        debug_assert!(n >= 2);
        let mut out = perm.clone();
        for _ in 0..self.swaps {
            let a = rng.gen_range(0..n);
            let b = loop {
                let b = rng.gen_range(0..n);
                if b != a {
                    break b;
                }
            };
            out.swap_ranks(a, b);
        }
        out
    }
}

/// Reverses a random rank interval.
#[derive(Clone, Copy, Debug)]
pub struct SegmentInversion;

impl Perturbation for SegmentInversion {
    fn perturb<R: Rng + ?Sized>(&self, perm: &Permutation, rng: &mut R) -> Permutation {
        let (lo, hi) = random_span(perm.len(), rng);
        let mut order = perm.to_vec();
        order[lo..=hi].reverse();
        Permutation::from_vec_unchecked(order)
    }
}

/// Shuffles a random rank interval.
#[derive(Clone, Copy, Debug)]
pub struct SegmentScramble;

impl Perturbation for SegmentScramble {
    fn perturb<R: Rng + ?Sized>(&self, perm: &Permutation, rng: &mut R) -> Permutation {
        use rand::seq::SliceRandom;
        let (lo, hi) = random_span(perm.len(), rng);
        let mut order = perm.to_vec();
        order[lo..=hi].shuffle(rng);
        Permutation::from_vec_unchecked(order)
    }
}

/// Moves one random item to a different random rank.
#[derive(Clone, Copy, Debug)]
pub struct RandomInsertion;

impl Perturbation for RandomInsertion {
    fn perturb<R: Rng + ?Sized>(&self, perm: &Permutation, rng: &mut R) -> Permutation {
        let (from, to) = {
            let n = perm.len();
            let from = rng.gen_range(0..n);
            let to = loop {
                let to = rng.gen_range(0..n);
                if to != from {
                    break to;
                }
            };
            (from, to)
        };
        let mut order = perm.to_vec();
        let item = order.remove(from);
        order.insert(to, item);
        Permutation::from_vec_unchecked(order)
    }
}

fn random_span<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (usize, usize) {
    debug_assert!(n >= 2);
    let a = rng.gen_range(0..n);
    let b = loop {
        let b = rng.gen_range(0..n);
        if b != a {
            break b;
        }
    };
    (a.min(b), a.max(b))
}

/// Multi-swap perturbation with `swaps` distinct-rank exchanges.
pub fn perturb<R: Rng + ?Sized>(perm: &Permutation, swaps: u32, rng: &mut R) -> Permutation {
    MultiSwap { swaps }.perturb(perm, rng)
}

/// Result of an ILS run, with intermediate accounting.
#[derive(Clone, Debug)]
pub struct IlsOutcome {
    pub individual: Individual,
    /// Perturbation rounds completed.
    pub iterations: u64,
    /// Total local-search passes, including the initial descent.
    pub sweeps: u64,
    /// Accepted candidates whose fitness tied the incumbent exactly.
    pub equal_accepts: u64,
    /// Fitness right after the initial local search.
    pub start_fitness: i64,
}

/// Runs ILS from `start` under `cfg` using the multi-swap perturbation.
///
/// The incumbent starts at `local_search(start)`. Each round perturbs the
/// incumbent, descends to a local optimum, and replaces the incumbent
/// whenever the candidate is at least as fit, so equal-fitness plateaus can
/// drift. The budget is checked once per round; a round in flight completes.
pub fn ils_run<R: Rng + ?Sized>(
    inst: &LopInstance,
    start: Individual,
    cfg: &IlsConfig,
    rng: &mut R,
) -> Individual {
    ils_run_traced(inst, start, cfg, rng).individual
}

/// [`ils_run`] variant that reports iteration and sweep counts.
pub fn ils_run_traced<R: Rng + ?Sized>(
    inst: &LopInstance,
    start: Individual,
    cfg: &IlsConfig,
    rng: &mut R,
) -> IlsOutcome {
    ils_run_with(inst, start, cfg, &MultiSwap { swaps: cfg.swap_count }, rng)
}

/// ILS with a caller-supplied perturbation operator.
pub fn ils_run_with<P: Perturbation, R: Rng + ?Sized>(
    inst: &LopInstance,
    start: Individual,
    cfg: &IlsConfig,
    perturbation: &P,
    rng: &mut R,
) -> IlsOutcome {
    let started = Instant::now();
    let exhausted = |iterations: u64| match cfg.budget {
        Budget::WallClockSeconds(secs) => started.elapsed() >= Duration::from_secs_f64(secs),
        Budget::IlsIterations(max) => iterations >= max,
        other => panic!("unsupported ILS budget kind: {other:?}"),
    };

    let first = local_search_traced(inst, start, rng);
    let mut incumbent = first.individual;
    let mut sweeps = first.sweeps;
    let start_fitness = incumbent.fitness;
    let mut iterations = 0u64;
    let mut equal_accepts = 0u64;

    while !exhausted(iterations) {
        let candidate_perm = perturbation.perturb(&incumbent.perm, rng);
        let candidate = Individual::evaluated(inst, candidate_perm);
        let out = local_search_traced(inst, candidate, rng);
        sweeps += out.sweeps;
        if out.individual.fitness >= incumbent.fitness {
            if out.individual.fitness == incumbent.fitness {
                equal_accepts += 1;
            }
            incumbent = out.individual;
        }
        iterations += 1;
    }

    IlsOutcome { individual: incumbent, iterations, sweeps, equal_accepts, start_fitness }
}
