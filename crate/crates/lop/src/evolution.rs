//! Evolutionary operators and explicit diversity management: binary
//! tournament selection, cycle crossover, Kendall-tau distance, and the
//! Best-Non-Penalized replacement driven by a decaying distance threshold.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{Individual, Permutation};

/// Picks two distinct members uniformly and returns the fitter one; ties go
/// to the first drawn.
pub fn binary_tournament<'a, R: Rng + ?Sized>(pop: &'a [Individual], rng: &mut R) -> &'a Individual {
    assert!(pop.len() >= 2, "tournament needs at least two members");
    let first = rng.gen_range(0..pop.len());
    let second = loop {
        let j = rng.gen_range(0..pop.len());
        if j != first {
            break j;
        }
    };
    if pop[second].fitness > pop[first].fitness {
        &pop[second]
    } else {
        &pop[first]
    }
}

/// Cycle crossover. Ranks are partitioned into the cycles of `p2 ∘ p1⁻¹`
/// (each new cycle starts at the lowest unassigned rank and follows
/// `k → rank in p1 of p2[k]`). The first child copies odd-numbered cycles
/// from `p1` and even-numbered ones from `p2`; the second child is the
/// complement. Every rank of each child therefore holds a parental value for
/// that same rank.
pub fn cycle_crossover(p1: &Permutation, p2: &Permutation) -> Result<(Permutation, Permutation)> {
    if p1.len() != p2.len() {
        return Err(Error::domain(format!(
            "crossover parents have different lengths: {} vs {}",
            p1.len(),
            p2.len()
        )));
    }
    let n = p1.len();
    let inv1 = p1.inverse();
    let mut a = vec![0usize; n];
    let mut b = vec![0usize; n];
    let mut assigned = vec![false; n];
    let mut odd_cycle = true;

    for start in 0..n {
        if assigned[start] {
            continue;
        }
        let mut rank = start;
        loop {
            assigned[rank] = true;
            if odd_cycle {
                a[rank] = p1[rank];
                b[rank] = p2[rank];
            } else {
                a[rank] = p2[rank];
                b[rank] = p1[rank];
            }
            rank = inv1[p2[rank]];
            if rank == start {
                break;
            }
        }
        odd_cycle = !odd_cycle;
    }

    Ok((Permutation::from_vec_unchecked(a), Permutation::from_vec_unchecked(b)))
}

/// Number of item pairs the two permutations order differently, counted in
/// O(n log n) by merge-sorting `b` viewed through `a`'s inverse.
pub fn kendall_tau(a: &Permutation, b: &Permutation) -> Result<u64> {
    if a.len() != b.len() {
        return Err(Error::domain(format!(
            "kendall tau needs equal lengths: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    let inv_a = a.inverse();
    let mut mapped: Vec<usize> = b.iter().map(|&item| inv_a[item]).collect();
    let mut buf = vec![0usize; mapped.len()];
    Ok(count_inversions(&mut mapped, &mut buf))
}

fn count_inversions(v: &mut [usize], buf: &mut [usize]) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let (left, right) = v.split_at_mut(mid);
    let mut inversions = count_inversions(left, buf) + count_inversions(right, buf);

    let (mut i, mut j, mut k) = (0, 0, 0);
    while i < left.len() && j < right.len() {
        if left[i] <= right[j] {
            buf[k] = left[i];
            i += 1;
        } else {
            // right[j] jumps over everything left in the left run
            inversions += (left.len() - i) as u64;
            buf[k] = right[j];
            j += 1;
        }
        k += 1;
    }
    buf[k..k + left.len() - i].copy_from_slice(&left[i..]);
    buf[k + left.len() - i..n].copy_from_slice(&right[j..]);
    v.copy_from_slice(&buf[..n]);
    inversions
}

/// Mean Kendall-tau distance over all unordered member pairs.
pub fn init_d0(pop: &[Individual]) -> f64 {
    assert!(pop.len() >= 2, "initial distance needs at least two members");
    let mut total = 0u64;
    let mut pairs = 0u64;
    for (i, a) in pop.iter().enumerate() {
        for b in &pop[i + 1..] {
            total += kendall_tau(&a.perm, &b.perm).expect("population members have equal length");
            pairs += 1;
        }
    }
    total as f64 / pairs as f64
}

/// Distance threshold decaying linearly from `d0` at the start of a run to 0
/// at its end.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiversitySchedule {
    d0: f64,
}

impl DiversitySchedule {
    pub fn new(d0: f64) -> Self {
        assert!(d0 >= 0.0, "initial distance must be non-negative");
        Self { d0 }
    }

    pub fn d0(&self) -> f64 {
        self.d0
    }

    /// Threshold at the given budget progress; progress outside [0, 1] is
    /// clamped, so overshooting a wall-clock budget yields 0.
    pub fn threshold(&self, progress: f64) -> f64 {
        self.d0 * (1.0 - progress.clamp(0.0, 1.0))
    }
}

/// Best-Non-Penalized survivor selection over `parents ∪ offspring`.
///
/// Selection runs `survivors` greedy rounds. The first round takes the best
/// member by fitness. Every later round penalizes candidates whose distance
/// to the closest already-selected survivor (DCS) is below `d` and takes the
/// best-fitness non-penalized candidate; when everyone is penalized it falls
/// back to the largest DCS, breaking ties by fitness and then by position in
/// the union (parents first, then offspring). The best member of the union
/// always survives.
pub fn bnp_replacement(
    parents: &[Individual],
    offspring: &[Individual],
    d: f64,
    survivors: usize,
) -> Result<Vec<Individual>> {
    let union: Vec<&Individual> = parents.iter().chain(offspring.iter()).collect();
    if union.len() < survivors {
        return Err(Error::domain(format!(
            "replacement needs at least {survivors} candidates, got {}",
            union.len()
        )));
    }
    let m = union.len();
    let mut taken = vec![false; m];
    let mut dcs = vec![u64::MAX; m];
    let mut selected = Vec::with_capacity(survivors);

    let take = |idx: usize, taken: &mut [bool], dcs: &mut [u64], selected: &mut Vec<usize>| {
        taken[idx] = true;
        selected.push(idx);
        for i in 0..m {
            if !taken[i] {
                let dist = kendall_tau(&union[i].perm, &union[idx].perm)
                    .expect("replacement candidates have equal length");
                dcs[i] = dcs[i].min(dist);
            }
        }
    };

    if survivors == 0 {
        return Ok(Vec::new());
    }

    // Round 1: plain elitism.
    let mut best = 0;
    for i in 1..m {
        if union[i].fitness > union[best].fitness {
            best = i;
        }
    }
    take(best, &mut taken, &mut dcs, &mut selected);

    for _ in 1..survivors {
        let mut pick: Option<usize> = None;
        for i in 0..m {
            if taken[i] || (dcs[i] as f64) < d {
                continue;
            }
            if pick.is_none_or(|p| union[i].fitness > union[p].fitness) {
                pick = Some(i);
            }
        }
        let chosen = pick.unwrap_or_else(|| {
            // Everyone is too close to the survivor set: keep the most
            // distant candidate anyway.
            let mut fallback = usize::MAX;
            for i in 0..m {
                if taken[i] {
                    continue;
                }
                if fallback == usize::MAX
                    || dcs[i] > dcs[fallback]
                    || (dcs[i] == dcs[fallback] && union[i].fitness > union[fallback].fitness)
                {
                    fallback = i;
                }
            }
            fallback
        });
        take(chosen, &mut taken, &mut dcs, &mut selected);
    }

    Ok(selected.into_iter().map(|i| union[i].clone()).collect())
}
