//! Insertion (shift) neighborhood with incremental delta evaluation, and the
//! hill-climbing local search built on it.
//!
//! An insertion move removes the item at one rank and reinserts it at
//! another, shifting everything in between by one. Its fitness delta only
//! involves the pairs between the moved item and the items it passes over, so
//! scanning every target rank for one item costs O(n) with running prefix
//! sums, and certifying a local optimum costs O(n^2) per pass.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::LopInstance;
use crate::perm::{Individual, Permutation};

/// Move the item at rank `from` to rank `to`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InsertMove {
    pub from: usize,
    pub to: usize,
}

impl InsertMove {
    pub fn new(from: usize, to: usize) -> Self {
        Self { from, to }
    }
}

fn check_rank(rank: usize, n: usize, what: &str) -> Result<()> {
    if rank >= n {
        return Err(Error::domain(format!("insert move {what} rank {rank} out of range for n = {n}")));
    }
    Ok(())
}

/// Fitness change of applying `mv` to `perm`, without re-evaluating.
///
/// Moving an item right past rank `k` flips the orientation of exactly one
/// pair, trading `w[item][other]` for `w[other][item]`; moving left trades
/// the other way. Cost O(|from - to|).
pub fn insert_delta(inst: &LopInstance, perm: &Permutation, mv: InsertMove) -> Result<i64> {
    let n = perm.len();
    check_rank(mv.from, n, "from")?;
    check_rank(mv.to, n, "to")?;
    Ok(delta_on_order(inst, perm.as_slice(), mv.from, mv.to))
}

#[inline]
fn delta_on_order(inst: &LopInstance, order: &[usize], from: usize, to: usize) -> i64 {
    let item = order[from];
    let mut delta = 0i64;
    if from < to {
        for &other in &order[from + 1..=to] {
            delta += inst.weight(other, item) - inst.weight(item, other);
        }
    } else {
        for &other in &order[to..from] {
            delta += inst.weight(item, other) - inst.weight(other, item);
        }
    }
    delta
}

/// Applies `mv` to a copy of `perm`.
pub fn apply_insert(perm: &Permutation, mv: InsertMove) -> Result<Permutation> {
    let n = perm.len();
    check_rank(mv.from, n, "from")?;
    check_rank(mv.to, n, "to")?;
    let mut order = perm.to_vec();
    let item = order.remove(mv.from);
    order.insert(mv.to, item);
    Ok(Permutation::from_vec_unchecked(order))
}

/// Outcome of a local search, with enough accounting to budget-match runs.
#[derive(Clone, Debug)]
pub struct LsOutcome {
    pub individual: Individual,
    /// Full passes over all items, including the final pass that applied
    /// nothing.
    pub sweeps: u64,
    pub moves: u64,
}

/// Hill-climbs `ind` to a local optimum of the insertion neighborhood.
///
/// Each pass visits every item in a freshly shuffled order and applies the
/// best strictly improving reinsertion of that item, if any; passes repeat
/// until one applies no move. Only strict improvements are taken, so the
/// integer fitness increases with every move and termination is guaranteed.
pub fn local_search<R: Rng + ?Sized>(inst: &LopInstance, ind: Individual, rng: &mut R) -> Individual {
    local_search_traced(inst, ind, rng).individual
}

/// [`local_search`] variant that reports pass and move counts.
pub fn local_search_traced<R: Rng + ?Sized>(
    inst: &LopInstance,
    ind: Individual,
    rng: &mut R,
) -> LsOutcome {
    let n = inst.n();
    debug_assert_eq!(ind.perm.len(), n);
    debug_assert_eq!(ind.fitness, inst.evaluate_order(ind.perm.as_slice()));

    let mut order: Vec<usize> = ind.perm.into();
    let mut pos = vec![0usize; n];
    for (rank, &item) in order.iter().enumerate() {
        pos[item] = rank;
    }
    let mut fitness = ind.fitness;
    let mut items: Vec<usize> = (0..n).collect();
    let mut sweeps = 0u64;
    let mut moves = 0u64;

    loop {
        sweeps += 1;
        items.shuffle(rng);
        let mut moved = false;
        for &item in &items {
            let from = pos[item];
            let mut best_delta = 0i64;
            let mut best_to = from;

            // Left targets, scanning outward with a running sum.
            let mut acc = 0i64;
            for to in (0..from).rev() {
                let other = order[to];
                acc += inst.weight(item, other) - inst.weight(other, item);
                if acc > best_delta {
                    best_delta = acc;
                    best_to = to;
                }
            }
            // Right targets.
            acc = 0;
            for (to, &other) in order.iter().enumerate().skip(from + 1) {
                acc += inst.weight(other, item) - inst.weight(item, other);
                if acc > best_delta {
                    best_delta = acc;
                    best_to = to;
                }
            }

            if best_delta > 0 {
                if best_to < from {
                    order[best_to..=from].rotate_right(1);
                    for (rank, &moved_item) in order.iter().enumerate().take(from + 1).skip(best_to) {
                        pos[moved_item] = rank;
                    }
                } else {
                    order[from..=best_to].rotate_left(1);
                    for (rank, &moved_item) in order.iter().enumerate().take(best_to + 1).skip(from) {
                        pos[moved_item] = rank;
                    }
                }
                fitness += best_delta;
                moves += 1;
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }

    debug_assert_eq!(fitness, inst.evaluate_order(&order));
    LsOutcome {
        individual: Individual {
            perm: Permutation::from_vec_unchecked(order),
            fitness,
        },
        sweeps,
        moves,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn demo3() -> LopInstance {
        LopInstance::new("demo3", 3, vec![0, 3, 1, 2, 0, 4, 5, 6, 0]).unwrap()
    }

    #[test]
    fn delta_null_move_is_zero() {
        let inst = demo3();
        let p = Permutation::identity(3);
        assert_eq!(insert_delta(&inst, &p, InsertMove::new(0, 0)).unwrap(), 0);
    }

    #[test]
    fn delta_matches_full_reevaluation_on_demo() {
        let inst = demo3();
        let p = Permutation::identity(3);
        let base = inst.evaluate(&p).unwrap();

        let right = InsertMove::new(0, 2);
        let d = insert_delta(&inst, &p, right).unwrap();
        assert_eq!(d, 3);
        let moved = apply_insert(&p, right).unwrap();
        assert_eq!(moved.as_slice(), [1, 2, 0]);
        assert_eq!(inst.evaluate(&moved).unwrap(), base + d);

        let left = InsertMove::new(2, 0);
        let d = insert_delta(&inst, &p, left).unwrap();
        assert_eq!(d, 6);
        let moved = apply_insert(&p, left).unwrap();
        assert_eq!(inst.evaluate(&moved).unwrap(), 14);
    }

    #[test]
    fn delta_rejects_out_of_range_ranks() {
        let inst = demo3();
        let p = Permutation::identity(3);
        assert!(insert_delta(&inst, &p, InsertMove::new(3, 0)).is_err());
        assert!(insert_delta(&inst, &p, InsertMove::new(0, 5)).is_err());
        assert!(apply_insert(&p, InsertMove::new(9, 0)).is_err());
    }

    #[test]
    fn apply_insert_examples() {
        let p = Permutation::identity(3);
        assert_eq!(apply_insert(&p, InsertMove::new(0, 2)).unwrap().as_slice(), [1, 2, 0]);
        assert_eq!(apply_insert(&p, InsertMove::new(1, 1)).unwrap().as_slice(), [0, 1, 2]);
        let q = Permutation::new(vec![3, 1, 0, 2]).unwrap();
        assert_eq!(apply_insert(&q, InsertMove::new(3, 0)).unwrap().as_slice(), [2, 3, 1, 0]);
    }

    #[test]
    fn local_search_reaches_demo_optimum_from_any_start() {
        let inst = demo3();
        let starts = [
            vec![0, 1, 2],
            vec![0, 2, 1],
            vec![1, 0, 2],
            vec![1, 2, 0],
            vec![2, 0, 1],
            vec![2, 1, 0],
        ];
        for (i, start) in starts.into_iter().enumerate() {
            let ind = Individual::from_perm(&inst, Permutation::new(start).unwrap()).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(i as u64);
            let out = local_search(&inst, ind, &mut rng);
            assert_eq!(out.fitness, 14);
            assert_eq!(out.perm.as_slice(), [2, 0, 1]);
        }
    }

    #[test]
    fn local_search_is_identity_at_a_local_optimum() {
        let inst = demo3();
        let ind = Individual::from_perm(&inst, Permutation::new(vec![2, 0, 1]).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let out = local_search_traced(&inst, ind.clone(), &mut rng);
        assert_eq!(out.individual, ind);
        assert_eq!(out.moves, 0);
        assert_eq!(out.sweeps, 1);
    }

    #[test]
    fn local_search_does_nothing_on_all_zero_matrix() {
        let inst = LopInstance::new("zero", 4, vec![0; 16]).unwrap();
        let start = Permutation::new(vec![2, 0, 3, 1]).unwrap();
        let ind = Individual::from_perm(&inst, start.clone()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let out = local_search_traced(&inst, ind, &mut rng);
        assert_eq!(out.individual.fitness, 0);
        assert_eq!(out.individual.perm, start);
        assert_eq!(out.moves, 0);
    }

    /// After convergence no single insertion move may improve, checked by full
    /// re-evaluation of every move.
    #[test]
    fn local_search_postcondition_no_improving_move() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..10 {
            let n = 12;
            let weights: Vec<i64> = (0..n * n).map(|_| rng.gen_range(-20..=20)).collect();
            let inst = LopInstance::new("rand", n, weights).unwrap();
            let ind = Individual::random(&inst, &mut rng);
            let out = local_search(&inst, ind, &mut rng);
            let base = out.fitness;
            for from in 0..n {
                for to in 0..n {
                    if from == to {
                        continue;
                    }
                    let moved = apply_insert(&out.perm, InsertMove::new(from, to)).unwrap();
                    assert!(
                        inst.evaluate(&moved).unwrap() <= base,
                        "improving move {from}->{to} left after local search"
                    );
                }
            }
        }
    }
}
