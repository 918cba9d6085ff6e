//! Exhaustive optimum for small instances, used as the ground truth the
//! heuristic solvers are checked against.

use anyhow::{bail, Result};
use lop::{LopInstance, Permutation};

/// Largest dimension the exhaustive search accepts (10! is about 3.6 million
/// orderings; one step further is 11x that).
pub const BRUTE_FORCE_MAX_N: usize = 10;

/// Enumerates every ordering and returns the maximum fitness together with
/// the lexicographically smallest ordering that attains it.
pub fn brute_force_optimum(inst: &LopInstance) -> Result<(i64, Permutation)> {
    let n = inst.n();
    if n > BRUTE_FORCE_MAX_N {
        bail!(
            "exhaustive search is limited to n <= {BRUTE_FORCE_MAX_N}, got n = {n}; \
             the factorial search space would be intractable"
        );
    }

    // Enumerate in lexicographic order; keeping strict improvements only
    // leaves the lexicographically smallest optimum in hand at the end.
    let mut order: Vec<usize> = (0..n).collect();
    let mut best_fitness = inst.evaluate_order(&order);
    let mut best_order = order.clone();
    while next_permutation(&mut order) {
        let fitness = inst.evaluate_order(&order);
        if fitness > best_fitness {
            best_fitness = fitness;
            best_order = order.clone();
        }
    }
    Ok((best_fitness, Permutation::new(best_order)?))
}

/// Advances `v` to its lexicographic successor; false once `v` is the last
/// (descending) arrangement.
fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}
