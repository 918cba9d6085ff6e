//! Property tests for the algebraic contracts: fitness evaluation against an
//! independent pair-order oracle, exact incremental deltas, crossover
//! position preservation, and the Kendall-tau metric axioms.

use lop::{
    apply_insert, cycle_crossover, insert_delta, kendall_tau, local_search, perturb,
    InsertMove, Individual, LopInstance, Permutation,
};
use proptest::prelude::*;
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Independent fitness oracle: iterate item pairs (not rank pairs) and charge
/// `w[x][y]` whenever `x` is ranked before `y`.
fn pairwise_eval(inst: &LopInstance, perm: &Permutation) -> i64 {
    let rank = perm.inverse();
    let n = inst.n();
    let mut total = 0i64;
    for x in 0..n {
        for y in 0..n {
            if x != y && rank[x] < rank[y] {
                total += inst.weight(x, y);
            }
        }
    }
    total
}

/// Independent distance oracle: count discordant item pairs directly.
fn pairwise_kendall(a: &Permutation, b: &Permutation) -> u64 {
    let ra = a.inverse();
    let rb = b.inverse();
    let n = a.len();
    let mut discordant = 0u64;
    for x in 0..n {
        for y in x + 1..n {
            if (ra[x] < ra[y]) != (rb[x] < rb[y]) {
                discordant += 1;
            }
        }
    }
    discordant
}

fn arb_instance(max_n: usize) -> impl Strategy<Value = LopInstance> {
    (2..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(-50i64..=50, n * n)
            .prop_map(move |w| LopInstance::new("prop", n, w).unwrap())
    })
}

fn seeded_perm(n: usize, seed: u64) -> Permutation {
    Permutation::random(n, &mut ChaCha8Rng::seed_from_u64(seed))
}

proptest! {
    #[test]
    fn evaluate_matches_the_pairwise_oracle(inst in arb_instance(8), seed in any::<u64>()) {
        let perm = seeded_perm(inst.n(), seed);
        prop_assert_eq!(inst.evaluate(&perm).unwrap(), pairwise_eval(&inst, &perm));
    }

    /// Each unordered item pair contributes one orientation to a permutation
    /// and the other to its reversal.
    #[test]
    fn reversal_complement(inst in arb_instance(12), seed in any::<u64>()) {
        let perm = seeded_perm(inst.n(), seed);
        let total = inst.evaluate(&perm).unwrap() + inst.evaluate(&perm.reversed()).unwrap();
        prop_assert_eq!(total, inst.total_offdiagonal());
    }

    #[test]
    fn insert_delta_is_exact(inst in arb_instance(50), seed in any::<u64>()) {
        let n = inst.n();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let perm = Permutation::random(n, &mut rng);
        let mv = InsertMove::new(
            rng.gen_range(0..n),
            rng.gen_range(0..n),
        );
        let before = inst.evaluate(&perm).unwrap();
        let after = inst.evaluate(&apply_insert(&perm, mv).unwrap()).unwrap();
        prop_assert_eq!(insert_delta(&inst, &perm, mv).unwrap(), after - before);
    }

    #[test]
    fn local_search_output_is_valid_and_coherent(inst in arb_instance(20), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let start = Individual::random(&inst, &mut rng);
        let start_fitness = start.fitness;
        let out = local_search(&inst, start, &mut rng);
        prop_assert!(Permutation::new(out.perm.to_vec()).is_ok());
        prop_assert_eq!(out.fitness, inst.evaluate(&out.perm).unwrap());
        prop_assert!(out.fitness >= start_fitness);
    }

    #[test]
    fn cx_children_preserve_rank_values(seed1 in any::<u64>(), seed2 in any::<u64>(), n in 2usize..64) {
        let p1 = seeded_perm(n, seed1);
        let p2 = seeded_perm(n, seed2);
        let (a, b) = cycle_crossover(&p1, &p2).unwrap();
        prop_assert!(Permutation::new(a.to_vec()).is_ok());
        prop_assert!(Permutation::new(b.to_vec()).is_ok());
        for k in 0..n {
            prop_assert!(a[k] == p1[k] || a[k] == p2[k]);
            prop_assert!(b[k] == p1[k] || b[k] == p2[k]);
            prop_assert_eq!(a[k] == p1[k], b[k] == p2[k]);
        }
    }

    #[test]
    fn kendall_matches_oracle_and_is_a_metric(
        seed1 in any::<u64>(),
        seed2 in any::<u64>(),
        seed3 in any::<u64>(),
        n in 2usize..100,
    ) {
        let a = seeded_perm(n, seed1);
        let b = seeded_perm(n, seed2);
        let c = seeded_perm(n, seed3);

        let dab = kendall_tau(&a, &b).unwrap();
        prop_assert_eq!(dab, pairwise_kendall(&a, &b));
        prop_assert_eq!(dab, kendall_tau(&b, &a).unwrap());
        prop_assert_eq!(kendall_tau(&a, &a).unwrap(), 0);
        prop_assert_eq!(dab == 0, a == b);
        prop_assert!(dab <= (n * (n - 1) / 2) as u64);

        let dac = kendall_tau(&a, &c).unwrap();
        let dcb = kendall_tau(&c, &b).unwrap();
        prop_assert!(dab <= dac + dcb, "triangle inequality: {} > {} + {}", dab, dac, dcb);
    }

    #[test]
    fn perturbation_stays_a_permutation(seed in any::<u64>(), n in 2usize..40, swaps in 1u32..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = Permutation::random(n, &mut rng);
        let q = perturb(&p, swaps, &mut rng);
        prop_assert!(Permutation::new(q.to_vec()).is_ok());
        let differing = p.iter().zip(q.iter()).filter(|(x, y)| x != y).count();
        prop_assert!(differing <= 2 * swaps as usize);
    }
}
