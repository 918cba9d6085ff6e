//! Permutations in rank-to-item form, and the fitness-caching individual.

use std::fmt;
use std::ops::Index;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::LopInstance;

/// A permutation of `{0, …, n-1}` stored as `order[rank] = item`.
///
/// The item placed first in the ordering is `order[0]`. The inverse
/// (item-to-rank) view is computed on demand via [`Permutation::inverse`].
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    order: Vec<usize>,
}

impl Permutation {
    /// Validates that `order` is a bijection on `{0, …, n-1}`.
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &item in &order {
            if item >= n {
                return Err(Error::domain(format!(
                    "permutation entry {item} out of range for length {n}"
                )));
            }
            if seen[item] {
                return Err(Error::domain(format!(
                    "permutation entry {item} appears more than once"
                )));
            }
            seen[item] = true;
        }
        Ok(Self { order })
    }

    /// Constructor for internal call sites that already guarantee validity.
    pub(crate) fn from_vec_unchecked(order: Vec<usize>) -> Self {
        debug_assert!(Self::new(order.clone()).is_ok());
        Self { order }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            order: (0..n).collect(),
        }
    }

    /// Uniformly random permutation via Fisher-Yates; deterministic per rng state.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        Self { order }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.order
    }

    pub fn iter(&self) -> std::slice::Iter<'_, usize> {
        self.order.iter()
    }

    /// Item-to-rank view: `inverse()[item] = rank`.
    pub fn inverse(&self) -> Vec<usize> {
        let mut inv = vec![0usize; self.order.len()];
        for (rank, &item) in self.order.iter().enumerate() {
            inv[item] = rank;
        }
        inv
    }

    pub fn reversed(&self) -> Self {
        let mut order = self.order.clone();
        order.reverse();
        Self { order }
    }

    pub fn swap_ranks(&mut self, a: usize, b: usize) {
        self.order.swap(a, b);
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.order.clone()
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(order: Vec<usize>) -> Result<Self> {
        Self::new(order)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(perm: Permutation) -> Self {
        perm.order
    }
}

impl Index<usize> for Permutation {
    type Output = usize;

    fn index(&self, rank: usize) -> &usize {
        &self.order[rank]
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{:?}", self.order)
    }
}

/// A permutation together with its cached fitness.
///
/// The cache is coherent by construction: every operation that produces an
/// `Individual` either evaluates the permutation or carries the fitness
/// through exact incremental deltas.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Individual {
    pub perm: Permutation,
    pub fitness: i64,
}

impl Individual {
    /// Evaluates `perm` against `inst` and caches the result.
    pub fn from_perm(inst: &LopInstance, perm: Permutation) -> Result<Self> {
        let fitness = inst.evaluate(&perm)?;
        Ok(Self { perm, fitness })
    }

    /// Fresh uniformly random individual for `inst`.
    pub fn random<R: Rng + ?Sized>(inst: &LopInstance, rng: &mut R) -> Self {
        let perm = Permutation::random(inst.n(), rng);
        let fitness = inst.evaluate_order(perm.as_slice());
        Self { perm, fitness }
    }

    pub(crate) fn evaluated(inst: &LopInstance, perm: Permutation) -> Self {
        let fitness = inst.evaluate_order(perm.as_slice());
        Self { perm, fitness }
    }
}
