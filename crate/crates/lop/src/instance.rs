//! Weight-matrix instances and fitness evaluation.
//!
//! An instance is an `n x n` matrix of 64-bit signed weights. The fitness of
//! a permutation is the sum of the entries that land above the main diagonal
//! after simultaneously permuting rows and columns, i.e. for ordering
//! `order[0], …, order[n-1]` the sum of `weights[order[i]][order[j]]` over all
//! rank pairs `i < j`. Diagonal entries never contribute.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::perm::Permutation;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LopInstance {
    name: String,
    n: usize,
    /// Row-major, `weights[i * n + j] = m_ij`.
    weights: Vec<i64>,
}

impl LopInstance {
    pub fn new(name: impl Into<String>, n: usize, weights: Vec<i64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(format!("instance dimension must be >= 2, got {n}")));
        }
        if weights.len() != n * n {
            return Err(Error::domain(format!(
                "weight matrix must have {} entries for n = {n}, got {}",
                n * n,
                weights.len()
            )));
        }
        Ok(Self { name: name.into(), n, weights })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn weight(&self, i: usize, j: usize) -> i64 {
        debug_assert!(i < self.n && j < self.n);
        self.weights[i * self.n + j]
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    /// Parses the whitespace-tokenized matrix format used by the LOLIB
    /// instance collections.
    ///
    /// If the first token is not a positive integer, the whole first line is
    /// taken as the instance name; otherwise `fallback_name` is used and the
    /// first token is the dimension `n`. The next `n * n` integer tokens fill
    /// the matrix row-major. Trailing whitespace is ignored, but any extra
    /// non-whitespace token is rejected since it usually means the stated
    /// dimension does not match the data.
    pub fn parse_str(text: &str, fallback_name: &str) -> Result<Self> {
        let body = text.trim_start();
        let first = body
            .split_whitespace()
            .next()
            .ok_or_else(|| Error::format("empty instance file"))?;

        let is_positive_int = first.parse::<u64>().map(|v| v > 0).unwrap_or(false);
        let (name, rest) = if is_positive_int {
            (fallback_name.to_string(), body)
        } else {
            match body.split_once('\n') {
                Some((line, rest)) => (line.trim().to_string(), rest),
                None => (body.trim().to_string(), ""),
            }
        };

        let mut tokens = rest.split_whitespace();
        let n_token = tokens
            .next()
            .ok_or_else(|| Error::format("missing dimension line"))?;
        let n: usize = n_token
            .parse()
            .map_err(|_| Error::format(format!("dimension token {n_token:?} is not a positive integer")))?;
        if n < 2 {
            return Err(Error::domain(format!("instance dimension must be >= 2, got {n}")));
        }
        let expected = n
            .checked_mul(n)
            .ok_or_else(|| Error::format(format!("dimension {n} is too large")))?;

        let entries: Vec<&str> = tokens.collect();
        if entries.len() < expected {
            return Err(Error::Truncated { expected, found: entries.len() });
        }
        if entries.len() > expected {
            return Err(Error::format(format!(
                "{} trailing tokens after the {expected}-entry matrix (dimension mismatch?)",
                entries.len() - expected
            )));
        }

        let mut weights = Vec::with_capacity(expected);
        for tok in entries {
            let w: i64 = tok
                .parse()
                .map_err(|_| Error::format(format!("matrix token {tok:?} is not an integer")))?;
            weights.push(w);
        }
        Self::new(name, n, weights)
    }

    /// Reads and parses an instance file, deriving the fallback name from the
    /// file stem.
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let fallback = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "unnamed".to_string());
        let text = fs::read_to_string(path)?;
        Self::parse_str(&text, &fallback)
    }

    /// Fitness of `perm`: sum of the weights above the diagonal under the
    /// simultaneous row/column ordering given by `perm`. Cost O(n^2).
    pub fn evaluate(&self, perm: &Permutation) -> Result<i64> {
        if perm.len() != self.n {
            return Err(Error::domain(format!(
                "permutation length {} does not match instance dimension {}",
                perm.len(),
                self.n
            )));
        }
        Ok(self.evaluate_order(perm.as_slice()))
    }

    /// Same as [`evaluate`](Self::evaluate) on a raw ordering known to be a
    /// valid permutation of the right length.
    pub fn evaluate_order(&self, order: &[usize]) -> i64 {
        debug_assert_eq!(order.len(), self.n);
        let mut total = 0i64;
        for (i, &above) in order.iter().enumerate() {
            for &below in &order[i + 1..] {
                total += self.weight(above, below);
            }
        }
        total
    }

    /// Sum of all off-diagonal entries. For any permutation `p`,
    /// `evaluate(p) + evaluate(p.reversed())` equals this value, since each
    /// unordered item pair contributes one of its two orientations to each.
    pub fn total_offdiagonal(&self) -> i64 {
        let mut total = 0i64;
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    total += self.weight(i, j);
                }
            }
        }
        total
    }
}
