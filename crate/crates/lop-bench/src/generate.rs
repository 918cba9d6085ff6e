//! Random instance generation in the same text format the parser reads.

use anyhow::{bail, Result};
use lop::LopInstance;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Builds an instance with uniform integer off-diagonal weights in
/// `[low, high]` and a zero diagonal, deterministically per seed.
pub fn generate_instance(
    n: usize,
    low: i64,
    high: i64,
    seed: u64,
    name: Option<String>,
) -> Result<LopInstance> {
    if n < 2 {
        bail!("instance dimension must be >= 2, got {n}");
    }
    if low > high {
        bail!("weight range is empty: [{low}, {high}]");
    }
    let name = name.unwrap_or_else(|| format!("rand-n{n}-s{seed}"));
    if name.parse::<u64>().map(|v| v > 0).unwrap_or(false) {
        // A bare positive integer on the first line would be read back as the
        // dimension, not a name.
        bail!("instance name {name:?} would be ambiguous in the file format");
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut weights = vec![0i64; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                weights[i * n + j] = rng.gen_range(low..=high);
            }
        }
    }
    Ok(LopInstance::new(name, n, weights)?)
}

/// Canonical text serialization: name line, dimension line, then one
/// space-separated row per line. Parsing and re-serializing a file produced
/// here is byte-stable.
pub fn to_lolib_string(inst: &LopInstance) -> String {
    let n = inst.n();
    let mut out = String::new();
    out.push_str(inst.name());
    out.push('\n');
    out.push_str(&n.to_string());
    out.push('\n');
    for i in 0..n {
        for j in 0..n {
            if j > 0 {
                out.push(' ');
            }
            out.push_str(&inst.weight(i, j).to_string());
        }
        out.push('\n');
    }
    out
}
