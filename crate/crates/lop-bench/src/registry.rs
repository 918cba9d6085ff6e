//! Best-known-solutions registry for the xLOLIB2 benchmark set, and gap
//! reports of run records against it.
//!
//! Each entry keeps the best fitness known before the long parallel runs
//! that produced this registry (`previous_bks`) and the improved best those
//! runs established (`new_best`), plus the reported mean/worst of the runs
//! behind the record where available.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use crate::records::RunRecord;

const BUNDLED_REGISTRY: &str = include_str!("../data/bks.json");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BksEntry {
    pub previous_bks: i64,
    pub new_best: i64,
    /// Which experiment established `new_best`.
    pub source: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reported_mean: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reported_worst: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BksRegistry {
    entries: BTreeMap<String, BksEntry>,
}

impl BksRegistry {
    /// The registry shipped with this crate.
    pub fn bundled() -> Self {
        let registry: Self =
            serde_json::from_str(BUNDLED_REGISTRY).expect("bundled registry parses");
        registry.validate().expect("bundled registry is consistent");
        registry
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)
            .with_context(|| format!("cannot read registry {}", path.display()))?;
        let registry: Self = serde_json::from_str(&text)
            .with_context(|| format!("malformed registry {}", path.display()))?;
        registry.validate()?;
        Ok(registry)
    }

    /// Every record entry must improve on (or match) what it superseded.
    pub fn validate(&self) -> Result<()> {
        for (name, entry) in &self.entries {
            if entry.new_best < entry.previous_bks {
                bail!(
                    "registry entry {name}: new best {} is below the previous best {}",
                    entry.new_best,
                    entry.previous_bks
                );
            }
        }
        Ok(())
    }

    pub fn get(&self, instance: &str) -> Option<&BksEntry> {
        self.entries.get(instance)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &BksEntry)> {
        self.entries.iter()
    }
}

/// One run compared against the registry. Gaps are relative:
/// `(reference - fitness) / reference`, so 0 means the reference was matched
/// and negative values mean it was beaten.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapRow {
    pub instance: String,
    pub algorithm: String,
    pub seed: u64,
    pub fitness: i64,
    pub gap_previous: f64,
    pub gap_new_best: f64,
    /// True when the run strictly beat the registered best.
    pub new_record: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GapReport {
    pub rows: Vec<GapRow>,
    /// Instance names with no registry entry, in record order, deduplicated.
    pub unmatched: Vec<String>,
}

pub fn gap_to_bks(records: &[RunRecord], registry: &BksRegistry) -> GapReport {
    let mut rows = Vec::new();
    let mut unmatched = Vec::new();
    for record in records {
        match registry.get(&record.instance) {
            Some(entry) => {
                let gap = |reference: i64| (reference - record.fitness) as f64 / reference as f64;
                rows.push(GapRow {
                    instance: record.instance.clone(),
                    algorithm: record.algorithm.clone(),
                    seed: record.seed,
                    fitness: record.fitness,
                    gap_previous: gap(entry.previous_bks),
                    gap_new_best: gap(entry.new_best),
                    new_record: record.fitness > entry.new_best,
                });
            }
            None => {
                if !unmatched.contains(&record.instance) {
                    unmatched.push(record.instance.clone());
                }
            }
        }
    }
    GapReport { rows, unmatched }
}

pub fn render_gap_table(report: &GapReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<24} {:>12} {:>6} {:>14} {:>12} {:>12} {:>7}\n",
        "instance", "algorithm", "seed", "fitness", "gap_prev", "gap_best", "record"
    ));
    for row in &report.rows {
        out.push_str(&format!(
            "{:<24} {:>12} {:>6} {:>14} {:>12.6} {:>12.6} {:>7}\n",
            row.instance,
            row.algorithm,
            row.seed,
            row.fitness,
            row.gap_previous,
            row.gap_new_best,
            if row.new_record { "yes" } else { "no" }
        ));
    }
    if !report.unmatched.is_empty() {
        out.push_str("unmatched instances:\n");
        for name in &report.unmatched {
            out.push_str(&format!("  {name}\n"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(instance: &str, fitness: i64) -> RunRecord {
        RunRecord {
            instance: instance.into(),
            algorithm: "ma-edm-ei".into(),
            seed: 0,
            fitness,
            generations: 1,
            wall_seconds: 0.0,
        }
    }

    #[test]
    fn bundled_registry_loads_and_validates() {
        let registry = BksRegistry::bundled();
        assert_eq!(registry.len(), 18);
        for (_, entry) in registry.iter() {
            assert!(entry.new_best >= entry.previous_bks);
        }
    }

    #[test]
    fn gap_is_zero_at_the_registered_best() {
        let registry = BksRegistry::bundled();
        let best = registry.get("N-be75eec_500").unwrap().new_best;
        let report = gap_to_bks(&[record("N-be75eec_500", best)], &registry);
        let row = &report.rows[0];
        assert_eq!(row.gap_new_best, 0.0);
        assert!(!row.new_record);
        assert!(row.gap_previous < 0.0, "beating the previous best gives a negative gap");
    }

    #[test]
    fn matching_the_previous_best_keeps_a_positive_gap_to_the_new_one() {
        let registry = BksRegistry::bundled();
        let entry = registry.get("N-t70b11xx_1000").unwrap();
        assert_eq!(entry.previous_bks, 314603886);
        assert_eq!(entry.new_best, 314989031);
        let report = gap_to_bks(&[record("N-t70b11xx_1000", entry.previous_bks)], &registry);
        let row = &report.rows[0];
        assert_eq!(row.gap_previous, 0.0);
        assert!(row.gap_new_best > 0.0);
        assert!(!row.new_record);
    }

    #[test]
    fn beating_the_best_flags_a_record() {
        let registry = BksRegistry::bundled();
        let best = registry.get("N-usa79_750").unwrap().new_best;
        let report = gap_to_bks(&[record("N-usa79_750", best + 1)], &registry);
        assert!(report.rows[0].new_record);
    }

    #[test]
    fn unknown_instances_land_in_the_unmatched_section() {
        let registry = BksRegistry::bundled();
        let report = gap_to_bks(
            &[record("no-such-instance", 1), record("no-such-instance", 2)],
            &registry,
        );
        assert!(report.rows.is_empty());
        assert_eq!(report.unmatched, vec!["no-such-instance".to_string()]);
    }

    /// The new best is the higher bar, so for positive fitness the relative
    /// shortfall against it is at least the shortfall against the previous
    /// best.
    #[test]
    fn gap_ordering_holds_for_every_entry() {
        let registry = BksRegistry::bundled();
        let records: Vec<RunRecord> = registry
            .iter()
            .map(|(name, entry)| record(name, entry.previous_bks / 2))
            .collect();
        let report = gap_to_bks(&records, &registry);
        assert_eq!(report.rows.len(), 18);
        for row in &report.rows {
            assert!(row.gap_new_best >= row.gap_previous);
        }
    }
}
