//! Mean/best/worst aggregation of run records.

use std::collections::BTreeMap;

use anyhow::{bail, Result};
use serde::Serialize;

use crate::records::RunRecord;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SummaryRow {
    pub instance: String,
    pub algorithm: String,
    pub runs: usize,
    pub mean: f64,
    pub best: i64,
    pub worst: i64,
}

/// Groups records by (instance, algorithm) and reduces each group to its
/// mean, best and worst fitness. Groups come out in name order.
pub fn summarize(records: &[RunRecord]) -> Result<Vec<SummaryRow>> {
    if records.is_empty() {
        bail!("no run records to summarize");
    }
    let mut groups: BTreeMap<(String, String), Vec<i64>> = BTreeMap::new();
    for record in records {
        groups
            .entry((record.instance.clone(), record.algorithm.clone()))
            .or_default()
            .push(record.fitness);
    }
    Ok(groups
        .into_iter()
        .map(|((instance, algorithm), fits)| {
            let sum: i64 = fits.iter().sum();
            SummaryRow {
                instance,
                algorithm,
                runs: fits.len(),
                mean: sum as f64 / fits.len() as f64,
                best: *fits.iter().max().expect("group is non-empty"),
                worst: *fits.iter().min().expect("group is non-empty"),
            }
        })
        .collect())
}

/// Plain-text table; means are shown with two decimals.
pub fn render_table(rows: &[SummaryRow]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<24} {:>12} {:>6} {:>16} {:>14} {:>14}\n",
        "instance", "algorithm", "runs", "mean", "best", "worst"
    ));
    for row in rows {
        out.push_str(&format!(
            "{:<24} {:>12} {:>6} {:>16.2} {:>14} {:>14}\n",
            row.instance, row.algorithm, row.runs, row.mean, row.best, row.worst
        ));
    }
    out
}
