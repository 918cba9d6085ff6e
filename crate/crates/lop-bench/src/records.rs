//! Per-run result records and their on-disk formats.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

/// One row per run. The CSV header is exactly
/// `instance,algorithm,seed,fitness,generations,wall_seconds`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub instance: String,
    pub algorithm: String,
    pub seed: u64,
    pub fitness: i64,
    pub generations: u64,
    pub wall_seconds: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordFormat {
    Csv,
    Json,
}

pub fn write_records(path: &Path, format: RecordFormat, records: &[RunRecord]) -> Result<()> {
    match format {
        RecordFormat::Csv => {
            let mut writer = csv::Writer::from_path(path)
                .with_context(|| format!("cannot write {}", path.display()))?;
            for record in records {
                writer.serialize(record)?;
            }
            writer.flush()?;
        }
        RecordFormat::Json => {
            let file = File::create(path)
                .with_context(|| format!("cannot write {}", path.display()))?;
            let mut writer = BufWriter::new(file);
            serde_json::to_writer_pretty(&mut writer, records)?;
            writer.write_all(b"\n")?;
            writer.flush()?;
        }
    }
    Ok(())
}

pub fn read_records(path: &Path, format: RecordFormat) -> Result<Vec<RunRecord>> {
    match format {
        RecordFormat::Csv => {
            let mut reader = csv::Reader::from_path(path)
                .with_context(|| format!("cannot read {}", path.display()))?;
            let mut records = Vec::new();
            for row in reader.deserialize() {
                records.push(row?);
            }
            Ok(records)
        }
        RecordFormat::Json => {
            let file = File::open(path)
                .with_context(|| format!("cannot read {}", path.display()))?;
            Ok(serde_json::from_reader(BufReader::new(file))?)
        }
    }
}

/// Loads records, insisting the file holds at least one.
pub fn read_records_non_empty(path: &Path, format: RecordFormat) -> Result<Vec<RunRecord>> {
    let records = read_records(path, format)?;
    if records.is_empty() {
        bail!("{} contains no run records", path.display());
    }
    Ok(records)
}
