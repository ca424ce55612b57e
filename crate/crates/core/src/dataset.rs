//! Dataset records, CSV/JSON loading and saving, and batch analysis.
//!
//! A dataset is a list of two-state concept records. Each record carries its
//! identity (id, entity count, concept and state labels) plus an occupancy
//! count vector. The CSV layout is ragged: a fixed five-column prefix
//! followed by `N + 1` count fields `c0..cN`, so rows with different `N`
//! have different widths. The JSON layout mirrors the same data but keeps
//! counts as an index map, which also round-trips masked vectors.

use std::collections::BTreeMap;
use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::estimation::{fit_with, CountVector, FitOptions, FitResult};
use crate::occupancy::StatsKind;
use crate::selection::{compare, ModelComparison, Thresholds};

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("record {id}: {message}")]
    Record { id: u32, message: String },
    #[error("{} record(s) rejected:\n{}", .0.len(), .0.join("\n"))]
    Records(Vec<String>),
    #[error("dataset has no records")]
    Empty,
    #[error("no record with id {0}")]
    UnknownId(u32),
    #[error("unsupported dataset extension {0:?} (expected .csv or .json)")]
    UnknownFormat(String),
}

/// Identity and labeling of one two-state concept record.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConceptSpec {
    pub id: u32,
    /// Number of entities instantiating the concept.
    pub total: u32,
    pub concept: String,
    pub state1: String,
    pub state2: String,
}

impl ConceptSpec {
    pub fn new(
        id: u32,
        total: u32,
        concept: impl Into<String>,
        state1: impl Into<String>,
        state2: impl Into<String>,
    ) -> Result<Self, DatasetError> {
        let spec = ConceptSpec {
            id,
            total,
            concept: concept.into(),
            state1: state1.into(),
            state2: state2.into(),
        };
        match spec.validate() {
            Ok(()) => Ok(spec),
            Err(message) => Err(DatasetError::Record { id, message }),
        }
    }

    fn validate(&self) -> Result<(), String> {
        if self.total == 0 {
            return Err("entity count N must be at least 1".into());
        }
        for (field, value) in [
            ("concept", &self.concept),
            ("state1", &self.state1),
            ("state2", &self.state2),
        ] {
            if value.trim().is_empty() {
                return Err(format!("{field} label is empty"));
            }
        }
        if self.state1 == self.state2 {
            return Err(format!("state labels must differ, both are {:?}", self.state1));
        }
        Ok(())
    }
}

/// One concept record: its spec plus the observed occupancy counts.
#[derive(Clone, Debug, PartialEq)]
pub struct DatasetRecord {
    pub spec: ConceptSpec,
    pub counts: CountVector<f64>,
}

/// Serialized form of a record in JSON datasets. Counts are keyed by
/// occupancy index so masked vectors survive a round trip.
#[derive(Serialize, Deserialize)]
struct JsonRecord {
    id: u32,
    #[serde(rename = "N")]
    total: u32,
    concept: String,
    state1: String,
    state2: String,
    counts: BTreeMap<u32, f64>,
}

impl From<&DatasetRecord> for JsonRecord {
    fn from(record: &DatasetRecord) -> Self {
        JsonRecord {
            id: record.spec.id,
            total: record.spec.total,
            concept: record.spec.concept.clone(),
            state1: record.spec.state1.clone(),
            state2: record.spec.state2.clone(),
            counts: record.counts.iter().collect(),
        }
    }
}

impl JsonRecord {
    fn into_record(self) -> Result<DatasetRecord, String> {
        let spec = ConceptSpec::new(self.id, self.total, self.concept, self.state1, self.state2)
            .map_err(|e| e.to_string())?;
        let counts = CountVector::new(self.total, self.counts)
            .map_err(|e| format!("record {}: {e}", spec.id))?;
        Ok(DatasetRecord { spec, counts })
    }
}

/// Loads a dataset, inferring the format from the file extension.
pub fn load_dataset(path: impl AsRef<Path>) -> Result<Vec<DatasetRecord>, DatasetError> {
    let path = path.as_ref();
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase);
    match ext.as_deref() {
        Some("csv") => read_csv(fs::File::open(path)?),
        Some("json") => read_json(fs::File::open(path)?),
        other => Err(DatasetError::UnknownFormat(other.unwrap_or("").to_string())),
    }
}

/// Saves a dataset next to `load_dataset`, again picking the format by extension.
pub fn save_dataset(records: &[DatasetRecord], path: impl AsRef<Path>) -> Result<(), DatasetError> {
    let path = path.as_ref();
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase);
    match ext.as_deref() {
        Some("csv") => write_csv(records, fs::File::create(path)?),
        Some("json") => write_json(records, fs::File::create(path)?),
        other => Err(DatasetError::UnknownFormat(other.unwrap_or("").to_string())),
    }
}

const CSV_PREFIX: [&str; 5] = ["id", "N", "concept", "state1", "state2"];

/// Reads the ragged CSV layout. The whole file is validated; per-record
/// problems are collected and reported together.
pub fn read_csv<R: Read>(reader: R) -> Result<Vec<DatasetRecord>, DatasetError> {
    let mut rdr = csv::ReaderBuilder::new()
        .flexible(true)
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut rows = rdr.records();
    let header = match rows.next() {
        Some(row) => row?,
        None => return Err(DatasetError::Empty),
    };
    for (i, name) in CSV_PREFIX.iter().enumerate() {
        if header.get(i) != Some(*name) {
            return Err(DatasetError::Parse {
                line: 1,
                message: format!(
                    "header column {} must be {name:?}, got {:?}",
                    i + 1,
                    header.get(i).unwrap_or("")
                ),
            });
        }
    }
    let mut records = Vec::new();
    let mut issues = Vec::new();
    for row in rows {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        match parse_csv_row(&row) {
            Ok(record) => records.push(record),
            Err(message) => issues.push(format!("line {line}: {message}")),
        }
    }
    if !issues.is_empty() {
        return Err(DatasetError::Records(issues));
    }
    if records.is_empty() {
        return Err(DatasetError::Empty);
    }
    Ok(records)
}

fn parse_csv_row(row: &csv::StringRecord) -> Result<DatasetRecord, String> {
    if row.len() < CSV_PREFIX.len() + 1 {
        return Err(format!(
            "expected at least {} fields, got {}",
            CSV_PREFIX.len() + 1,
            row.len()
        ));
    }
    let id: u32 = row[0]
        .parse()
        .map_err(|_| format!("id {:?} is not a non-negative integer", &row[0]))?;
    let total: u32 = row[1]
        .parse()
        .map_err(|_| format!("record {id}: N {:?} is not a non-negative integer", &row[1]))?;
    let spec = ConceptSpec::new(id, total, &row[2], &row[3], &row[4]).map_err(|e| e.to_string())?;
    let expected = total as usize + 1;
    let got = row.len() - CSV_PREFIX.len();
    if got != expected {
        return Err(format!(
            "record {id}: N = {total} needs {expected} count fields c0..c{total}, got {got}"
        ));
    }
    let mut counts = Vec::with_capacity(expected);
    for (i, raw) in row.iter().skip(CSV_PREFIX.len()).enumerate() {
        let value: f64 = raw
            .parse()
            .map_err(|_| format!("record {id}: count c{i} = {raw:?} is not a number"))?;
        counts.push(value);
    }
    let counts =
        CountVector::from_counts(total, &counts).map_err(|e| format!("record {id}: {e}"))?;
    Ok(DatasetRecord { spec, counts })
}

/// Writes the ragged CSV layout. The header is sized to the widest record;
/// masked vectors have no CSV representation and are rejected.
pub fn write_csv<W: Write>(records: &[DatasetRecord], writer: W) -> Result<(), DatasetError> {
    let mut wtr = csv::WriterBuilder::new().flexible(true).from_writer(writer);
    let widest = records.iter().map(|r| r.spec.total).max().unwrap_or(0);
    let mut header: Vec<String> = CSV_PREFIX.iter().map(|s| s.to_string()).collect();
    header.extend((0..=widest).map(|n| format!("c{n}")));
    wtr.write_record(&header)?;
    for record in records {
        if !record.counts.is_full_range() {
            return Err(DatasetError::Record {
                id: record.spec.id,
                message: "masked count vector cannot be written as CSV; use JSON".into(),
            });
        }
        let mut row = vec![
            record.spec.id.to_string(),
            record.spec.total.to_string(),
            record.spec.concept.clone(),
            record.spec.state1.clone(),
            record.spec.state2.clone(),
        ];
        row.extend(record.counts.iter().map(|(_, c)| format!("{c}")));
        wtr.write_record(&row)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_json<R: Read>(reader: R) -> Result<Vec<DatasetRecord>, DatasetError> {
    let raw: Vec<JsonRecord> = serde_json::from_reader(reader)?;
    let mut records = Vec::new();
    let mut issues = Vec::new();
    for entry in raw {
        match entry.into_record() {
            Ok(record) => records.push(record),
            Err(message) => issues.push(message),
        }
    }
    if !issues.is_empty() {
        return Err(DatasetError::Records(issues));
    }
    if records.is_empty() {
        return Err(DatasetError::Empty);
    }
    Ok(records)
}

pub fn write_json<W: Write>(records: &[DatasetRecord], mut writer: W) -> Result<(), DatasetError> {
    let raw: Vec<JsonRecord> = records.iter().map(JsonRecord::from).collect();
    serde_json::to_writer_pretty(&mut writer, &raw)?;
    writer.write_all(b"\n")?;
    Ok(())
}

/// Knobs for a batch analysis pass.
#[derive(Clone, Copy, Debug, Default)]
pub struct AnalysisOptions {
    pub thresholds: Thresholds<f64>,
    pub fit: FitOptions,
    /// Inclusive occupancy-index window applied to every record before fitting.
    pub mask: Option<(u32, u32)>,
}

/// One analyzed record: both family fits plus their comparison.
#[derive(Clone, Debug)]
pub struct AnalysisRow {
    pub spec: ConceptSpec,
    /// The counts the fits actually used (after any masking).
    pub counts: CountVector<f64>,
    pub fit_mb: FitResult<f64>,
    pub fit_be: FitResult<f64>,
    pub comparison: ModelComparison<f64>,
}

#[derive(Debug)]
pub struct RecordFailure {
    pub id: u32,
    pub error: DatasetError,
}

/// Outcome of a batch analysis. Records that cannot be fitted are collected
/// as failures rather than aborting the run.
#[derive(Debug)]
pub struct AnalysisRun {
    pub rows: Vec<AnalysisRow>,
    pub failures: Vec<RecordFailure>,
}

pub fn analyze(
    records: &[DatasetRecord],
    options: &AnalysisOptions,
) -> Result<AnalysisRun, DatasetError> {
    if records.is_empty() {
        return Err(DatasetError::Empty);
    }
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for record in records {
        match analyze_record(record, options) {
            Ok(row) => rows.push(row),
            Err(error) => failures.push(RecordFailure {
                id: record.spec.id,
                error,
            }),
        }
    }
    Ok(AnalysisRun { rows, failures })
}

pub fn analyze_record(
    record: &DatasetRecord,
    options: &AnalysisOptions,
) -> Result<AnalysisRow, DatasetError> {
    let id = record.spec.id;
    let counts = match options.mask {
        Some((lo, hi)) => record.counts.masked(lo, hi).map_err(|e| DatasetError::Record {
            id,
            message: e.to_string(),
        })?,
        None => record.counts.clone(),
    };
    let fit_mb = fit_with(&counts, StatsKind::MB, options.fit);
    let fit_be = fit_with(&counts, StatsKind::BE, options.fit);
    let comparison =
        compare(&fit_mb, &fit_be, options.thresholds).expect("both fits share one count vector");
    Ok(AnalysisRow {
        spec: record.spec.clone(),
        counts,
        fit_mb,
        fit_be,
        comparison,
    })
}

/// Finds one record by id.
pub fn record_by_id(records: &[DatasetRecord], id: u32) -> Result<&DatasetRecord, DatasetError> {
    records
        .iter()
        .find(|r| r.spec.id == id)
        .ok_or(DatasetError::UnknownId(id))
}
