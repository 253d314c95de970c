//! Stable report formats for classification sweeps.
//!
//! A JSON report is `{"schema": 1, "summary": {...}, "records": [...]}` with
//! records sorted by partition. Nothing time-dependent is stored in it;
//! per-record timings go to a separate sidecar file so that reports are
//! byte-identical across runs and worker counts.

pub mod cache;
pub mod checks;

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::affine::fuse;
use crate::classify::{ClassifyError, SweepItem, Witness};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("unsupported report schema {0}")]
    Schema(u32),
    #[error("bad CSV field {field}: {reason}")]
    CsvField { field: &'static str, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub p: u32,
    pub partition_rgs: String,
    pub rank: usize,
    pub valencies: Vec<u32>,
    pub lambda: Vec<usize>,
    pub primitive: bool,
    pub pseudocyclic: bool,
    /// `None` when the automorphism search ran out of budget.
    pub schurian: Option<bool>,
    /// Decimal string; the orders overflow every JSON number type.
    pub aut_order: Option<String>,
    pub verdict: String,
    pub labels: Vec<String>,
    pub witness: Witness,
    pub error: Option<String>,
}

impl ReportRecord {
    pub fn from_item(p: u32, item: &SweepItem) -> ReportRecord {
        match &item.result {
            Ok(r) => ReportRecord {
                p,
                partition_rgs: r.partition.to_text(),
                rank: r.rank,
                valencies: r.valencies.clone(),
                lambda: r.lambda.clone(),
                primitive: r.flags.primitive,
                pseudocyclic: r.flags.pseudocyclic,
                schurian: r.flags.schurian,
                aut_order: r.flags.aut_order.as_ref().map(|o| o.to_string()),
                verdict: r.verdict.to_string(),
                labels: r.flags.labels.iter().map(|v| v.to_string()).collect(),
                witness: r.witness.clone(),
                error: None,
            },
            Err(e) => {
                let rec = fuse(p, &item.partition).ok();
                let verdict = match e {
                    ClassifyError::UnclassifiableSchurian(_) => "UnclassifiableSchurian",
                    _ => "Error",
                };
                ReportRecord {
                    p,
                    partition_rgs: item.partition.to_text(),
                    rank: rec.as_ref().map_or(0, |r| r.scheme.rank()),
                    valencies: rec.as_ref().map_or_else(Vec::new, |r| r.valencies.clone()),
                    lambda: rec
                        .as_ref()
                        .map_or_else(Vec::new, |r| r.lambda.iter().copied().collect()),
                    primitive: false,
                    pseudocyclic: false,
                    schurian: matches!(e, ClassifyError::UnclassifiableSchurian(_)).then_some(true),
                    aut_order: None,
                    verdict: verdict.to_string(),
                    labels: Vec::new(),
                    witness: Witness::None,
                    error: Some(e.to_string()),
                }
            }
        }
    }

    pub fn is_failure(&self) -> bool {
        self.error.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub p: u32,
    pub total: usize,
    pub counts_by_verdict: BTreeMap<String, usize>,
    /// `"<rgs>: <message>"` for each record that carries an error.
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub summary: Summary,
    pub records: Vec<ReportRecord>,
}

impl Report {
    /// Builds a report; records are sorted by partition text, which is the
    /// canonical order.
    pub fn new(p: u32, mut records: Vec<ReportRecord>) -> Report {
        records.sort_by(|a, b| a.partition_rgs.cmp(&b.partition_rgs));
        let mut counts_by_verdict = BTreeMap::new();
        for r in &records {
            *counts_by_verdict.entry(r.verdict.clone()).or_insert(0) += 1;
        }
        let failures = records
            .iter()
            .filter_map(|r| {
                r.error
                    .as_ref()
                    .map(|e| format!("{}: {e}", r.partition_rgs))
            })
            .collect();
        Report {
            schema: SCHEMA_VERSION,
            summary: Summary {
                p,
                total: records.len(),
                counts_by_verdict,
                failures,
            },
            records,
        }
    }

    pub fn from_sweep(p: u32, items: &[SweepItem]) -> Report {
        Report::new(p, items.iter().map(|i| ReportRecord::from_item(p, i)).collect())
    }

    pub fn has_failures(&self) -> bool {
        !self.summary.failures.is_empty()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Report, ReportError> {
        let report: Report = serde_json::from_str(text)?;
        if report.schema != SCHEMA_VERSION {
            return Err(ReportError::Schema(report.schema));
        }
        Ok(report)
    }

    /// Hex SHA-256 of the JSON form.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.to_json().as_bytes()))
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct CsvRow {
    p: u32,
    partition_rgs: String,
    rank: usize,
    valencies: String,
    lambda: String,
    primitive: bool,
    pseudocyclic: bool,
    schurian: String,
    aut_order: String,
    verdict: String,
    labels: String,
    witness: String,
    error: String,
}

fn json_field<T: for<'de> Deserialize<'de>>(field: &'static str, text: &str) -> Result<T, ReportError> {
    serde_json::from_str(text).map_err(|e| ReportError::CsvField {
        field,
        reason: e.to_string(),
    })
}

/// One header row, every field quoted; list and witness columns hold JSON.
pub fn records_to_csv(records: &[ReportRecord]) -> Result<String, ReportError> {
    let mut w = csv::WriterBuilder::new()
        .quote_style(csv::QuoteStyle::Always)
        .from_writer(Vec::new());
    for r in records {
        w.serialize(CsvRow {
            p: r.p,
            partition_rgs: r.partition_rgs.clone(),
            rank: r.rank,
            valencies: serde_json::to_string(&r.valencies)?,
            lambda: serde_json::to_string(&r.lambda)?,
            primitive: r.primitive,
            pseudocyclic: r.pseudocyclic,
            schurian: r.schurian.map_or(String::new(), |s| s.to_string()),
            aut_order: r.aut_order.clone().unwrap_or_default(),
            verdict: r.verdict.clone(),
            labels: serde_json::to_string(&r.labels)?,
            witness: serde_json::to_string(&r.witness)?,
            error: r.error.clone().unwrap_or_default(),
        })?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("CSV of UTF-8 fields"))
}

pub fn records_from_csv(text: &str) -> Result<Vec<ReportRecord>, ReportError> {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let mut out = Vec::new();
    for row in rd.deserialize() {
        let row: CsvRow = row?;
        let schurian = match row.schurian.as_str() {
            "" => None,
            "true" => Some(true),
            "false" => Some(false),
            other => {
                return Err(ReportError::CsvField {
                    field: "schurian",
                    reason: other.to_string(),
                })
            }
        };
        out.push(ReportRecord {
            p: row.p,
            partition_rgs: row.partition_rgs,
            rank: row.rank,
            valencies: json_field("valencies", &row.valencies)?,
            lambda: json_field("lambda", &row.lambda)?,
            primitive: row.primitive,
            pseudocyclic: row.pseudocyclic,
            schurian,
            aut_order: (!row.aut_order.is_empty()).then_some(row.aut_order),
            verdict: row.verdict,
            labels: json_field("labels", &row.labels)?,
            witness: json_field("witness", &row.witness)?,
            error: (!row.error.is_empty()).then_some(row.error),
        });
    }
    Ok(out)
}

/// Per-record timings, kept out of the report itself.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Timings {
    pub p: u32,
    pub jobs: usize,
    pub total_ms: f64,
    pub elapsed_ms: BTreeMap<String, f64>,
}

impl Timings {
    pub fn from_sweep(p: u32, jobs: usize, total_ms: f64, items: &[SweepItem]) -> Timings {
        Timings {
            p,
            jobs,
            total_ms,
            elapsed_ms: items
                .iter()
                .map(|i| (i.partition.to_text(), i.elapsed_ms))
                .collect(),
        }
    }
}

/// Sidecar path for the timings of a report written to `out`.
pub fn timings_path(out: &Path) -> std::path::PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".timing.json");
    out.with_file_name(name)
}

/// Writes `contents` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, contents: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::Classifier;

    #[test]
    fn json_and_csv_round_trip() {
        let items = Classifier::new().sweep(3, None, 1).unwrap();
        let report = Report::from_sweep(3, &items);
        assert_eq!(report.summary.total, 15);
        assert!(!report.has_failures());
        let back = Report::from_json(&report.to_json()).unwrap();
        assert_eq!(back, report);
        assert_eq!(back.to_json(), report.to_json());

        let csv = records_to_csv(&report.records).unwrap();
        assert!(csv.lines().nth(1).unwrap().contains("\"0000\""));
        assert_eq!(records_from_csv(&csv).unwrap(), report.records);
    }

    #[test]
    fn schema_is_checked() {
        let bad = r#"{"schema": 2, "summary": {"p": 3, "total": 0, "counts_by_verdict": {}, "failures": []}, "records": []}"#;
        assert!(matches!(Report::from_json(bad), Err(ReportError::Schema(2))));
    }

    #[test]
    fn sidecar_name() {
        assert_eq!(
            timings_path(Path::new("out/report.json")),
            Path::new("out/report.json.timing.json")
        );
    }
}
