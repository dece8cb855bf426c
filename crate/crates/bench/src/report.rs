//! Run report serialization: one JSON document per run, a failure list,
//! and a rendered method × split table.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::runner::RunOutcome;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportItem {
    pub id: String,
    pub sem: u8,
    pub f1: f64,
    pub predicted: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitReport {
    pub n: usize,
    /// Mean × 100, unrounded; rounding happens only in the rendered table.
    pub sem_pct: f64,
    pub f1_pct: f64,
    pub per_item: Vec<ReportItem>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFailure {
    pub id: String,
    pub stage: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub method: String,
    pub method_label: String,
    pub model_id: String,
    pub n: usize,
    pub per_split: BTreeMap<String, SplitReport>,
    pub failures: Vec<ReportFailure>,
}

impl RunReport {
    pub fn from_outcome(outcome: &RunOutcome) -> Self {
        let per_split = outcome
            .per_split
            .iter()
            .map(|(split, report)| {
                (
                    split.clone(),
                    SplitReport {
                        n: report.n,
                        sem_pct: report.sem_pct,
                        f1_pct: report.f1_pct,
                        per_item: report
                            .per_item
                            .iter()
                            .map(|item| ReportItem {
                                id: item.id.clone(),
                                sem: item.score.sem,
                                f1: item.score.f1,
                                predicted: item.predicted.entities().to_vec(),
                            })
                            .collect(),
                    },
                )
            })
            .collect();
        RunReport {
            method: outcome.method.cli_name().to_string(),
            method_label: outcome.method.display_label(),
            model_id: outcome.model_id.clone(),
            n: outcome.n,
            per_split,
            failures: outcome
                .failures
                .iter()
                .map(|f| ReportFailure {
                    id: f.id.clone(),
                    stage: f.stage.to_string(),
                    reason: f.reason.clone(),
                })
                .collect(),
        }
    }
}

/// Method × split table with SEM/F1 columns, two-decimal display scale.
pub fn render_table(reports: &[RunReport]) -> String {
    let mut splits: Vec<&String> = reports
        .iter()
        .flat_map(|r| r.per_split.keys())
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    splits.sort();

    let mut header = vec!["Method".to_string()];
    for split in &splits {
        header.push(format!("{split} SEM"));
        header.push(format!("{split} F1"));
    }

    let mut rows = vec![header];
    for report in reports {
        let mut row = vec![report.method_label.clone()];
        for split in &splits {
            match report.per_split.get(split.as_str()) {
                Some(s) => {
                    row.push(format!("{:.2}", s.sem_pct));
                    row.push(format!("{:.2}", s.f1_pct));
                }
                None => {
                    row.push("-".to_string());
                    row.push("-".to_string());
                }
            }
        }
        rows.push(row);
    }

    let cols = rows[0].len();
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().map(|r| r[c].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for (i, row) in rows.iter().enumerate() {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(cell, w)| format!("{cell:<w$}"))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
        if i == 0 {
            let total = widths.iter().sum::<usize>() + 2 * (cols - 1);
            out.push_str(&"-".repeat(total));
            out.push('\n');
        }
    }
    out
}

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("report is not valid json: {0}")]
    Json(#[from] serde_json::Error),
}

pub struct EmittedFiles {
    pub report: PathBuf,
    pub failures: PathBuf,
    pub table: PathBuf,
}

/// Write report.json, failures.json, and table.txt under `out_dir`
/// (created if absent). Output is deterministic for a given report.
pub fn emit_report(report: &RunReport, out_dir: &Path) -> Result<EmittedFiles, ReportError> {
    fs::create_dir_all(out_dir)?;
    let files = EmittedFiles {
        report: out_dir.join("report.json"),
        failures: out_dir.join("failures.json"),
        table: out_dir.join("table.txt"),
    };
    fs::write(
        &files.report,
        serde_json::to_string_pretty(report)? + "\n",
    )?;
    fs::write(
        &files.failures,
        serde_json::to_string_pretty(&report.failures)? + "\n",
    )?;
    fs::write(&files.table, render_table(std::slice::from_ref(report)))?;
    Ok(files)
}

pub fn load_report(path: &Path) -> Result<RunReport, ReportError> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}
