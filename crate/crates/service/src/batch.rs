//! Batch evaluation: one identifier per line, one report per identifier and
//! a summary CSV.

use std::path::{Path, PathBuf};

use fair_assess_core::exec::map_slice;
use fair_assess_core::{Evaluator, PrincipleGroup};
use serde::Serialize;

use crate::error::{AppError, ErrorClass};
use crate::report::{render, ReportFormat};
use crate::response::AssessmentResponse;

/// Identifiers from a list file; blank lines and `#` comments are skipped.
pub fn read_ids(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_string)
        .collect()
}

/// File stem for an identifier's report.
pub fn report_stem(id: &str) -> String {
    let s: String = id
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '.' {
                c
            } else {
                '_'
            }
        })
        .collect();
    let s = s.trim_matches('.').to_string();
    if s.is_empty() {
        "_".into()
    } else {
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub id: String,
    pub status: &'static str,
    pub total: Option<f64>,
    #[serde(rename = "F")]
    pub f: Option<f64>,
    #[serde(rename = "A")]
    pub a: Option<f64>,
    #[serde(rename = "I")]
    pub i: Option<f64>,
    #[serde(rename = "R")]
    pub r: Option<f64>,
    pub report: Option<String>,
    pub error: Option<String>,
}

#[derive(Debug)]
pub struct BatchOutcome {
    pub rows: Vec<SummaryRow>,
}

impl BatchOutcome {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.status != "ok").count()
    }
}

pub struct BatchJob<'a> {
    pub evaluator: &'a Evaluator,
    pub plugin: &'a str,
    pub lang: &'a str,
    pub pass_threshold: f64,
    pub format: ReportFormat,
    pub out_dir: &'a Path,
}

impl BatchJob<'_> {
    /// Evaluates every id (in parallel when the evaluator allows it) and
    /// writes reports plus `summary.csv`. Per-id failures are recorded, not
    /// propagated; only unknown plugins and I/O errors abort the batch.
    pub fn run(&self, ids: &[String]) -> Result<BatchOutcome, AppError> {
        let registry = self.evaluator.registry_for(self.plugin)?.clone();
        std::fs::create_dir_all(self.out_dir).map_err(io_err(self.out_dir))?;
        let rows = map_slice(self.evaluator.mode(), ids, |id| {
            match self.evaluator.evaluate(id, self.plugin, self.lang) {
                Ok(a) => {
                    let resp = AssessmentResponse::new(&a, &registry, self.pass_threshold);
                    let name = format!("{}.{}", report_stem(id), self.format.extension());
                    let path: PathBuf = self.out_dir.join(&name);
                    if let Err(e) = std::fs::write(&path, render(&resp, self.format)) {
                        return failed(id, format!("{}: {e}", path.display()));
                    }
                    let g = |p| {
                        resp.group_scores
                            .get(&String::from(PrincipleGroup::letter(p)))
                            .copied()
                    };
                    SummaryRow {
                        id: id.clone(),
                        status: "ok",
                        total: Some(resp.total_score),
                        f: g(PrincipleGroup::F),
                        a: g(PrincipleGroup::A),
                        i: g(PrincipleGroup::I),
                        r: g(PrincipleGroup::R),
                        report: Some(name),
                        error: None,
                    }
                }
                Err(e) => failed(id, e.to_string()),
            }
        });
        let summary = self.out_dir.join("summary.csv");
        let mut w = csv::Writer::from_path(&summary).map_err(|e| {
            AppError::new(ErrorClass::Config, format!("{}: {e}", summary.display()))
        })?;
        for row in &rows {
            w.serialize(row)
                .map_err(|e| AppError::new(ErrorClass::Internal, e.to_string()))?;
        }
        w.flush().map_err(io_err(&summary))?;
        Ok(BatchOutcome { rows })
    }
}

fn failed(id: &str, error: String) -> SummaryRow {
    SummaryRow {
        id: id.to_string(),
        status: "error",
        total: None,
        f: None,
        a: None,
        i: None,
        r: None,
        report: None,
        error: Some(error),
    }
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> AppError + '_ {
    move |e| AppError::new(ErrorClass::Config, format!("{}: {e}", path.display()))
}
