//! Output emission: columnar frame files, structured-text reports, the
//! machine-readable summary, and the aggregate report document.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

use dualcav_core::{CheckStatus, FieldFrame, VerificationReport};

/// One machine-readable summary record per check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SummaryRecord {
    pub name: String,
    pub residual: f64,
    pub tolerance: Option<f64>,
    pub pass: Option<bool>,
}

impl SummaryRecord {
    pub fn from_report(report: &VerificationReport) -> Self {
        Self {
            name: report.check.clone(),
            residual: report.worst_residual(),
            tolerance: (!report.tolerance.is_nan()).then_some(report.tolerance),
            pass: match report.status {
                CheckStatus::Pass => Some(true),
                CheckStatus::Fail => Some(false),
                CheckStatus::NotApplicable => None,
            },
        }
    }
}

fn sanitize(name: &str) -> String {
    name.replace(['/', ' '], "_")
}

/// Write one `<check>.report.txt` per report plus `summary.jsonl`.
pub fn write_reports(reports: &[VerificationReport], out_dir: &Path) -> Result<()> {
    fs::create_dir_all(out_dir)
        .with_context(|| format!("cannot create output directory {}", out_dir.display()))?;
    let mut summary = String::new();
    for report in reports {
        let path = out_dir.join(format!("{}.report.txt", sanitize(&report.check)));
        fs::write(&path, report.to_text())
            .with_context(|| format!("cannot write {}", path.display()))?;
        let record = SummaryRecord::from_report(report);
        summary.push_str(&serde_json::to_string(&record)?);
        summary.push('\n');
    }
    let path = out_dir.join("summary.jsonl");
    fs::write(&path, summary).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

/// Write a stack of frames for one construction into a single columnar
/// file, one block per time sample.
pub fn write_frames(name: &str, frames: &[FieldFrame], out_dir: &Path) -> Result<()> {
    fs::create_dir_all(out_dir)
        .with_context(|| format!("cannot create output directory {}", out_dir.display()))?;
    let mut text = String::new();
    for frame in frames {
        text.push_str(&frame.to_columnar());
        text.push('\n');
    }
    let path = out_dir.join(format!("frames_{}.dat", sanitize(name)));
    fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

/// Aggregate previously emitted outputs into one `report.txt`.
pub fn aggregate(out_dir: &Path) -> Result<String> {
    let summary_path = out_dir.join("summary.jsonl");
    let summary_text = fs::read_to_string(&summary_path).with_context(|| {
        format!(
            "no summary at {} (run verify first)",
            summary_path.display()
        )
    })?;
    let mut doc = String::from("verification summary\n====================\n");
    let mut records: Vec<SummaryRecord> = Vec::new();
    for line in summary_text.lines() {
        if line.trim().is_empty() {
            continue;
        }
        records.push(serde_json::from_str(line).context("malformed summary record")?);
    }
    for record in &records {
        let outcome = match record.pass {
            Some(true) => "pass",
            Some(false) => "FAIL",
            None => "measured",
        };
        let tolerance = record
            .tolerance
            .map_or("n/a".to_string(), |t| format!("{t:.3e}"));
        doc.push_str(&format!(
            "{:<34} residual {:>12.5e}  tolerance {:>9}  {}\n",
            record.name, record.residual, tolerance, outcome
        ));
    }
    let failed = records.iter().filter(|r| r.pass == Some(false)).count();
    doc.push_str(&format!(
        "\n{} checks, {} failed\n\n",
        records.len(),
        failed
    ));

    // append the full per-check documents in name order
    let mut names: Vec<String> = records.iter().map(|r| sanitize(&r.name)).collect();
    names.dedup();
    for name in names {
        let path = out_dir.join(format!("{name}.report.txt"));
        if let Ok(text) = fs::read_to_string(&path) {
            doc.push_str(&text);
            doc.push('\n');
        }
    }
    let report_path = out_dir.join("report.txt");
    fs::write(&report_path, &doc)
        .with_context(|| format!("cannot write {}", report_path.display()))?;
    Ok(doc)
}
