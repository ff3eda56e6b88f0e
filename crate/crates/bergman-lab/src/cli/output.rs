//! Deterministic CSV/JSON emission with atomic writes.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

/// Schema-versioned CSV: a `# schema=1` comment line, a header row, then
/// data rows. Bodies are byte-identical across reruns of the same config
/// and seed (floats use shortest round-trip formatting, no timestamps).
pub const CSV_SCHEMA_LINE: &str = "# schema=1";

pub fn csv_document(header: &str, rows: &[String]) -> String {
    let mut body = String::new();
    body.push_str(CSV_SCHEMA_LINE);
    body.push('\n');
    body.push_str(header);
    body.push('\n');
    for row in rows {
        body.push_str(row);
        body.push('\n');
    }
    body
}

/// Writes via a sibling temp file plus rename so readers never observe a
/// partial file.
pub fn write_atomic(path: &Path, content: &str) -> Result<()> {
    let tmp: PathBuf = {
        let mut name = path.file_name().unwrap_or_default().to_os_string();
        name.push(".tmp");
        path.with_file_name(name)
    };
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(content.as_bytes())?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Emit to the output path when given, else to stdout.
pub fn emit(output: &Option<PathBuf>, content: &str) -> Result<()> {
    match output {
        Some(path) => write_atomic(path, content),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// One named check inside a run report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    /// Measured defect/quantity; the check passes when it is <= threshold.
    pub measured: f64,
    pub threshold: f64,
    pub pass: bool,
    pub wall_ms: u64,
}

impl CheckResult {
    pub fn timed(name: &str, started: std::time::Instant, measured: f64, threshold: f64) -> Self {
        CheckResult {
            name: name.to_string(),
            measured,
            threshold,
            pass: measured <= threshold,
            wall_ms: started.elapsed().as_millis() as u64,
        }
    }
}

/// The runner's result: config echo, per-check outcomes, overall verdict.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub artifact_version: String,
    pub subcommand: String,
    pub seed: u64,
    pub config: BTreeMap<String, String>,
    pub checks: Vec<CheckResult>,
    pub overall_pass: bool,
}

impl RunReport {
    pub fn new(subcommand: &str, seed: u64, config: BTreeMap<String, String>) -> Self {
        RunReport {
            artifact_version: env!("CARGO_PKG_VERSION").to_string(),
            subcommand: subcommand.to_string(),
            seed,
            config,
            checks: Vec::new(),
            overall_pass: true,
        }
    }

    pub fn push(&mut self, check: CheckResult) {
        self.overall_pass &= check.pass;
        self.checks.push(check);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

/// Consolidation of several run reports.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConsolidatedReport {
    pub overall_pass: bool,
    pub failing_checks: Vec<String>,
    pub reports: Vec<RunReport>,
}

pub fn consolidate(paths: &[PathBuf]) -> Result<ConsolidatedReport> {
    let mut reports = Vec::new();
    for path in paths {
        let text = std::fs::read_to_string(path)?;
        let report: RunReport = serde_json::from_str(&text).map_err(|e| {
            LabError::Config(format!("malformed report {}: {e}", path.display()))
        })?;
        reports.push(report);
    }
    let mut failing = Vec::new();
    for r in &reports {
        for c in &r.checks {
            if !c.pass {
                failing.push(format!("{}/{}", r.subcommand, c.name));
            }
        }
    }
    Ok(ConsolidatedReport {
        overall_pass: failing.is_empty(),
        failing_checks: failing,
        reports,
    })
}
