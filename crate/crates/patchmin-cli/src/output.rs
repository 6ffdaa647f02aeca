//! CSV and JSON emission. CSV floats carry 17 significant digits so parsing
//! them back reproduces the exact f64 bits; lines end with LF.

use std::io::Write;
use std::path::Path;

use crate::runner::{AnalysisReport, SweepRecord};
use crate::CliError;

pub const CSV_HEADER: &str = "param1,param2,t_min,A0,A1,decrease_percent,mu0_sq,mu1_sq_tmin,flags";

/// `{:.16e}` keeps 17 significant digits: enough for exact f64 round-trips.
fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn csv_string(records: &[SweepRecord]) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            fmt(r.param1),
            fmt(r.param2),
            fmt(r.t_min),
            fmt(r.a0),
            fmt(r.a1),
            fmt(r.decrease_percent),
            fmt(r.mu0_sq),
            fmt(r.mu1_sq_tmin),
            r.flags
        ));
    }
    out
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    let mut file = std::fs::File::create(path)
        .map_err(|e| CliError::Io(path.display().to_string(), e.to_string()))?;
    file.write_all(contents.as_bytes())
        .map_err(|e| CliError::Io(path.display().to_string(), e.to_string()))
}

/// Write sweep records as CSV; refuses an empty record set.
pub fn emit_csv(records: &[SweepRecord], path: &Path) -> Result<(), CliError> {
    if records.is_empty() {
        return Err(CliError::EmptyOutput);
    }
    write_file(path, &csv_string(records))
}

pub fn emit_json(report: &AnalysisReport, path: &Path) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(report)
        .map_err(|e| CliError::Io(path.display().to_string(), e.to_string()))?;
    write_file(path, &(text + "\n"))
}

pub fn emit_svg(contents: &str, path: &Path) -> Result<(), CliError> {
    write_file(path, contents)
}
