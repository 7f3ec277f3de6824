use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use charmean_core::{Status, VerificationRecord};
use serde::Serialize;

use crate::config::{OutputFormat, SweepConfig};
use crate::error::SweepError;

/// Column order shared by the JSON records and the CSV rows.
pub const CSV_HEADER: [&str; 12] = [
    "identity",
    "prime",
    "lhs",
    "rhs",
    "abs_err",
    "rel_err",
    "status",
    "elapsed_ms",
    "n",
    "k",
    "detail",
    "cache_hit",
];

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
    pub cache_hits: usize,
    pub elapsed_ms: f64,
}

impl Summary {
    pub fn tally(records: &[VerificationRecord], elapsed_ms: f64) -> Self {
        let mut s = Summary { total: records.len(), elapsed_ms, ..Default::default() };
        for r in records {
            match r.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::Skipped(_) => s.skipped += 1,
            }
            if r.cache_hit {
                s.cache_hits += 1;
            }
        }
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub config: SweepConfig,
    pub records: Vec<VerificationRecord>,
    pub summary: Summary,
    pub tool_version: String,
    pub timestamp: String,
}

impl RunReport {
    pub fn any_failed(&self) -> bool {
        self.records.iter().any(|r| r.status.is_fail())
    }
}

fn write_json<W: Write>(report: &RunReport, mut w: W) -> Result<(), String> {
    serde_json::to_writer_pretty(&mut w, report).map_err(|e| e.to_string())?;
    writeln!(w).map_err(|e| e.to_string())
}

fn write_csv<W: Write>(report: &RunReport, w: W) -> Result<(), String> {
    let mut csv = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    csv.write_record(CSV_HEADER).map_err(|e| e.to_string())?;
    for r in &report.records {
        csv.serialize(r).map_err(|e| e.to_string())?;
    }
    csv.flush().map_err(|e| e.to_string())
}

/// Writes the report in `format` to `path`, or to stdout when `path` is `None`.
pub fn emit_report(report: &RunReport, format: OutputFormat, path: Option<&Path>) -> Result<(), SweepError> {
    let write = |w: &mut dyn Write| match format {
        OutputFormat::Json => write_json(report, w),
        OutputFormat::Csv => write_csv(report, w),
    };
    match path {
        Some(path) => {
            let file = File::create(path).map_err(|e| SweepError::io(path, e))?;
            let mut w = BufWriter::new(file);
            write(&mut w).map_err(|e| SweepError::io(path, io::Error::other(e)))?;
            w.flush().map_err(|e| SweepError::io(path, e))
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write(&mut lock).map_err(|e| SweepError::io("<stdout>", io::Error::other(e)))
        }
    }
}
