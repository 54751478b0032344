//! Check records, CSV tables and the run report.

use std::fmt;
use std::path::Path;
use std::time::Duration;

use crate::config::Check;
use crate::error::CliError;

/// How a measured value is judged.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    AtMost(f64),
    AtLeast(f64),
    Within { target: f64, slack: f64 },
}

impl Bound {
    pub fn admits(self, value: f64) -> bool {
        match self {
            Bound::AtMost(limit) => value <= limit,
            Bound::AtLeast(limit) => value >= limit,
            Bound::Within { target, slack } => (value - target).abs() <= slack,
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Bound::AtMost(limit) => write!(f, "<= {}", format_f64(limit)),
            Bound::AtLeast(limit) => write!(f, ">= {}", format_f64(limit)),
            Bound::Within { target, slack } => write!(f, "{} +- {}", format_f64(target), format_f64(slack)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub name: String,
    pub case: String,
    pub value: f64,
    pub bound: Bound,
    pub passed: bool,
}

impl Record {
    pub fn new(name: &str, case: impl Into<String>, value: f64, bound: Bound) -> Self {
        Self { name: name.to_string(), case: case.into(), value, bound, passed: bound.admits(value) }
    }
}

/// A CSV file with a fixed header.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub file: String,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(file: &str, header: &[&'static str]) -> Self {
        Self { file: file.to_string(), header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write(&self, dir: &Path) -> Result<(), CliError> {
        let path = dir.join(&self.file);
        let csv_err = |e| CliError::Csv(path.clone(), e);
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_path(&path).map_err(csv_err)?;
        w.write_record(&self.header).map_err(csv_err)?;
        for row in &self.rows {
            w.write_record(row).map_err(csv_err)?;
        }
        w.flush().map_err(|e| CliError::Io(path.clone(), e))
    }
}

/// Shortest decimal that round-trips to the same `f64`; exponent notation
/// outside `[1e-4, 1e16)`.
pub fn format_f64(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-4..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// Everything one check produced.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub check: Check,
    pub records: Vec<Record>,
    pub tables: Vec<Table>,
    pub elapsed: Duration,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.passed)
    }

    /// The generic `check,case,value,bound,passed` table of the records.
    pub fn record_table(&self) -> Table {
        let mut t = Table::new(&format!("{}.csv", self.check.name()), &["check", "case", "value", "bound", "passed"]);
        for r in &self.records {
            t.push(vec![r.name.clone(), r.case.clone(), format_f64(r.value), r.bound.to_string(), r.passed.to_string()]);
        }
        t
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunReport {
    pub outcomes: Vec<CheckOutcome>,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(CheckOutcome::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = (Check, &Record)> {
        self.outcomes.iter().flat_map(|o| o.records.iter().filter(|r| !r.passed).map(move |r| (o.check, r)))
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in &self.outcomes {
            let failed = o.records.iter().filter(|r| !r.passed).count();
            let status = if failed == 0 { "ok" } else { "FAILED" };
            writeln!(
                f,
                "{:<20} {:>6}  {} checks, {} failed, {:.2} s",
                o.check.name(),
                status,
                o.records.len(),
                failed,
                o.elapsed.as_secs_f64()
            )?;
        }
        for (check, r) in self.failures() {
            writeln!(f, "  {check}: {} [{}] = {} (want {})", r.name, r.case, format_f64(r.value), r.bound)?;
        }
        Ok(())
    }
}
