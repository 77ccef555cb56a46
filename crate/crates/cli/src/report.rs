//! Run results and their on-disk form.

use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use opuc_core::asymptotics::{LimitMethod, LimitReport};
use serde::Serialize;

use crate::config::Scenario;
use crate::error::CliResult;

pub const TABLE_VERSION: u32 = 1;

/// A pass/fail check. Numeric gates pass when `value < tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Gate {
    pub name: String,
    pub value: f64,
    pub tolerance: Option<f64>,
    pub passed: bool,
}

impl Gate {
    pub fn below(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Gate {
            name: name.into(),
            value,
            tolerance: Some(tolerance),
            passed: value < tolerance,
        }
    }

    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Gate {
            name: name.into(),
            value: if ok { 1.0 } else { 0.0 },
            tolerance: None,
            passed: ok,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitSummary {
    pub estimate: [f64; 2],
    pub method: &'static str,
    pub err_indicator: f64,
    pub bv_partial: f64,
    pub n_used: usize,
    pub divergence_warning: bool,
}

impl From<&LimitReport> for LimitSummary {
    fn from(r: &LimitReport) -> Self {
        LimitSummary {
            estimate: pair(r.estimate),
            method: match r.method {
                LimitMethod::TailValue => "tail_value",
                LimitMethod::CesaroStolz => "cesaro_stolz",
            },
            err_indicator: r.err_indicator,
            bv_partial: r.bv_partial,
            n_used: r.n_used,
            divergence_warning: r.divergence_warning,
        }
    }
}

pub fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(usize),
    Float(f64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(n) => n.to_string(),
            Cell::Float(x) => format!("{x:.16e}"),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n)
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: &'static [&'static str],
    pub rows: Vec<Vec<Cell>>,
}

/// Column set shared by the scenarios that track `Δₙ`.
pub const DELTA_COLUMNS: &[&str] = &[
    "stage",
    "n",
    "re_delta",
    "im_delta",
    "abs_err",
    "bv_partial",
    "log_scale",
    "flags",
];

impl Table {
    pub fn new(columns: &'static [&'static str]) -> Self {
        Table {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// A `#` version line, the header row, then one line per row, all ending in `\n`.
    pub fn write_csv<W: Write>(&self, scenario: Scenario, out: W) -> CliResult<()> {
        let mut out = out;
        writeln!(
            out,
            "# opuc table v{TABLE_VERSION} scenario={} columns={}",
            scenario.as_str(),
            self.columns.join(",")
        )?;
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Everything one run produces.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub name: String,
    pub scenario: &'static str,
    pub passed: bool,
    pub gates: Vec<Gate>,
    pub details: serde_json::Value,
    #[serde(skip)]
    pub table: Option<(Scenario, Table)>,
}

impl RunReport {
    pub fn new(
        name: String,
        scenario: Scenario,
        gates: Vec<Gate>,
        details: serde_json::Value,
        table: Option<Table>,
    ) -> Self {
        RunReport {
            name,
            scenario: scenario.as_str(),
            passed: gates.iter().all(|g| g.passed),
            gates,
            details,
            table: table.map(|t| (scenario, t)),
        }
    }

    pub fn write(&self, dir: &Path) -> CliResult<()> {
        std::fs::create_dir_all(dir)?;
        let mut json = serde_json::to_string_pretty(self)?;
        json.push('\n');
        std::fs::write(dir.join("summary.json"), json)?;
        if let Some((scenario, table)) = &self.table {
            let file = std::io::BufWriter::new(std::fs::File::create(dir.join("table.csv"))?);
            table.write_csv(*scenario, file)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut t = Table::new(&["n", "x", "flags"]);
        t.push(vec![3.into(), 0.1.into(), "gap".into()]);
        let mut buf = Vec::new();
        t.write_csv(Scenario::Bands, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "# opuc table v1 scenario=bands columns=n,x,flags\nn,x,flags\n3,1.0000000000000001e-1,gap\n"
        );
    }

    #[test]
    fn gate_rejects_nan() {
        assert!(!Gate::below("x", f64::NAN, 1.0).passed);
        assert!(Gate::below("x", 0.5, 1.0).passed);
    }
}
