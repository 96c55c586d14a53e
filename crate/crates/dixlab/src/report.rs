//! Versioned report envelope and its JSON, CSV and table renderings.

use serde::Serialize;
use serde_json::Value;

use crate::config::{Format, RunConfig};
use crate::error::CliError;

pub const SCHEMA: u32 = 1;
pub const TOOL: &str = "dixlab";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub config: RunConfig,
    pub verdict: String,
    pub exit_code: u8,
    pub warnings: Vec<String>,
    pub result: Value,
}

/// Shortest round-trip form, switching to exponent notation far from 1.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-4..1e16).contains(&a) {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

/// (parameter, value...) rows for plotting.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<const N: usize>(columns: [&str; N]) -> Self {
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn row<const N: usize>(&mut self, cells: [String; N]) {
        debug_assert_eq!(N, self.columns.len());
        self.rows.push(cells.into());
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).map_err(|e| CliError::Input(e.to_string()))?;
        for r in &self.rows {
            w.write_record(r).map_err(|e| CliError::Input(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Input(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_text(&self) -> String {
        let mut widths: Vec<usize> = self.columns.iter().map(|c| c.chars().count()).collect();
        for r in &self.rows {
            for (w, c) in widths.iter_mut().zip(r) {
                *w = (*w).max(c.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
            padded.join("  ").trim_end().to_string() + "\n"
        };
        let mut out = line(&self.columns);
        for r in &self.rows {
            out += &line(r);
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub table: Table,
}

impl Outcome {
    pub fn new(
        cfg: &RunConfig,
        verdict: &str,
        exit_code: u8,
        warnings: Vec<String>,
        result: Value,
        table: Table,
    ) -> Self {
        let report = Report {
            schema: SCHEMA,
            tool: TOOL,
            version: VERSION,
            config: cfg.clone(),
            verdict: verdict.to_string(),
            exit_code,
            warnings,
            result,
        };
        Outcome { report, table }
    }

    pub fn exit_code(&self) -> u8 {
        self.report.exit_code
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => Ok(serde_json::to_string_pretty(&self.report).expect("reports serialize") + "\n"),
            Format::Csv => self.table.to_csv(),
            Format::Table => {
                let r = &self.report;
                let mut out = format!("{} {} {}: {}\n", r.tool, r.version, r.config.command.name(), r.verdict);
                for w in &r.warnings {
                    out += &format!("warning: {w}\n");
                }
                if let Some([re, im]) = r.result.get("extrapolated").and_then(|v| v.as_array()).map(|v| [&v[0], &v[1]])
                {
                    let (re, im) = (re.as_f64().unwrap_or(f64::NAN), im.as_f64().unwrap_or(f64::NAN));
                    let sign = if im.is_sign_negative() { "-" } else { "+" };
                    out += &format!("extrapolated: {} {sign} {}i\n", num(re), num(im.abs()));
                }
                Ok(out + &self.table.to_text())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_renderings() {
        let mut t = Table::new(["n", "value"]);
        t.row(["1".to_string(), "0.5".to_string()]);
        t.row(["1023".to_string(), "a,b".to_string()]);
        assert_eq!(t.to_csv().unwrap(), "n,value\n1,0.5\n1023,\"a,b\"\n");
        assert_eq!(t.to_text(), "n     value\n1     0.5\n1023  a,b\n");
        assert_eq!(num(0.25), "0.25");
        assert_eq!(num(1.5e-14), "1.5e-14");
        assert_eq!(num(-3e20), "-3e20");
        assert_eq!(num(0.0), "0");
    }
}
