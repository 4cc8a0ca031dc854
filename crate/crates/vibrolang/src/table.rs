//! Numeric CSV tables: one header row, every cell printed as `%.12e`.

use crate::error::{CliError, Result};

/// How a table is drawn when SVG output is requested.
#[derive(Debug, Clone, PartialEq)]
pub struct Plot {
    pub title: String,
    /// Column indices drawn against column 0.
    pub series: Vec<usize>,
    pub log_y: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub plot: Option<Plot>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Table {
            name: name.to_string(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
            plot: None,
        }
    }

    /// Build from equal-length columns.
    pub fn from_columns(name: &str, header: &[&str], columns: &[&[f64]]) -> Self {
        let mut t = Table::new(name, header);
        let n = columns.first().map_or(0, |c| c.len());
        debug_assert!(columns.iter().all(|c| c.len() == n));
        t.rows = (0..n).map(|i| columns.iter().map(|c| c[i]).collect()).collect();
        t
    }

    pub fn with_plot(mut self, title: &str, series: Vec<usize>, log_y: bool) -> Self {
        self.plot = Some(Plot { title: title.to_string(), series, log_y });
        self
    }

    pub fn column(&self, i: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[i]).collect()
    }

    pub fn to_csv(&self) -> Vec<u8> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r.iter().map(|&v| sci(v))).expect("in-memory write");
        }
        w.into_inner().expect("in-memory flush")
    }

    pub fn parse_csv(name: &str, bytes: &[u8]) -> Result<Self> {
        let mut rd = csv::ReaderBuilder::new().has_headers(true).from_reader(bytes);
        let bad = |e: &dyn std::fmt::Display| CliError::config(name, e);
        let header: Vec<String> = rd.headers().map_err(|e| bad(&e))?.iter().map(String::from).collect();
        let mut rows = Vec::new();
        for rec in rd.records() {
            let rec = rec.map_err(|e| bad(&e))?;
            let row = rec
                .iter()
                .map(|c| c.parse::<f64>().map_err(|e| bad(&format!("cell `{c}`: {e}"))))
                .collect::<Result<Vec<f64>>>()?;
            if row.len() != header.len() {
                return Err(bad(&"ragged row"));
            }
            rows.push(row);
        }
        Ok(Table { name: name.to_string(), header, rows, plot: None })
    }
}

/// C-style `%.12e`: mantissa with 12 decimals, signed exponent of at least two digits.
pub fn sci(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{v:.12e}");
    let (mant, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mant}e{sign}{:02}", exp.abs())
}
