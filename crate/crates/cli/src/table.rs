//! CSV output: header row, comma separated, 12 significant digits.

use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};

/// Number of significant digits written for every float.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Formats `x` with [`SIGNIFICANT_DIGITS`] significant digits, in plain
/// decimal notation for exponents in `-5..15` and scientific otherwise.
pub fn fmt_float(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "NaN".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let exp: i32 = sci.rsplit_once('e').and_then(|(_, e)| e.parse().ok()).unwrap_or(0);
    if (-5..15).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        sci
    }
}

/// `;`-separated list of floats, for per-mode lists inside one cell.
pub fn fmt_list(xs: &[f64]) -> String {
    xs.iter().map(|&x| fmt_float(x)).collect::<Vec<_>>().join(";")
}

/// A table built in memory and written in one go.
#[derive(Debug, Clone)]
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn write_to<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Writes to `path`, or to stdout if `path` is `None`.
    pub fn emit(&self, path: Option<&Path>) -> Result<()> {
        match path {
            Some(p) => {
                let file = std::fs::File::create(p).with_context(|| format!("creating {}", p.display()))?;
                self.write_to(std::io::BufWriter::new(file))
            }
            None => self.write_to(std::io::stdout().lock()),
        }
    }
}
