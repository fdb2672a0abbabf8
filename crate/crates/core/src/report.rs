//! Claim reports and tabular output.

use std::fmt;
use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::Interval;

/// One checked inequality `lhs <= rhs`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClaimReport {
    pub claim: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub family_size: usize,
    pub worst_box: Interval,
    pub pass: bool,
}

impl fmt::Display for ClaimReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "claim: {}", self.claim)?;
        writeln!(f, "lhs: {:?}", self.lhs)?;
        writeln!(f, "rhs: {:?}", self.rhs)?;
        writeln!(f, "margin: {:?}", self.margin)?;
        writeln!(f, "family_size: {}", self.family_size)?;
        writeln!(
            f,
            "worst_box: [{:?}, {:?})",
            self.worst_box.left,
            self.worst_box.right()
        )?;
        writeln!(f, "pass: {}", self.pass)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Format> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::invalid(format!("unknown format `{other}`"))),
        }
    }
}

/// Writes rows as CSV with a header, or as a JSON array of objects.
pub fn write_rows<T: Serialize>(out: impl Write, rows: &[T], format: Format) -> Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in rows {
                w.serialize(r).map_err(|e| Error::invalid(e.to_string()))?;
            }
            w.flush()?;
        }
        Format::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, rows).map_err(|e| Error::invalid(e.to_string()))?;
            writeln!(out)?;
        }
    }
    Ok(())
}
