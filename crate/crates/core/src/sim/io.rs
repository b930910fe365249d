//! CSV and JSON files written by simulation runs.
//!
//! Floats are written in Rust's shortest round-trip form so that files read
//! back bit-exactly.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::SimOutput;

pub const LOG_PRICES_FILE: &str = "log_prices.csv";
pub const RETURNS_FILE: &str = "returns.csv";
pub const DIAGNOSTICS_FILE: &str = "diagnostics.json";

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> io::Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(io::Error::other)?;
    text.push('\n');
    fs::write(path, text)
}

/// Writes a two-column CSV `index_name,value_name` with a 0-based index.
pub fn write_indexed_csv(path: &Path, header: (&str, &str), values: &[f64]) -> io::Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    writeln!(w, "{},{}", header.0, header.1)?;
    for (i, v) in values.iter().enumerate() {
        writeln!(w, "{i},{v}")?;
    }
    w.flush()
}

/// Reads the named column of a CSV file as floats.
pub fn read_column(path: &Path, column: &str) -> io::Result<Vec<f64>> {
    let mut rdr = csv::Reader::from_path(path).map_err(io::Error::other)?;
    let idx = rdr
        .headers()
        .map_err(io::Error::other)?
        .iter()
        .position(|h| h.trim() == column)
        .ok_or_else(|| {
            io::Error::new(
                io::ErrorKind::InvalidData,
                format!("{}: missing column {column:?}", path.display()),
            )
        })?;
    let mut out = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(io::Error::other)?;
        let field = record.get(idx).unwrap_or("");
        let v: f64 = field.trim().parse().map_err(|_| {
            io::Error::new(
                io::ErrorKind::InvalidData,
                format!("{}: bad number {field:?}", path.display()),
            )
        })?;
        out.push(v);
    }
    Ok(out)
}

pub fn read_returns_csv(path: &Path) -> io::Result<Vec<f64>> {
    read_column(path, "return")
}

pub fn read_log_prices_csv(path: &Path) -> io::Result<Vec<f64>> {
    read_column(path, "log_price")
}

/// Writes `log_prices.csv`, `returns.csv` and `diagnostics.json` into `dir`.
pub fn write_sim_output(dir: &Path, output: &SimOutput) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let prices = dir.join(LOG_PRICES_FILE);
    let returns = dir.join(RETURNS_FILE);
    let diagnostics = dir.join(DIAGNOSTICS_FILE);
    write_indexed_csv(&prices, ("step", "log_price"), &output.log_prices)?;
    write_indexed_csv(&returns, ("index", "return"), output.returns.values())?;
    write_json(&diagnostics, &output.diagnostics)?;
    Ok(vec![prices, returns, diagnostics])
}
