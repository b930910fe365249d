//! Daily index files (stooq / Yahoo CSV layouts) into [`PriceSeries`].

use std::collections::HashMap;
use std::io::Read;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::timeseries::{PriceSeries, SeriesError};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("no usable rows in window {}", show_window(*.from, *.to))]
    EmptyWindow {
        from: Option<NaiveDate>,
        to: Option<NaiveDate>,
    },
    #[error("duplicate date {date} on lines {first_line} and {second_line}")]
    DuplicateDate {
        date: NaiveDate,
        first_line: u64,
        second_line: u64,
    },
    #[error("invalid window: from {from} is after to {to}")]
    InvalidWindow { from: NaiveDate, to: NaiveDate },
    #[error("invalid date {0:?}: expected YYYY-MM-DD")]
    InvalidDate(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("manifest error: {0}")]
    Manifest(String),
}

fn show_window(from: Option<NaiveDate>, to: Option<NaiveDate>) -> String {
    let end = |d: Option<NaiveDate>| d.map_or_else(|| "open".to_string(), |d| d.to_string());
    format!("{} to {}", end(from), end(to))
}

/// Column layout of a price file. Without a header row, columns are named by
/// their 0-based index (`"0"`, `"1"`, ...).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CsvSpec {
    pub date_column: String,
    pub price_column: String,
    /// `chrono` format string.
    pub date_format: String,
    pub delimiter: char,
    pub header_present: bool,
}

impl Default for CsvSpec {
    fn default() -> Self {
        Self {
            date_column: "Date".into(),
            price_column: "Open".into(),
            date_format: "%Y-%m-%d".into(),
            delimiter: ',',
            header_present: true,
        }
    }
}

/// Inclusive date window; open ends are unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DateWindow {
    pub from: Option<NaiveDate>,
    pub to: Option<NaiveDate>,
}

impl DateWindow {
    pub fn new(from: Option<NaiveDate>, to: Option<NaiveDate>) -> Result<Self, IngestError> {
        if let (Some(f), Some(t)) = (from, to) {
            if f > t {
                return Err(IngestError::InvalidWindow { from: f, to: t });
            }
        }
        Ok(Self { from, to })
    }

    pub fn contains(&self, d: NaiveDate) -> bool {
        self.from.map_or(true, |f| d >= f) && self.to.map_or(true, |t| d <= t)
    }
}

/// Parses an ISO `YYYY-MM-DD` date.
pub fn parse_iso_date(s: &str) -> Result<NaiveDate, IngestError> {
    NaiveDate::parse_from_str(s.trim(), "%Y-%m-%d").map_err(|_| IngestError::InvalidDate(s.into()))
}

/// Row accounting: `rows_in = rows_used + rows_skipped + rows_out_of_window`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct IngestCounts {
    pub rows_in: usize,
    pub rows_used: usize,
    pub rows_skipped: usize,
    pub rows_out_of_window: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ingested {
    pub series: PriceSeries,
    pub counts: IngestCounts,
}

pub fn read_prices(
    path: impl AsRef<Path>,
    spec: &CsvSpec,
    window: DateWindow,
) -> Result<Ingested, IngestError> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| IngestError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    read_prices_from(file, spec, window, label)
}

fn column_index(headers: Option<&csv::StringRecord>, name: &str) -> Result<usize, IngestError> {
    match headers {
        Some(h) => h
            .iter()
            .position(|c| c.trim().eq_ignore_ascii_case(name.trim()))
            .ok_or_else(|| IngestError::Schema(format!("missing column {name:?}"))),
        None => name.trim().parse().map_err(|_| {
            IngestError::Schema(format!("column {name:?} must be an index without a header"))
        }),
    }
}

/// Rows are filtered to `window`, sorted by date, and rows whose date or
/// price is missing, unparseable or non-positive are skipped.
pub fn read_prices_from<R: Read>(
    reader: R,
    spec: &CsvSpec,
    window: DateWindow,
    label: impl Into<String>,
) -> Result<Ingested, IngestError> {
    let delimiter = u8::try_from(spec.delimiter)
        .map_err(|_| IngestError::Schema("delimiter must be a single-byte character".into()))?;
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .has_headers(spec.header_present)
        .flexible(true)
        .from_reader(reader);
    let headers = if spec.header_present {
        Some(rdr.headers()?.clone())
    } else {
        None
    };
    let date_idx = column_index(headers.as_ref(), &spec.date_column)?;
    let price_idx = column_index(headers.as_ref(), &spec.price_column)?;

    let mut counts = IngestCounts::default();
    let mut seen: HashMap<NaiveDate, u64> = HashMap::new();
    let mut rows: Vec<(NaiveDate, f64)> = Vec::new();
    let mut record = csv::StringRecord::new();
    while rdr.read_record(&mut record)? {
        let line = record.position().map_or(0, |p| p.line());
        counts.rows_in += 1;
        let date = record
            .get(date_idx)
            .and_then(|s| NaiveDate::parse_from_str(s.trim(), &spec.date_format).ok());
        let Some(date) = date else {
            counts.rows_skipped += 1;
            continue;
        };
        if !window.contains(date) {
            counts.rows_out_of_window += 1;
            continue;
        }
        if let Some(first_line) = seen.insert(date, line) {
            return Err(IngestError::DuplicateDate {
                date,
                first_line,
                second_line: line,
            });
        }
        let price = record
            .get(price_idx)
            .and_then(|s| s.trim().parse::<f64>().ok())
            .filter(|p| p.is_finite() && *p > 0.0);
        match price {
            Some(p) => {
                counts.rows_used += 1;
                rows.push((date, p));
            }
            None => counts.rows_skipped += 1,
        }
    }
    if rows.is_empty() {
        return Err(IngestError::EmptyWindow {
            from: window.from,
            to: window.to,
        });
    }
    rows.sort_by_key(|r| r.0);
    let (dates, prices) = rows.into_iter().unzip();
    Ok(Ingested {
        series: PriceSeries::new(dates, prices, label)?,
        counts,
    })
}

/// One column of an analysis table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestEntry {
    pub label: String,
    pub path: PathBuf,
    #[serde(default)]
    pub from: Option<NaiveDate>,
    #[serde(default)]
    pub to: Option<NaiveDate>,
    #[serde(default)]
    pub price_column: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub entries: Vec<ManifestEntry>,
}

impl Manifest {
    /// Reads a manifest; relative entry paths resolve against its directory.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self, IngestError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| IngestError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let mut manifest: Manifest =
            serde_json::from_str(&text).map_err(|e| IngestError::Manifest(e.to_string()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        for e in &mut manifest.entries {
            if e.path.is_relative() {
                e.path = base.join(&e.path);
            }
        }
        Ok(manifest)
    }
}
