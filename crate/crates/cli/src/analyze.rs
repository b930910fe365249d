use std::fs;
use std::path::{Path, PathBuf};

use abem_core::ingest::{read_prices, CsvSpec, DateWindow, IngestCounts, Manifest};
use abem_core::stats::{full_report, row_labels};
use abem_core::timeseries::{absolute_returns, log_returns, ReturnKind};
use anyhow::{bail, Context};
use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::{create_out_dir, AnalyzeArgs, Outcome};

pub const TABLE_CSV: &str = "table.csv";
pub const TABLE_JSON: &str = "table.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisTable {
    pub rows: Vec<String>,
    pub lags: Vec<usize>,
    pub tail_fraction: f64,
    pub columns: Vec<TableColumn>,
}

/// One (source, window, raw|abs) column. Exactly one of `values` / `error`
/// is present; `values` is aligned with `AnalysisTable::rows`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableColumn {
    pub name: String,
    pub source: String,
    pub path: PathBuf,
    pub kind: ReturnKind,
    pub from: Option<NaiveDate>,
    pub to: Option<NaiveDate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counts: Option<IngestCounts>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

struct Source {
    label: String,
    path: PathBuf,
    from: Option<NaiveDate>,
    to: Option<NaiveDate>,
    price_column: String,
}

fn column_name(label: &str, kind: ReturnKind) -> String {
    match kind {
        ReturnKind::Raw => format!("{label} raw"),
        ReturnKind::Absolute => format!("{label} abs"),
    }
}

fn sources(args: &AnalyzeArgs) -> anyhow::Result<Vec<Source>> {
    let mut out = Vec::new();
    if let Some(m) = &args.manifest {
        let manifest = Manifest::from_file(m)?;
        for e in manifest.entries {
            out.push(Source {
                label: e.label,
                path: e.path,
                from: e.from.or(args.window.from),
                to: e.to.or(args.window.to),
                price_column: e
                    .price_column
                    .unwrap_or_else(|| args.window.price_column.clone()),
            });
        }
    }
    for p in &args.inputs {
        let label = p
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| p.display().to_string());
        out.push(Source {
            label,
            path: p.clone(),
            from: args.window.from,
            to: args.window.to,
            price_column: args.window.price_column.clone(),
        });
    }
    if out.is_empty() {
        bail!("nothing to analyze: give --input or --manifest");
    }
    Ok(out)
}

fn analyze_source(src: &Source, lags: &[usize], tail_fraction: f64) -> [TableColumn; 2] {
    let column = |kind| TableColumn {
        name: column_name(&src.label, kind),
        source: src.label.clone(),
        path: src.path.clone(),
        kind,
        from: src.from,
        to: src.to,
        counts: None,
        sample_size: None,
        values: None,
        error: None,
    };
    let mut cols = [column(ReturnKind::Raw), column(ReturnKind::Absolute)];

    let spec = CsvSpec {
        price_column: src.price_column.clone(),
        ..CsvSpec::default()
    };
    let ingested = DateWindow::new(src.from, src.to).and_then(|w| read_prices(&src.path, &spec, w));
    let ingested = match ingested {
        Ok(i) => i,
        Err(e) => {
            for c in &mut cols {
                c.error = Some(e.to_string());
            }
            return cols;
        }
    };
    let raw = match log_returns(&ingested.series) {
        Ok(r) => r,
        Err(e) => {
            for c in &mut cols {
                c.counts = Some(ingested.counts);
                c.error = Some(e.to_string());
            }
            return cols;
        }
    };
    let abs = absolute_returns(&raw).expect("raw input");
    for (c, series) in cols.iter_mut().zip([&raw, &abs]) {
        c.counts = Some(ingested.counts);
        c.sample_size = Some(series.len());
        match full_report(series, lags, tail_fraction) {
            Ok(rep) => c.values = Some(rep.rows().into_iter().map(|(_, v)| v).collect()),
            Err(e) => c.error = Some(e.to_string()),
        }
    }
    cols
}

pub fn build_table(args: &AnalyzeArgs) -> anyhow::Result<AnalysisTable> {
    let srcs = sources(args)?;
    let mut lags = args.stats.lags.clone();
    lags.sort_unstable();
    lags.dedup();
    let tail_fraction = args.stats.tail_fraction;
    let columns = srcs
        .iter()
        .flat_map(|s| analyze_source(s, &lags, tail_fraction))
        .collect();
    Ok(AnalysisTable {
        rows: row_labels(&lags, tail_fraction),
        lags,
        tail_fraction,
        columns,
    })
}

/// Table as CSV: one row per statistic, one column per source/kind, values
/// to 5 decimals. A failed column carries its error text in every cell.
pub fn write_table_csv(path: &Path, table: &AnalysisTable) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let mut header = vec!["statistic".to_string()];
    header.extend(table.columns.iter().map(|c| c.name.clone()));
    w.write_record(&header)?;
    for (i, row) in table.rows.iter().enumerate() {
        let mut rec = vec![row.clone()];
        for c in &table.columns {
            rec.push(match (&c.values, &c.error) {
                (Some(v), _) => format!("{:.5}", v[i]),
                (None, Some(e)) => format!("error: {e}"),
                (None, None) => String::new(),
            });
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_table_json(path: &Path) -> anyhow::Result<AnalysisTable> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(serde_json::from_str(&text)?)
}

/// Header and data rows of a table CSV.
pub fn read_table_csv(path: &Path) -> anyhow::Result<(Vec<String>, Vec<Vec<String>>)> {
    let mut r = csv::Reader::from_path(path)?;
    let header = r.headers()?.iter().map(str::to_string).collect();
    let rows = r
        .records()
        .map(|rec| rec.map(|r| r.iter().map(str::to_string).collect()))
        .collect::<Result<_, _>>()?;
    Ok((header, rows))
}

pub fn run(args: &AnalyzeArgs) -> anyhow::Result<Outcome> {
    let table = build_table(args)?;
    create_out_dir(&args.out_dir)?;
    let csv_path = args.out_dir.join(TABLE_CSV);
    let json_path = args.out_dir.join(TABLE_JSON);
    write_table_csv(&csv_path, &table)?;
    abem_core::sim::io::write_json(&json_path, &table)?;

    let warnings: Vec<String> = table
        .columns
        .iter()
        .filter_map(|c| c.error.as_ref().map(|e| format!("{}: {e}", c.name)))
        .collect();
    Ok(Outcome {
        success: warnings.len() < table.columns.len(),
        written: vec![csv_path, json_path],
        warnings,
    })
}
