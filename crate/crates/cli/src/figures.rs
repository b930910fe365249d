use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use abem_core::ingest::{read_prices, CsvSpec, DateWindow};
use abem_core::sim::{io, run_simulation, RunConfig};
use abem_core::stats::{acf_profile, histogram_data, qq_data};
use abem_core::timeseries::{absolute_returns, log_returns, ReturnSeries};
use anyhow::Context;

use crate::{create_out_dir, FiguresArgs, Outcome};

pub const HISTOGRAM_FILE: &str = "histogram.csv";
pub const QQ_FILE: &str = "qq.csv";
pub const ACF_FILE: &str = "acf.csv";

/// True when the CSV header names a `return` column.
fn is_returns_file(path: &Path) -> anyhow::Result<bool> {
    let f = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut first = String::new();
    BufReader::new(f).read_line(&mut first)?;
    Ok(first.trim().split(',').any(|h| h.trim() == "return"))
}

fn load_returns(args: &FiguresArgs) -> anyhow::Result<ReturnSeries> {
    if let Some(cfg_path) = &args.config {
        let mut cfg = RunConfig::from_json_file(cfg_path)?;
        if let Some(s) = args.seed {
            cfg.seed = s;
        }
        return Ok(run_simulation(&cfg)?.returns);
    }
    let path = args
        .input
        .as_ref()
        .context("--input or --config is required")?;
    if is_returns_file(path)? {
        let values = io::read_returns_csv(path)?;
        return Ok(ReturnSeries::raw(values, path.display().to_string()));
    }
    let spec = CsvSpec {
        price_column: args.window.price_column.clone(),
        ..CsvSpec::default()
    };
    let window = DateWindow::new(args.window.from, args.window.to)?;
    let ingested = read_prices(path, &spec, window)?;
    Ok(log_returns(&ingested.series)?)
}

fn write_rows(path: &Path, header: &str, rows: impl Iterator<Item = String>) -> anyhow::Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    writeln!(w, "{header}")?;
    for r in rows {
        writeln!(w, "{r}")?;
    }
    w.flush()?;
    Ok(())
}

pub fn run(args: &FiguresArgs) -> anyhow::Result<Outcome> {
    let returns = load_returns(args)?;
    let x = returns.values();
    let hist = histogram_data(x, args.bins)?;
    let qq = qq_data(x)?;
    let raw_acf = acf_profile(x, args.max_lag)?;
    let abs = absolute_returns(&returns)?;
    let abs_acf = acf_profile(abs.values(), args.max_lag)?;

    create_out_dir(&args.out_dir)?;
    let hist_path = args.out_dir.join(HISTOGRAM_FILE);
    let density = hist.empirical_density();
    write_rows(
        &hist_path,
        "center,count,density,gaussian",
        (0..hist.centers.len()).map(|i| {
            format!(
                "{},{},{},{}",
                hist.centers[i], hist.counts[i], density[i], hist.gaussian_density[i]
            )
        }),
    )?;
    let qq_path = args.out_dir.join(QQ_FILE);
    write_rows(
        &qq_path,
        "theoretical,empirical",
        qq.iter()
            .map(|p| format!("{},{}", p.theoretical, p.empirical)),
    )?;
    let acf_path = args.out_dir.join(ACF_FILE);
    write_rows(
        &acf_path,
        "lag,raw,absolute",
        raw_acf
            .lags
            .iter()
            .zip(raw_acf.values.iter().zip(&abs_acf.values))
            .map(|(l, (r, a))| format!("{l},{r},{a}")),
    )?;
    Ok(Outcome {
        written: vec![hist_path, qq_path, acf_path],
        warnings: Vec::new(),
        success: true,
    })
}
