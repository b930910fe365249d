use std::fs;
use std::path::Path;

use abem_core::sim::{
    io, run_ensemble_with, run_simulation, Diagnostics, Execution, RunConfig, SimError, SimOutput,
};
use abem_core::stats::{full_report, row_labels, StatsReport};
use abem_core::timeseries::absolute_returns;
use anyhow::Context;
use serde::{Deserialize, Serialize};

use crate::{create_out_dir, EnsembleArgs, Outcome, SimulateArgs, StatsArgs};

pub const REPORT_FILE: &str = "report.json";
pub const SUMMARY_JSON: &str = "ensemble_summary.json";
pub const SUMMARY_CSV: &str = "ensemble_summary.csv";

/// Raw and absolute-return reports of one run; a failed statistic leaves
/// the report empty and records the error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raw: Option<StatsReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub absolute: Option<StatsReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub errors: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicationRecord {
    pub replication: usize,
    pub seed: u64,
    pub diagnostics: Diagnostics,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<RunReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Mean and sample standard deviation over the replications that produced
/// the statistic. `t_stat` tests the mean against zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatSummary {
    pub statistic: String,
    pub n: usize,
    pub mean: Option<f64>,
    pub std: Option<f64>,
    pub t_stat: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSummary {
    pub base_seed: u64,
    pub replications: usize,
    pub succeeded: usize,
    pub lags: Vec<usize>,
    pub tail_fraction: f64,
    pub raw: Vec<StatSummary>,
    pub absolute: Vec<StatSummary>,
    pub runs: Vec<ReplicationRecord>,
}

impl EnsembleSummary {
    pub fn stat(&self, absolute: bool, statistic: &str) -> Option<&StatSummary> {
        let list = if absolute { &self.absolute } else { &self.raw };
        list.iter().find(|s| s.statistic == statistic)
    }
}

fn load_config(path: &Path, seed: Option<u64>) -> anyhow::Result<RunConfig> {
    let mut cfg = RunConfig::from_json_file(path)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn sorted_lags(stats: &StatsArgs) -> Vec<usize> {
    let mut lags = stats.lags.clone();
    lags.sort_unstable();
    lags.dedup();
    lags
}

pub fn report_run(out: &SimOutput, lags: &[usize], tail_fraction: f64) -> RunReport {
    let mut errors = Vec::new();
    let raw = full_report(&out.returns, lags, tail_fraction)
        .map_err(|e| errors.push(format!("raw {e}")))
        .ok();
    let abs = absolute_returns(&out.returns).expect("simulated returns are raw");
    let absolute = full_report(&abs, lags, tail_fraction)
        .map_err(|e| errors.push(format!("absolute {e}")))
        .ok();
    RunReport {
        seed: out.seed(),
        raw,
        absolute,
        errors,
    }
}

pub fn run_simulate(args: &SimulateArgs) -> anyhow::Result<Outcome> {
    let cfg = load_config(&args.config, args.seed)?;
    create_out_dir(&args.out_dir)?;
    let out = match run_simulation(&cfg) {
        Ok(o) => o,
        Err(SimError::NumericalBlowup {
            diagnostics,
            step,
            log_price,
        }) => {
            let path = args.out_dir.join(io::DIAGNOSTICS_FILE);
            io::write_json(&path, &diagnostics)?;
            anyhow::bail!(
                "numerical blowup at step {step} (log price {log_price}); diagnostics in {}",
                path.display()
            );
        }
        Err(e) => return Err(e.into()),
    };
    let mut written = io::write_sim_output(&args.out_dir, &out)?;
    let report = report_run(&out, &sorted_lags(&args.stats), args.stats.tail_fraction);
    let path = args.out_dir.join(REPORT_FILE);
    io::write_json(&path, &report)?;
    written.push(path);
    Ok(Outcome {
        written,
        warnings: report.errors.clone(),
        success: true,
    })
}

fn summarize<'a>(
    labels: &[String],
    reports: impl Iterator<Item = &'a StatsReport> + Clone,
) -> Vec<StatSummary> {
    labels
        .iter()
        .enumerate()
        .map(|(i, label)| {
            let xs: Vec<f64> = reports.clone().map(|r| r.rows()[i].1).collect();
            let n = xs.len();
            let mean = (n > 0).then(|| xs.iter().sum::<f64>() / n as f64);
            let std = mean
                .filter(|_| n > 1)
                .map(|m| (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt());
            let t_stat = match (mean, std) {
                (Some(m), Some(s)) if s > 0.0 => Some(m / (s / (n as f64).sqrt())),
                _ => None,
            };
            StatSummary {
                statistic: label.clone(),
                n,
                mean,
                std,
                t_stat,
            }
        })
        .collect()
}

pub fn ensemble_summary(
    cfg: &RunConfig,
    replications: usize,
    execution: Execution,
    lags: &[usize],
    tail_fraction: f64,
) -> EnsembleSummary {
    let results = run_ensemble_with(cfg, replications, execution);
    let runs: Vec<ReplicationRecord> = results
        .into_iter()
        .enumerate()
        .map(|(r, res)| match res {
            Ok(out) => ReplicationRecord {
                replication: r,
                seed: out.seed(),
                diagnostics: out.diagnostics.clone(),
                report: Some(report_run(&out, lags, tail_fraction)),
                error: None,
            },
            Err(e) => {
                let diagnostics = match &e {
                    SimError::NumericalBlowup { diagnostics, .. } => (**diagnostics).clone(),
                    _ => Diagnostics::default(),
                };
                ReplicationRecord {
                    replication: r,
                    seed: abem_core::sim::replication_seed(cfg.seed, r),
                    diagnostics,
                    report: None,
                    error: Some(e.to_string()),
                }
            }
        })
        .collect();
    let labels = row_labels(lags, tail_fraction);
    let reports = runs.iter().filter_map(|r| r.report.as_ref());
    EnsembleSummary {
        base_seed: cfg.seed,
        replications,
        succeeded: runs.iter().filter(|r| r.error.is_none()).count(),
        lags: lags.to_vec(),
        tail_fraction,
        raw: summarize(&labels, reports.clone().filter_map(|r| r.raw.as_ref())),
        absolute: summarize(&labels, reports.filter_map(|r| r.absolute.as_ref())),
        runs,
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.5}")).unwrap_or_default()
}

fn write_summary_csv(path: &Path, s: &EnsembleSummary) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["statistic", "kind", "n", "mean", "std", "t_stat"])?;
    for (kind, list) in [("raw", &s.raw), ("abs", &s.absolute)] {
        for st in list {
            w.write_record([
                st.statistic.clone(),
                kind.to_string(),
                st.n.to_string(),
                fmt_opt(st.mean),
                fmt_opt(st.std),
                fmt_opt(st.t_stat),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_ensemble_summary(path: &Path) -> anyhow::Result<EnsembleSummary> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(serde_json::from_str(&text)?)
}

pub fn run_ensemble_cmd(args: &EnsembleArgs) -> anyhow::Result<Outcome> {
    let cfg = load_config(&args.config, args.seed)?;
    anyhow::ensure!(args.replications > 0, "--replications must be at least 1");
    create_out_dir(&args.out_dir)?;
    let execution = if args.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    let summary = ensemble_summary(
        &cfg,
        args.replications,
        execution,
        &sorted_lags(&args.stats),
        args.stats.tail_fraction,
    );
    let json = args.out_dir.join(SUMMARY_JSON);
    let csv_path = args.out_dir.join(SUMMARY_CSV);
    io::write_json(&json, &summary)?;
    write_summary_csv(&csv_path, &summary)?;

    let mut warnings = Vec::new();
    for r in &summary.runs {
        if let Some(e) = &r.error {
            warnings.push(format!(
                "replication {} (seed {}): {e}",
                r.replication, r.seed
            ));
        }
        if let Some(rep) = &r.report {
            warnings.extend(
                rep.errors
                    .iter()
                    .map(|e| format!("replication {}: {e}", r.replication)),
            );
        }
    }
    if summary.succeeded < summary.replications {
        warnings.push(format!(
            "partial ensemble: {} of {} replications completed",
            summary.succeeded, summary.replications
        ));
    }
    Ok(Outcome {
        written: vec![json, csv_path],
        warnings,
        success: summary.succeeded > 0,
    })
}
