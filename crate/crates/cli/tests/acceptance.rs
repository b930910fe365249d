//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any enforced criterion fails.
//!
//! Criterion 4 needs a Dow Jones daily CSV (Date/Open columns) supplied via
//! `ABEM_DJ_SNAPSHOT`; without it the criterion is reported, not enforced.
//! A mismatch is also only reported unless `ABEM_DJ_SNAPSHOT_STRICT` is set,
//! since a freshly downloaded series is rarely identical to the original.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use abem_cli::{read_table_json, run_args};
use abem_core::agents::{chartist_demand, ChartistParams, FundamentalistParams, Schedule};
use abem_core::market::{price_step, MarketState, NoiseRule, PriceRule};
use abem_core::sim::{run_ensemble, run_simulation, CustomParams, ModelConfig, RunConfig};
use abem_core::stats::{
    acf_profile, autocorrelation, excess_kurtosis, fit_power_decay, hill_estimator, hill_tail_size,
    mean_var, skewness, white_noise_band,
};
use abem_core::timeseries::absolute_returns;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

enum Verdict {
    Pass(String),
    Fail(String),
    Reported(String),
}

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn rel_err(got: f64, want: f64) -> f64 {
    if want == 0.0 {
        got.abs()
    } else {
        ((got - want) / want).abs()
    }
}

fn gaussian(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

fn exactness() -> Check {
    let alt: Vec<f64> = (0..100)
        .map(|t| if t % 2 == 0 { 1.0 } else { -1.0 })
        .collect();
    let c2 = autocorrelation(&alt, 2).map_err(|e| e.to_string())?;
    ensure(
        (c2 - 0.98).abs() < 1e-12,
        format!("alternating ACF(2) = {c2}"),
    )?;

    let k = excess_kurtosis(&[-1.0, 1.0, -1.0, 1.0]).map_err(|e| e.to_string())?;
    ensure((k + 2.0).abs() < 1e-12, format!("two-point kurtosis = {k}"))?;

    let e = std::f64::consts::E;
    let mut grid = vec![e.powi(3), e.powi(2), e, 1.0];
    grid.extend((0..56).map(|i| 0.01 + i as f64 / 60.0));
    let h = hill_estimator(&grid, 0.05).map_err(|e| e.to_string())?;
    ensure((h - 0.5).abs() < 1e-12, format!("exact-log Hill = {h}"))?;

    let beta = 0.37;
    let pts: Vec<(f64, f64)> = (1..=100)
        .map(|l| (l as f64, 0.2 * (l as f64).powf(-beta)))
        .collect();
    let fit = fit_power_decay(&pts).map_err(|e| e.to_string())?;
    ensure(
        (fit.exponent - beta).abs() < 1e-10,
        format!("power fit beta = {}", fit.exponent),
    )?;
    Ok(format!(
        "ACF(2)={c2}, kurtosis={k}, Hill={h}, beta={:.12}",
        fit.exponent
    ))
}

// Straight-line reference forms.

fn naive_moment(x: &[f64], k: i32) -> f64 {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    x.iter().map(|v| (v - m).powi(k)).sum::<f64>() / n
}

fn naive_acf(x: &[f64], lag: usize) -> f64 {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    let num: f64 = (0..x.len() - lag)
        .map(|t| (x[t + lag] - m) * (x[t] - m))
        .sum();
    let den: f64 = x.iter().map(|v| (v - m) * (v - m)).sum();
    num / den
}

fn naive_hill(x: &[f64], fraction: f64) -> f64 {
    let mut pos: Vec<f64> = x.iter().copied().filter(|v| *v > 0.0).collect();
    pos.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let k = hill_tail_size(pos.len(), fraction);
    k as f64 / pos[..k].iter().map(|v| (v / pos[k]).ln()).sum::<f64>()
}

fn oracle_consistency() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for case in 0..200 {
        let n = rng.random_range(50..=1000);
        let scale = rng.random_range(0.001..100.0);
        let x: Vec<f64> = (0..n)
            .map(|_| scale * rng.sample::<f64, _>(StandardNormal).powi(3) + 0.1 * scale)
            .collect();
        let m2 = naive_moment(&x, 2);
        let pairs = [
            (skewness(&x), naive_moment(&x, 3) / m2.powf(1.5)),
            (excess_kurtosis(&x), naive_moment(&x, 4) / (m2 * m2) - 3.0),
            (hill_estimator(&x, 0.05), naive_hill(&x, 0.05)),
        ];
        for (got, want) in pairs {
            let got = got.map_err(|e| format!("case {case}: {e}"))?;
            worst = worst.max(rel_err(got, want));
        }
        for lag in [1, 3, 10, n / 4, n - 2] {
            let got = autocorrelation(&x, lag).map_err(|e| e.to_string())?;
            let want = naive_acf(&x, lag);
            // relative, with a floor so near-zero correlations compare absolutely
            worst = worst.max((got - want).abs() / want.abs().max(1e-3));
        }
        ensure(
            worst < 1e-12,
            format!("case {case}: relative error {worst:e}"),
        )?;
    }
    Ok(format!("200 inputs, worst relative error {worst:.2e}"))
}

fn calibration() -> Check {
    let mut notes = Vec::new();
    for (i, mu) in [2.0, 2.5, 3.0].into_iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(30 + i as u64);
        let x: Vec<f64> = (0..100_000)
            .map(|_| (1.0 - rng.random::<f64>()).powf(-1.0 / mu))
            .collect();
        let h = hill_estimator(&x, 0.05).map_err(|e| e.to_string())?;
        ensure(rel_err(h, mu) < 0.05, format!("Pareto mu={mu}: Hill {h}"))?;
        notes.push(format!("Hill(mu={mu})={h:.3}"));
    }

    let n = 1_000_000;
    let g = gaussian(n, 1_000_000);
    let k = excess_kurtosis(&g).map_err(|e| e.to_string())?;
    ensure(k.abs() < 0.05, format!("Gaussian kurtosis {k}"))?;
    let band = white_noise_band(n, 3.0);
    let p = acf_profile(&g, 100).map_err(|e| e.to_string())?;
    let max_c = p.values.iter().fold(0.0f64, |a, c| a.max(c.abs()));
    ensure(
        max_c < band,
        format!("Gaussian max |ACF| {max_c} vs band {band}"),
    )?;
    notes.push(format!("kurtosis={k:.4}, max|ACF|={max_c:.5}<{band:.5}"));

    let phi: f64 = 0.8;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut prev = rng.sample::<f64, _>(StandardNormal) / (1.0 - phi * phi).sqrt();
    let ar: Vec<f64> = (0..1_000_000)
        .map(|_| {
            prev = phi * prev + rng.sample::<f64, _>(StandardNormal);
            prev
        })
        .collect();
    let p = acf_profile(&ar, 20).map_err(|e| e.to_string())?;
    let dev = p
        .lags
        .iter()
        .zip(&p.values)
        .map(|(l, c)| (c - phi.powi(*l as i32)).abs())
        .fold(0.0, f64::max);
    ensure(dev < 0.01, format!("AR(1) max deviation {dev}"))?;
    notes.push(format!("AR(1) max dev={dev:.4}"));
    Ok(notes.join(", "))
}

const DJ_TABLE: [(&str, f64); 4] = [
    ("Skew", -0.53018),
    ("Excess Kurtosis", 19.94971),
    ("Hill 5%", 2.61625),
    ("AutoCorr 10", 0.01552),
];

fn table_reproduction(out: &Path) -> Verdict {
    let Some(snapshot) = std::env::var_os("ABEM_DJ_SNAPSHOT") else {
        return Verdict::Reported(
            "no Dow Jones snapshot (set ABEM_DJ_SNAPSHOT); not enforced".into(),
        );
    };
    let dir = out.join("dj");
    let res = run_args([
        "abem".into(),
        "analyze".into(),
        "--input".into(),
        snapshot,
        "--from".into(),
        "1896-05-27".into(),
        "--to".into(),
        "2018-11-14".into(),
        "--out-dir".into(),
        dir.clone().into_os_string(),
    ]);
    if let Err(e) = res {
        return Verdict::Fail(format!("analyze failed: {e:#}"));
    }
    let table = match read_table_json(&dir.join("table.json")) {
        Ok(t) => t,
        Err(e) => return Verdict::Fail(e.to_string()),
    };
    let Some(values) = table.columns[0].values.as_ref() else {
        return Verdict::Fail(format!("{:?}", table.columns[0].error));
    };
    let mut notes = Vec::new();
    let mut ok = true;
    for (label, want) in DJ_TABLE {
        let i = table
            .rows
            .iter()
            .position(|r| r == label)
            .expect("row present");
        let got = values[i];
        ok &= rel_err(got, want) <= 0.02;
        notes.push(format!("{label} {got:.5} (table {want})"));
    }
    let msg = notes.join(", ");
    if ok {
        Verdict::Pass(msg)
    } else if std::env::var_os("ABEM_DJ_SNAPSHOT_STRICT").is_some() {
        Verdict::Fail(msg)
    } else {
        // revised vendor data drifts from the published numbers
        Verdict::Reported(format!("snapshot differs beyond 2%: {msg}"))
    }
}

fn stylized_facts() -> Check {
    let reps = 20;
    let cfg = RunConfig::cross_herding_default(2018);
    let mut kurt = Vec::new();
    let mut raw_inside = 0;
    let mut abs_clustered = 0;
    let mut mean_profile = vec![0.0; 100];
    for res in run_ensemble(&cfg, reps) {
        let out = res.map_err(|e| e.to_string())?;
        let r = out.returns.values();
        let band = white_noise_band(r.len(), 3.0);
        kurt.push(excess_kurtosis(r).map_err(|e| e.to_string())?);
        let raw = acf_profile(r, 100).map_err(|e| e.to_string())?;
        if [10, 20, 50, 100]
            .iter()
            .all(|&l| raw.get(l).unwrap().abs() < band)
        {
            raw_inside += 1;
        }
        let abs = absolute_returns(&out.returns).map_err(|e| e.to_string())?;
        let ap = acf_profile(abs.values(), 100).map_err(|e| e.to_string())?;
        if ap.get(10).unwrap() > 3.0 * band {
            abs_clustered += 1;
        }
        for (m, v) in mean_profile.iter_mut().zip(&ap.values) {
            *m += v / reps as f64;
        }
    }
    let (m, v) = mean_var(&kurt).map_err(|e| e.to_string())?;
    let sd = (v * reps as f64 / (reps - 1) as f64).sqrt();
    let t = m / (sd / (reps as f64).sqrt());
    let pts: Vec<(f64, f64)> = (1..=100).map(|l| l as f64).zip(mean_profile).collect();
    let beta = fit_power_decay(&pts).map_err(|e| e.to_string())?.exponent;
    let summary = format!(
        "kurtosis mean {m:.3} (t={t:.1}), raw ACF in band {raw_inside}/{reps}, abs ACF(10)>3x band {abs_clustered}/{reps}, beta={beta:.3}"
    );
    ensure(
        m > 0.0 && t > 3.0 && raw_inside >= 15 && abs_clustered >= 15 && beta > 0.0,
        summary.clone(),
    )?;
    Ok(summary)
}

fn dir_bytes(dir: &Path) -> Result<Vec<(PathBuf, Vec<u8>)>, String> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().path())
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| {
            let b = fs::read(&p).map_err(|e| e.to_string())?;
            Ok((PathBuf::from(p.file_name().unwrap()), b))
        })
        .collect()
}

fn determinism(out: &Path) -> Check {
    let configs = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let cross = configs.join("cross_herding.json");
    let prices = out.join("prices.csv");
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut s = 3.0f64;
    let mut text = String::from("Date,Open\n");
    let start = chrono::NaiveDate::from_ymd_opt(1960, 1, 4).unwrap();
    for d in start.iter_days().take(20_000) {
        s += 0.01 * rng.sample::<f64, _>(StandardNormal);
        text.push_str(&format!("{d},{}\n", s.exp()));
    }
    fs::write(&prices, text).map_err(|e| e.to_string())?;

    let (cross, prices) = (cross.to_str().unwrap(), prices.to_str().unwrap());
    let jobs: [(&str, Vec<&str>); 4] = [
        (
            "simulate",
            vec!["simulate", "--config", cross, "--seed", "5"],
        ),
        (
            "ensemble",
            vec!["ensemble", "--config", cross, "--replications", "8"],
        ),
        (
            "ensemble-seq",
            vec![
                "ensemble",
                "--config",
                cross,
                "--replications",
                "8",
                "--sequential",
            ],
        ),
        ("analyze", vec!["analyze", "--input", prices]),
    ];
    let mut outputs = Vec::new();
    for (name, args) in &jobs {
        let mut runs = Vec::new();
        for k in 0..2 {
            let dir = out.join(format!("{name}_{k}"));
            let mut a = vec!["abem"];
            a.extend(args);
            a.extend(["--out-dir", dir.to_str().unwrap()]);
            run_args(a).map_err(|e| format!("{name}: {e:#}"))?;
            runs.push(dir_bytes(&dir)?);
        }
        ensure(
            runs[0] == runs[1],
            format!("{name}: outputs differ between runs"),
        )?;
        outputs.push(runs.remove(0));
    }
    ensure(
        outputs[1] == outputs[2],
        "parallel and sequential ensembles differ",
    )?;
    let files: usize = outputs.iter().map(Vec::len).sum();
    Ok(format!(
        "{files} files byte-identical across repeats; parallel == sequential"
    ))
}

fn fundamentalist_only(agt: f64) -> Result<usize, String> {
    let cfg = RunConfig {
        model: ModelConfig::Custom(CustomParams {
            fundamentalists: vec![FundamentalistParams {
                a: 1.0,
                log_fundamental: Schedule::Constant(-0.4),
            }],
            chartists: vec![],
            herding: None,
        }),
        steps: 10_000,
        dt: 0.01,
        seed: 0,
        price_rule: PriceRule::linear(agt / 0.01, NoiseRule::Constant { sigma0: 0.0 }),
        initial_log_price: 0.6,
        burn_in: Some(0),
        record_positions: false,
    };
    let out = run_simulation(&cfg).map_err(|e| e.to_string())?;
    out.log_prices
        .iter()
        .position(|s| (s + 0.4).abs() < 1e-8)
        .filter(|&k| out.log_prices[k..].iter().all(|s| (s + 0.4).abs() < 1e-8))
        .ok_or_else(|| {
            format!(
                "a*gamma*dt={agt}: no convergence, final {}",
                out.log_prices.last().unwrap()
            )
        })
}

/// Chartist-only loop `S_{k+1} = S_k + gamma*dt*b*(S_k - S_{k-1})`. Its
/// characteristic roots are 1 and `g = b*gamma*dt`, so increments scale by
/// exactly `g` per step.
fn chartist_only(b: f64, gamma: f64, dt: f64) -> Result<f64, String> {
    let rule = PriceRule::linear(gamma, NoiseRule::Constant { sigma0: 0.0 });
    let g = b * gamma * dt;
    let params = ChartistParams { b };
    let mut prev = 0.0;
    let mut state = MarketState::new(1e-6, dt).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    let mut last_inc = state.log_price - prev;
    for _ in 0..100 {
        let ed = chartist_demand(params.b, state.log_price, prev);
        let next = price_step(&state, ed, &rule, 0.0).map_err(|e| e.to_string())?;
        let inc = next.log_price - state.log_price;
        worst = worst.max(rel_err(inc / last_inc, g));
        last_inc = inc;
        prev = state.log_price;
        state = next;
    }
    ensure(last_inc.abs() > 1e-6, "displacement did not grow")?;
    Ok(worst)
}

fn dynamics() -> Check {
    let mut notes = Vec::new();
    for agt in [0.5, 1.0, 1.5, 1.9] {
        let k = fundamentalist_only(agt)?;
        notes.push(format!("a*gamma*dt={agt}: converged by step {k}"));
    }
    for (b, gamma, dt) in [(1.05, 1.0, 1.0), (2.2, 1.0, 0.5), (0.6, 4.0, 0.5)] {
        let worst = chartist_only(b, gamma, dt)?;
        ensure(
            worst < 1e-6,
            format!("chartist growth ratio error {worst:e}"),
        )?;
        notes.push(format!(
            "growth {:.2}: ratio error {worst:.1e}",
            b * gamma * dt
        ));
    }
    Ok(notes.join("; "))
}

fn timed(limit: Duration, f: impl FnOnce() -> Check) -> (Verdict, Duration) {
    let t = Instant::now();
    let r = f();
    let el = t.elapsed();
    let v = match r {
        Ok(msg) if el <= limit => Verdict::Pass(msg),
        Ok(msg) => Verdict::Fail(format!("{msg}; took {el:.2?} > {limit:?}")),
        Err(msg) => Verdict::Fail(msg),
    };
    (v, el)
}

fn main() {
    let tmp = tempfile::tempdir().expect("temp dir");
    let secs = Duration::from_secs;
    let mut results: Vec<(u32, &str, (Verdict, Duration))> = vec![
        (1, "estimator exactness", timed(secs(1), exactness)),
        (2, "oracle consistency", timed(secs(10), oracle_consistency)),
        (3, "statistical calibration", timed(secs(120), calibration)),
    ];
    let t = Instant::now();
    let v4 = table_reproduction(tmp.path());
    results.push((4, "table reproduction", (v4, t.elapsed())));
    results.push((
        5,
        "stylized-fact emergence",
        timed(secs(300), stylized_facts),
    ));
    results.push((
        6,
        "determinism",
        timed(secs(60), || determinism(tmp.path())),
    ));
    results.push((7, "dynamics sanity", timed(secs(60), dynamics)));

    let mut failed = 0;
    for (n, name, (v, el)) in &results {
        let (tag, msg) = match v {
            Verdict::Pass(m) => ("PASS", m),
            Verdict::Fail(m) => {
                failed += 1;
                ("FAIL", m)
            }
            Verdict::Reported(m) => ("REPORTED", m),
        };
        println!("criterion {n} [{tag}] {name} ({el:.2?}): {msg}");
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
