//! `predict`: run the caching schedule over a recorded trace, emitting
//! per-step errors (CSV) and a run summary (JSON).

use crate::config_file::{ConfigMap, resolve, resolve_required};
use crate::output::{fmt_f64, write_atomic};
use anyhow::{Context, Result, bail};
use clap::Args;
use hicache_core::{
    BasisConfig, BusyOracle, Direction, ScheduleConfig, StepMode, TrajectoryOracle, read_trace,
    run_schedule,
};
use serde::Serialize;
use std::path::PathBuf;

#[derive(Args, Debug)]
pub struct PredictArgs {
    /// Input trace file (binary or CSV).
    #[arg(long)]
    pub trace: Option<PathBuf>,

    /// Activation interval N.
    #[arg(long)]
    pub interval: Option<u32>,

    /// Maximum expansion order.
    #[arg(long)]
    pub order: Option<usize>,

    /// Prediction basis: taylor or hermite.
    #[arg(long)]
    pub basis: Option<String>,

    /// Contraction factor for the hermite basis.
    #[arg(long)]
    pub sigma: Option<f64>,

    /// Busy-work iterations per full compute, to make wall-clock savings
    /// visible (timing goes to stderr).
    #[arg(long)]
    pub busy_iters: Option<u64>,

    /// Per-step output CSV path.
    #[arg(long)]
    pub out_csv: Option<PathBuf>,

    /// Summary JSON path.
    #[arg(long)]
    pub out_json: Option<PathBuf>,

    /// Key-value config file supplying defaults for any flag.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Serialize)]
struct PredictSummary {
    schema_version: u32,
    command: &'static str,
    trace: String,
    total_steps: usize,
    dim: usize,
    interval: u32,
    order: usize,
    basis: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    sigma: Option<f64>,
    oracle_calls: usize,
    skipped: usize,
    speedup_proxy: f64,
    mse_full: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    mse_predicted: Option<f64>,
}

pub fn parse_basis(label: &str, sigma: f64, order: usize) -> Result<BasisConfig> {
    match label {
        "taylor" => Ok(BasisConfig::taylor(order)),
        "hermite" => Ok(BasisConfig::scaled_hermite(sigma, order)?),
        other => bail!("unknown basis {other:?}; expected taylor or hermite"),
    }
}

pub fn run(args: &PredictArgs) -> Result<()> {
    let config = match &args.config {
        Some(path) => ConfigMap::load(path)?,
        None => ConfigMap::empty(),
    };
    let trace_path: String = resolve_required(
        &args.trace.as_ref().map(|p| p.display().to_string()),
        &config,
        "trace",
    )?;
    let interval: u32 = resolve(&args.interval, &config, "interval", 6)?;
    let order: usize = resolve(&args.order, &config, "order", 2)?;
    let basis_label: String = resolve(&args.basis, &config, "basis", "hermite".to_string())?;
    let sigma: f64 = resolve(&args.sigma, &config, "sigma", 0.5)?;
    let busy_iters: u64 = resolve(&args.busy_iters, &config, "busy-iters", 0)?;
    let out_csv: String = resolve_required(
        &args.out_csv.as_ref().map(|p| p.display().to_string()),
        &config,
        "out-csv",
    )?;
    let out_json: String = resolve_required(
        &args.out_json.as_ref().map(|p| p.display().to_string()),
        &config,
        "out-json",
    )?;
    config.finish()?;

    let trajectory = read_trace(trace_path.as_ref())?;
    if !trajectory.is_dense_to_one() {
        bail!(
            "trace must cover a dense grid T..1 to drive a schedule; got {}..{} over {} steps",
            trajectory.t_max(),
            trajectory.t_min(),
            trajectory.len()
        );
    }
    let total_steps = u32::try_from(trajectory.len()).context("trace too long")?;
    let basis = parse_basis(&basis_label, sigma, order)?;
    let schedule = ScheduleConfig {
        total_steps,
        interval,
        basis,
        direction: Direction::Descending,
    };

    let started = std::time::Instant::now();
    let mut oracle = BusyOracle::new(TrajectoryOracle::new(&trajectory), busy_iters);
    let trace = run_schedule(&schedule, &mut oracle, Some(&trajectory))?;
    let elapsed = started.elapsed();

    let mut csv = String::from("t,mode,l2_error\n");
    for record in trace.records() {
        let mode = match record.mode {
            StepMode::Full => "full",
            StepMode::Predicted => "predicted",
        };
        let err = record.error_vs_truth.expect("truth was provided");
        csv.push_str(&format!("{},{mode},{}\n", record.t, fmt_f64(err)));
    }
    write_atomic(out_csv.as_ref(), csv.as_bytes())?;

    let summary = PredictSummary {
        schema_version: 1,
        command: "predict",
        trace: trace_path.clone(),
        total_steps: trace.total_steps(),
        dim: trajectory.dim(),
        interval,
        order,
        basis: basis_label.clone(),
        sigma: (basis_label == "hermite").then_some(sigma),
        oracle_calls: trace.oracle_calls(),
        skipped: trace.skipped_steps(),
        speedup_proxy: trace.speedup_proxy(),
        mse_full: trace.mse_full().unwrap_or(0.0),
        mse_predicted: trace.mse_predicted(),
    };
    let mut json = serde_json::to_string_pretty(&summary)?;
    json.push('\n');
    write_atomic(out_json.as_ref(), json.as_bytes())?;

    // Wall-clock is not deterministic, so it goes to stderr only.
    eprintln!(
        "predict wall-clock: {:.3}s (busy-iters per full compute: {busy_iters})",
        elapsed.as_secs_f64()
    );
    println!(
        "predict trace={trace_path} steps={} dim={} interval={interval} order={order} basis={basis_label} oracle_calls={} speedup_proxy={}",
        trace.total_steps(),
        trajectory.dim(),
        trace.oracle_calls(),
        fmt_f64(trace.speedup_proxy()),
    );
    Ok(())
}
