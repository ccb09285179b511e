//! `compare`: monomial-vs-Hermite error-ratio campaign over seeded synthetic
//! trajectories.
//!
//! For every order in the grid and every campaign seed, the two bases are
//! scored on identical ground-truth prediction tasks; the table reports the
//! per-(order, horizon) mean ratio R = taylor MSE / hermite MSE with a
//! normal-approximation 95% confidence interval, plus the ratio of the
//! horizon-cumulative MSEs.

use crate::config_file::{ConfigMap, resolve, resolve_required};
use crate::generator_args::{GeneratorArgs, GeneratorDefaults};
use crate::output::{fmt_f64, write_atomic};
use anyhow::{Context, Result};
use clap::Args;
use hicache_core::{BasisConfig, ErrorReport, derive_seed, generate, non_cumulative_eval};
use rayon::prelude::*;
use std::path::PathBuf;

#[derive(Args, Debug)]
pub struct CompareArgs {
    #[command(flatten)]
    pub generator: GeneratorArgs,

    /// Activation interval N.
    #[arg(long)]
    pub interval: Option<u32>,

    /// Comma-separated expansion orders.
    #[arg(long)]
    pub orders: Option<String>,

    /// Contraction factor of the Hermite slot.
    #[arg(long)]
    pub sigma: Option<f64>,

    /// Number of campaign seeds.
    #[arg(long)]
    pub seeds: Option<usize>,

    /// Output CSV path.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Key-value config file supplying defaults for any flag.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

fn parse_orders(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .with_context(|| format!("bad order {part:?}"))
        })
        .collect()
}

struct Cell {
    ratios: Vec<f64>,
    cumulative_ratios: Vec<f64>,
    taylor_mse_sum: f64,
    hermite_mse_sum: f64,
}

pub fn run(args: &CompareArgs) -> Result<()> {
    let config = match &args.config {
        Some(path) => ConfigMap::load(path)?,
        None => ConfigMap::empty(),
    };
    let generator = args
        .generator
        .resolve(&config, &GeneratorDefaults::default())?;
    let interval: u32 = resolve(&args.interval, &config, "interval", 6)?;
    let orders_text: String = resolve(&args.orders, &config, "orders", "1,2,3,4,5".to_string())?;
    let sigma: f64 = resolve(&args.sigma, &config, "sigma", 0.5)?;
    let n_seeds: usize = resolve(&args.seeds, &config, "seeds", 100)?;
    let out: String = resolve_required(
        &args.out.as_ref().map(|p| p.display().to_string()),
        &config,
        "out",
    )?;
    config.finish()?;

    let orders = parse_orders(&orders_text)?;
    let horizons = (interval - 1) as usize;

    // One (order, seed) evaluation per campaign task, fanned out across
    // workers; collected in deterministic task order.
    let reports: Vec<(usize, ErrorReport)> = orders
        .iter()
        .flat_map(|&order| (0..n_seeds).map(move |seed_idx| (order, seed_idx)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(order, seed_idx)| -> Result<(usize, ErrorReport)> {
            let seed = derive_seed(generator.seed, seed_idx as u64);
            let truth = generate(&generator.spec_with_seed(seed))?;
            let configs = [
                BasisConfig::taylor(order),
                BasisConfig::scaled_hermite(sigma, order)?,
            ];
            let report = non_cumulative_eval(&truth, interval, &configs)?;
            Ok((order, report))
        })
        .collect::<Result<_>>()?;

    let mut rows = String::from(
        "order,horizon,taylor_mse,hermite_mse,ratio_mean,ratio_ci_lo,ratio_ci_hi,cumulative_ratio_mean\n",
    );
    for &order in &orders {
        let mut cells: Vec<Cell> = (0..horizons)
            .map(|_| Cell {
                ratios: Vec::with_capacity(n_seeds),
                cumulative_ratios: Vec::with_capacity(n_seeds),
                taylor_mse_sum: 0.0,
                hermite_mse_sum: 0.0,
            })
            .collect();
        for (report_order, report) in &reports {
            if *report_order != order {
                continue;
            }
            let taylor = &report.entries[0];
            let hermite = &report.entries[1];
            for (k, cell) in cells.iter_mut().enumerate() {
                cell.taylor_mse_sum += taylor.per_horizon_mse[k];
                cell.hermite_mse_sum += hermite.per_horizon_mse[k];
                if let Some(r) = hermite.per_horizon_ratio[k].value() {
                    cell.ratios.push(r);
                }
                if let Some(r) = hermite.cumulative_ratio[k].value() {
                    cell.cumulative_ratios.push(r);
                }
            }
        }

        for (k, cell) in cells.iter().enumerate() {
            let taylor_mse = cell.taylor_mse_sum / n_seeds as f64;
            let hermite_mse = cell.hermite_mse_sum / n_seeds as f64;
            let (mean, lo, hi) = mean_with_ci(&cell.ratios);
            let (cum_mean, _, _) = mean_with_ci(&cell.cumulative_ratios);
            rows.push_str(&format!(
                "{order},{},{},{},{},{},{},{}\n",
                k + 1,
                fmt_f64(taylor_mse),
                fmt_f64(hermite_mse),
                fmt_opt(mean),
                fmt_opt(lo),
                fmt_opt(hi),
                fmt_opt(cum_mean),
            ));
        }
    }
    write_atomic(out.as_ref(), rows.as_bytes())?;

    println!(
        "compare kind={} interval={interval} orders={orders_text} sigma={} seeds={n_seeds} rows={} out={out}",
        generator.kind_label,
        fmt_f64(sigma),
        orders.len() * horizons,
    );
    Ok(())
}

fn fmt_opt(value: Option<f64>) -> String {
    match value {
        Some(v) => fmt_f64(v),
        None => "undefined".to_string(),
    }
}

/// Mean and 95% normal-approximation confidence interval; `None` when no
/// defined values exist.
fn mean_with_ci(values: &[f64]) -> (Option<f64>, Option<f64>, Option<f64>) {
    if values.is_empty() {
        return (None, None, None);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (Some(mean), Some(mean), Some(mean));
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    let half_width = 1.96 * (var / n).sqrt();
    (Some(mean), Some(mean - half_width), Some(mean + half_width))
}
