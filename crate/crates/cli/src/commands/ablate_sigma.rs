//! `ablate-sigma`: contraction-factor sweep at fixed interval and order,
//! with the monomial basis as the baseline row.

use crate::config_file::{ConfigMap, resolve, resolve_required};
use crate::generator_args::{GeneratorArgs, GeneratorDefaults};
use crate::output::{fmt_f64, write_atomic};
use anyhow::{Context, Result};
use clap::Args;
use hicache_core::{BasisConfig, derive_seed, generate, non_cumulative_eval};
use rayon::prelude::*;
use std::path::PathBuf;

#[derive(Args, Debug)]
pub struct AblateSigmaArgs {
    #[command(flatten)]
    pub generator: GeneratorArgs,

    /// Comma-separated contraction factors to sweep.
    #[arg(long)]
    pub sigmas: Option<String>,

    /// Activation interval N.
    #[arg(long)]
    pub interval: Option<u32>,

    /// Expansion order for every swept config.
    #[arg(long)]
    pub order: Option<usize>,

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

fn parse_sigmas(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .with_context(|| format!("bad sigma {part:?}"))
        })
        .collect()
}

pub fn run(args: &AblateSigmaArgs) -> Result<()> {
    let config = match &args.config {
        Some(path) => ConfigMap::load(path)?,
        None => ConfigMap::empty(),
    };
    let generator = args
        .generator
        .resolve(&config, &GeneratorDefaults::default())?;
    let sigmas_text: String = resolve(
        &args.sigmas,
        &config,
        "sigmas",
        "0.4,0.5,0.7,1.0".to_string(),
    )?;
    let interval: u32 = resolve(&args.interval, &config, "interval", 6)?;
    let order: usize = resolve(&args.order, &config, "order", 2)?;
    let n_seeds: usize = resolve(&args.seeds, &config, "seeds", 20)?;
    let out: String = resolve_required(
        &args.out.as_ref().map(|p| p.display().to_string()),
        &config,
        "out",
    )?;
    config.finish()?;

    let sigmas = parse_sigmas(&sigmas_text)?;
    // Slot 0 is the monomial baseline; slots 1.. are the sigma sweep.
    let mut configs = vec![BasisConfig::taylor(order)];
    for &sigma in &sigmas {
        configs.push(BasisConfig::scaled_hermite(sigma, order)?);
    }

    // Mean over seeds of the cumulative MSE at the deepest horizon.
    let per_seed: Vec<Vec<f64>> = (0..n_seeds)
        .into_par_iter()
        .map(|seed_idx| -> Result<Vec<f64>> {
            let seed = derive_seed(generator.seed, seed_idx as u64);
            let truth = generate(&generator.spec_with_seed(seed))?;
            let report = non_cumulative_eval(&truth, interval, &configs)?;
            Ok(report
                .entries
                .iter()
                .map(|entry| *entry.cumulative_mse.last().expect("interval >= 2"))
                .collect())
        })
        .collect::<Result<_>>()?;

    let n_configs = configs.len();
    let mut means = vec![0.0f64; n_configs];
    for row in &per_seed {
        for (mean, v) in means.iter_mut().zip(row) {
            *mean += v;
        }
    }
    for mean in &mut means {
        *mean /= n_seeds as f64;
    }

    let mut rows = String::from("basis,sigma,mse\n");
    rows.push_str(&format!("taylor,,{}\n", fmt_f64(means[0])));
    for (sigma, mean) in sigmas.iter().zip(&means[1..]) {
        rows.push_str(&format!("hermite,{},{}\n", fmt_f64(*sigma), fmt_f64(*mean)));
    }
    write_atomic(out.as_ref(), rows.as_bytes())?;

    println!(
        "ablate-sigma kind={} interval={interval} order={order} sigmas={sigmas_text} seeds={n_seeds} out={out}",
        generator.kind_label
    );
    Ok(())
}
