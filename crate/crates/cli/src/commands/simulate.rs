//! `simulate`: generate a synthetic trajectory and write it as a trace file.

use crate::config_file::{ConfigMap, resolve, resolve_required};
use crate::generator_args::{GeneratorArgs, GeneratorDefaults};
use anyhow::{Result, bail};
use clap::Args;
use hicache_core::{TraceFormat, Trajectory, generate, write_trace};
use std::path::{Path, PathBuf};

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub generator: GeneratorArgs,

    /// Output trace path.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Trace format: binary or csv.
    #[arg(long)]
    pub format: Option<String>,

    /// Key-value config file supplying defaults for any flag.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

pub fn run(args: &SimulateArgs) -> Result<()> {
    let config = match &args.config {
        Some(path) => ConfigMap::load(path)?,
        None => ConfigMap::empty(),
    };
    let generator = args
        .generator
        .resolve(&config, &GeneratorDefaults::default())?;
    let out: String = resolve_required(
        &args.out.as_ref().map(|p| p.display().to_string()),
        &config,
        "out",
    )?;
    let format_label: String = resolve(&args.format, &config, "format", "binary".to_string())?;
    let format = match format_label.as_str() {
        "binary" => TraceFormat::Binary,
        "csv" => TraceFormat::Csv,
        other => bail!("unknown trace format {other:?}; expected binary or csv"),
    };
    config.finish()?;

    let trajectory = generate(&generator.spec())?;
    write_trace_atomic(&trajectory, Path::new(&out), format)?;

    println!(
        "simulated kind={} steps={} dim={} seed={} format={} out={}",
        generator.kind_label, generator.steps, generator.dim, generator.seed, format_label, out
    );
    Ok(())
}

/// Write through a sibling temp file and rename into place, so errors never
/// leave a partial trace behind.
fn write_trace_atomic(trajectory: &Trajectory, path: &Path, format: TraceFormat) -> Result<()> {
    let file_name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".to_string());
    let tmp = path.with_file_name(format!("{file_name}.tmp"));
    match write_trace(trajectory, &tmp, format) {
        Ok(()) => {
            std::fs::rename(&tmp, path)?;
            Ok(())
        }
        Err(e) => {
            let _ = std::fs::remove_file(&tmp);
            Err(e.into())
        }
    }
}
