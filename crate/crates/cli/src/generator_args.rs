//! Generator flags shared by every command that can synthesize a trajectory.

use crate::config_file::{ConfigMap, resolve};
use anyhow::{Result, bail};
use clap::Args;
use hicache_core::{GeneratorKind, GeneratorSpec};

#[derive(Args, Debug, Clone, Default)]
pub struct GeneratorArgs {
    /// Trajectory generator: gp-se, ou or poly.
    #[arg(long)]
    pub kind: Option<String>,

    /// Feature dimension D.
    #[arg(long)]
    pub dim: Option<usize>,

    /// Number of timesteps T (trajectory runs T down to 1).
    #[arg(long)]
    pub steps: Option<usize>,

    /// Generator seed (campaign base seed for multi-seed commands).
    #[arg(long)]
    pub seed: Option<u64>,

    /// gp-se: kernel length scale.
    #[arg(long)]
    pub length_scale: Option<f64>,

    /// gp-se: kernel amplitude.
    #[arg(long)]
    pub amplitude: Option<f64>,

    /// ou: mean-reversion rate.
    #[arg(long)]
    pub theta: Option<f64>,

    /// ou: diffusion coefficient.
    #[arg(long)]
    pub ou_noise: Option<f64>,

    /// ou: starting value.
    #[arg(long)]
    pub x0: Option<f64>,

    /// poly: polynomial degree (0-4).
    #[arg(long)]
    pub degree: Option<usize>,

    /// poly: standard deviation of the random coefficients.
    #[arg(long)]
    pub coeff_scale: Option<f64>,

    /// poly: white-noise standard deviation.
    #[arg(long)]
    pub poly_noise: Option<f64>,
}

pub struct ResolvedGenerator {
    pub kind_label: String,
    pub dim: usize,
    pub steps: usize,
    pub seed: u64,
    kind: GeneratorKind,
}

impl ResolvedGenerator {
    /// Spec with this resolver's own seed.
    pub fn spec(&self) -> GeneratorSpec {
        self.spec_with_seed(self.seed)
    }

    /// Spec for one member of a seed campaign.
    pub fn spec_with_seed(&self, seed: u64) -> GeneratorSpec {
        GeneratorSpec {
            kind: self.kind,
            dim: self.dim,
            total_steps: self.steps,
            seed,
        }
    }
}

impl GeneratorArgs {
    pub fn resolve(
        &self,
        config: &ConfigMap,
        defaults: &GeneratorDefaults,
    ) -> Result<ResolvedGenerator> {
        let kind_label = resolve(&self.kind, config, "kind", defaults.kind.to_string())?;
        let dim = resolve(&self.dim, config, "dim", defaults.dim)?;
        let steps = resolve(&self.steps, config, "steps", defaults.steps)?;
        let seed = resolve(&self.seed, config, "seed", 0)?;

        let kind = match kind_label.as_str() {
            "gp-se" => GeneratorKind::GpSquaredExponential {
                length_scale: resolve(&self.length_scale, config, "length-scale", 8.0)?,
                amplitude: resolve(&self.amplitude, config, "amplitude", 1.0)?,
            },
            "ou" => GeneratorKind::OrnsteinUhlenbeck {
                theta: resolve(&self.theta, config, "theta", 0.25)?,
                noise: resolve(&self.ou_noise, config, "ou-noise", 1.0)?,
                x0: resolve(&self.x0, config, "x0", 0.0)?,
            },
            "poly" => GeneratorKind::PolyPlusNoise {
                degree: resolve(&self.degree, config, "degree", 1)?,
                coeff_scale: resolve(&self.coeff_scale, config, "coeff-scale", 1.0)?,
                noise: resolve(&self.poly_noise, config, "poly-noise", 0.0)?,
            },
            other => bail!("unknown generator kind {other:?}; expected gp-se, ou or poly"),
        };

        Ok(ResolvedGenerator {
            kind_label,
            dim,
            steps,
            seed,
            kind,
        })
    }
}

pub struct GeneratorDefaults {
    pub kind: &'static str,
    pub dim: usize,
    pub steps: usize,
}

impl Default for GeneratorDefaults {
    fn default() -> Self {
        Self {
            kind: "gp-se",
            dim: 16,
            steps: 120,
        }
    }
}
