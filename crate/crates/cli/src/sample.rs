use std::path::PathBuf;

use bgumbel_core::sampling::{mh_sample, representation_sample, summarize, write_draws_csv};
use bgumbel_core::McmcConfig;
use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::args::{ParamArgs, SeedArg};
use crate::error::{CliError, Result};
use crate::io::emit_csv;
use crate::manifest::RunManifest;
use crate::Status;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Random-walk Metropolis-Hastings
    Mh,
    /// Mixture representation; needs δ(μ + σγ) < 0
    Representation,
}

#[derive(Debug, Args, Serialize)]
pub struct SampleArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub params: ParamArgs,
    /// Number of draws written
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub seed: SeedArg,
    #[arg(long, value_enum, default_value = "mh")]
    pub method: Method,
    /// Discarded initial iterations (mh) [default: 10% of the kept iterations]
    #[arg(long)]
    pub burn_in: Option<usize>,
    /// Proposal standard deviation (mh) [default: 2.4 sd(X)]
    #[arg(long)]
    pub scale: Option<f64>,
    /// Keep every k-th iteration (mh)
    #[arg(long, default_value_t = 1)]
    pub thin: usize,
    /// Output CSV; stdout if omitted. Files get a .manifest.json sidecar.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct SampleSummary {
    n: usize,
    mean: f64,
    variance: f64,
    /// Metropolis-Hastings only.
    acceptance_rate: Option<f64>,
    mcmc: Option<McmcConfig>,
}

pub fn run(a: &SampleArgs) -> Result<Status> {
    let p = a.params.params()?;
    if a.n == 0 {
        return Err(CliError::Usage("--n must be positive".into()));
    }
    let seed = a.seed.seed;
    let (draws, acceptance_rate, mcmc) = match a.method {
        Method::Mh => {
            let kept =
                a.n.checked_mul(a.thin)
                    .ok_or_else(|| CliError::Usage("--n times --thin overflows".into()))?;
            let defaults = McmcConfig::for_params(&p, kept, seed);
            let burn_in = a.burn_in.unwrap_or(kept / 10);
            let cfg = McmcConfig {
                n_iterations: burn_in + kept,
                burn_in,
                proposal_scale: a.scale.unwrap_or(defaults.proposal_scale),
                thin: a.thin,
                ..defaults
            };
            let chain = mh_sample(&p, &cfg)?;
            if chain.poorly_mixing() {
                eprintln!(
                    "bgumbel: warning: acceptance rate {:.3} is outside [0.1, 0.6]; consider changing --scale",
                    chain.acceptance_rate
                );
            }
            (chain.draws, Some(chain.acceptance_rate), Some(cfg))
        }
        Method::Representation => (representation_sample(&p, a.n, seed)?, None, None),
    };
    let s = summarize(&draws)?;
    let mut csv = Vec::new();
    write_draws_csv(&draws, &mut csv).expect("writing to memory");
    let summary = SampleSummary {
        n: s.n,
        mean: s.mean,
        variance: s.variance,
        acceptance_rate,
        mcmc,
    };
    let manifest = RunManifest::new("sample", Some(seed), a);
    emit_csv(
        a.output.as_deref(),
        std::str::from_utf8(&csv).expect("ascii"),
        manifest,
        summary,
    )?;
    Ok(Status::Done)
}
