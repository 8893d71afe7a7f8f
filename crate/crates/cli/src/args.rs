//! Argument types shared by several subcommands.

use bgumbel_core::BgParams;
use clap::Args;
use serde::{Deserialize, Serialize};

use crate::error::Result;

#[derive(Debug, Clone, Copy, Args, Serialize, Deserialize)]
pub struct ParamArgs {
    /// Location μ
    #[arg(long, allow_negative_numbers = true)]
    pub mu: f64,
    /// Scale σ > 0
    #[arg(long, allow_negative_numbers = true)]
    pub sigma: f64,
    /// Bimodality parameter δ
    #[arg(long, allow_negative_numbers = true)]
    pub delta: f64,
}

impl ParamArgs {
    pub fn params(&self) -> Result<BgParams> {
        Ok(BgParams::new(self.mu, self.sigma, self.delta)?)
    }
}

#[derive(Debug, Clone, Copy, Args, Serialize, Deserialize)]
pub struct SeedArg {
    /// RNG seed [env: BGUMBEL_SEED]
    #[arg(long, env = "BGUMBEL_SEED", default_value_t = 1, hide_env = true)]
    pub seed: u64,
}

/// `lo:hi:n`, n ≥ 1 points from lo to hi inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.lo];
        }
        let step = (self.hi - self.lo) / (self.n - 1) as f64;
        (0..self.n).map(|i| self.lo + step * i as f64).collect()
    }
}

pub fn parse_grid(s: &str) -> std::result::Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, n] = parts[..] else {
        return Err(format!("expected lo:hi:n, got {s:?}"));
    };
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    let (lo, hi) = (num(lo)?, num(hi)?);
    let n: usize = n.trim().parse().map_err(|e| format!("{n:?}: {e}"))?;
    if n == 0 || !lo.is_finite() || !hi.is_finite() || (n > 1 && hi <= lo) {
        return Err(format!("need finite lo < hi and n >= 1, got {s:?}"));
    }
    Ok(Grid { lo, hi, n })
}
