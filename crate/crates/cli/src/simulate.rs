use std::fmt::Write as _;
use std::path::PathBuf;

use bgumbel_core::distribution::{bg_cdf, bg_moment_set};
use bgumbel_core::sampling::{mh_sample, summarize, write_draws_csv};
use bgumbel_core::selection::ks_test;
use bgumbel_core::{BgParams, McmcConfig, QuadratureSpec};
use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::args::SeedArg;
use crate::error::{CliError, Result};
use crate::io::{emit, emit_csv, to_json, write_atomic};
use crate::manifest::{Report, RunManifest};
use crate::Status;

/// Parameter rows of the study, as (μ, σ, δ).
pub const ROWS: [(f64, f64, f64); 4] = [
    (-2.0, 1.0, -1.0),
    (-1.0, 2.0, -1.0),
    (-1.0, 2.0, -2.0),
    (-2.0, 2.0, -1.0),
];

/// Chain lengths at which convergence is reported.
const PREFIXES: [usize; 3] = [1_000, 10_000, 100_000];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableFormat {
    Markdown,
    Csv,
    Json,
}

#[derive(Debug, Args, Serialize)]
pub struct SimulateArgs {
    /// Draws kept per chain
    #[arg(long, default_value_t = 100_000)]
    pub n: usize,
    /// Base seed; row i uses seed + i
    #[command(flatten)]
    #[serde(flatten)]
    pub seed: SeedArg,
    #[arg(long, value_enum, default_value = "markdown")]
    pub format: TableFormat,
    /// Output file; stdout if omitted
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Directory for chain prefixes row<i>_n<k>.csv at k = 1e3, 1e4, 1e5
    #[arg(long)]
    pub prefix_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyRow {
    pub mu: f64,
    pub sigma: f64,
    pub delta: f64,
    pub sample_mean: f64,
    pub population_mean: f64,
    pub bias_mean: f64,
    pub sample_variance: f64,
    pub population_variance: f64,
    pub bias_variance: f64,
    pub acceptance_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergencePoint {
    pub row: usize,
    pub n: usize,
    pub bias_mean: f64,
    pub bias_variance: f64,
    /// Sup-distance between the prefix's empirical CDF and the model CDF.
    pub ks_distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Study {
    pub rows: Vec<StudyRow>,
    pub convergence: Vec<ConvergencePoint>,
}

fn run_row(i: usize, q: &BgParams, a: &SimulateArgs) -> Result<(StudyRow, Vec<ConvergencePoint>)> {
    let n = a.n;
    let cfg = McmcConfig {
        n_iterations: n + n / 10,
        burn_in: n / 10,
        ..McmcConfig::for_params(q, n + n / 10, a.seed.seed.wrapping_add(i as u64))
    };
    let chain = mh_sample(q, &cfg)?;
    let pop = bg_moment_set(q)?;
    let s = summarize(&chain.draws)?;
    let row = StudyRow {
        mu: q.mu,
        sigma: q.sigma,
        delta: q.delta,
        sample_mean: s.mean,
        population_mean: pop.mean,
        bias_mean: s.mean - pop.mean,
        sample_variance: s.variance,
        population_variance: pop.variance,
        bias_variance: s.variance - pop.variance,
        acceptance_rate: chain.acceptance_rate,
    };
    let spec = QuadratureSpec::default();
    let mut points = Vec::new();
    for k in PREFIXES.into_iter().filter(|&k| k <= n) {
        let prefix = &chain.draws[..k];
        let ps = summarize(prefix)?;
        let ks = ks_test(prefix, |x| bg_cdf(q, x, &spec))?;
        points.push(ConvergencePoint {
            row: i + 1,
            n: k,
            bias_mean: ps.mean - pop.mean,
            bias_variance: ps.variance - pop.variance,
            ks_distance: ks.statistic,
        });
        if let Some(dir) = &a.prefix_dir {
            let mut csv = Vec::new();
            write_draws_csv(prefix, &mut csv).expect("writing to memory");
            write_atomic(&dir.join(format!("row{}_n{k}.csv", i + 1)), &csv)?;
        }
    }
    Ok((row, points))
}

pub fn run(a: &SimulateArgs) -> Result<Status> {
    if a.n < 2 {
        return Err(CliError::Usage("--n must be at least 2".into()));
    }
    if let Some(dir) = &a.prefix_dir {
        std::fs::create_dir_all(dir).map_err(|source| CliError::Write {
            path: dir.display().to_string(),
            source,
        })?;
    }
    let mut study = Study {
        rows: Vec::new(),
        convergence: Vec::new(),
    };
    for (i, &(mu, sigma, delta)) in ROWS.iter().enumerate() {
        let (row, points) = run_row(i, &BgParams::new(mu, sigma, delta)?, a)?;
        study.rows.push(row);
        study.convergence.extend(points);
    }
    let manifest = RunManifest::new("simulate", Some(a.seed.seed), a);
    if let Some(dir) = &a.prefix_dir {
        write_atomic(&dir.join("manifest.json"), &to_json(&manifest))?;
    }
    let out = a.output.as_deref();
    match a.format {
        TableFormat::Json => emit(
            out,
            &to_json(&Report {
                manifest,
                result: study,
            }),
        )?,
        TableFormat::Csv => emit_csv(out, &csv_table(&study), manifest, &study.convergence)?,
        TableFormat::Markdown => emit_csv(out, &markdown_table(&study), manifest, &study.convergence)?,
    }
    Ok(Status::Done)
}

fn csv_table(s: &Study) -> String {
    let mut t = String::from(
        "mu,sigma,delta,sample_mean,population_mean,bias_mean,sample_variance,population_variance,bias_variance,acceptance_rate\n",
    );
    for r in &s.rows {
        writeln!(
            t,
            "{},{},{},{},{},{},{},{},{},{}",
            r.mu,
            r.sigma,
            r.delta,
            r.sample_mean,
            r.population_mean,
            r.bias_mean,
            r.sample_variance,
            r.population_variance,
            r.bias_variance,
            r.acceptance_rate
        )
        .unwrap();
    }
    t
}

fn markdown_table(s: &Study) -> String {
    let mut t = String::from(
        "| μ | σ | δ | sample mean | E(X) | bias (mean) | sample variance | Var(X) | bias (variance) |\n\
         |---|---|---|---:|---:|---:|---:|---:|---:|\n",
    );
    for r in &s.rows {
        writeln!(
            t,
            "| {} | {} | {} | {:.4} | {:.4} | {:.4} | {:.4} | {:.4} | {:.4} |",
            r.mu,
            r.sigma,
            r.delta,
            r.sample_mean,
            r.population_mean,
            r.bias_mean,
            r.sample_variance,
            r.population_variance,
            r.bias_variance
        )
        .unwrap();
    }
    t.push_str("\n| row | n | bias (mean) | bias (variance) | KS distance |\n|---:|---:|---:|---:|---:|\n");
    for c in &s.convergence {
        writeln!(
            t,
            "| {} | {} | {:.4} | {:.4} | {:.4} |",
            c.row, c.n, c.bias_mean, c.bias_variance, c.ks_distance
        )
        .unwrap();
    }
    t
}
