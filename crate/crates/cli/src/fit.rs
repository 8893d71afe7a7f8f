use std::path::PathBuf;

use bgumbel_core::inference::{fit_gumbel_mle, fit_mle};
use bgumbel_core::selection::{
    block_maxima, compare_models, descriptive_stats, gof_report, ljung_box, CompareOptions, DescriptiveStats, BG_MODEL,
    GUMBEL_MODEL,
};
use bgumbel_core::{BlockMaximaConfig, FitOptions, ModelReport};
use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::io::{emit, read_column, to_json};
use crate::manifest::RunManifest;
use crate::Status;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelChoice {
    Bg,
    Gumbel,
    Both,
}

#[derive(Debug, Args, Serialize)]
pub struct FitArgs {
    /// CSV with one numeric column; a non-numeric first line is a header
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "both")]
    pub model: ModelChoice,
    /// Subtract the sample mean before fitting (default)
    #[arg(long, overrides_with = "no_center")]
    pub center: bool,
    /// Fit the data as given
    #[arg(long, overrides_with = "center")]
    pub no_center: bool,
    /// Reduce the series to maxima of blocks of this length first
    #[arg(long)]
    pub blocks: Option<usize>,
    /// Keep the maximum of a shorter trailing block
    #[arg(long, requires = "blocks")]
    pub partial_last_block: bool,
    /// Ljung-Box lags [default: min(10, n/5), at least 1]
    #[arg(long)]
    pub ljung_box_lags: Option<usize>,
    /// Warn when the Ljung-Box p-value falls below this level
    #[arg(long, default_value_t = 0.017)]
    pub lb_threshold: f64,
    /// Iteration cap for each optimizer run
    #[arg(long, default_value_t = 500)]
    pub max_iter: usize,
    /// Output JSON report; stdout if omitted
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockSummary {
    pub block_length: usize,
    pub allow_partial_last_block: bool,
    /// Number of maxima τ.
    pub n_blocks: usize,
    pub full_blocks: usize,
    /// Length of the trailing partial block, 0 if none.
    pub remainder: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LjungBoxSummary {
    pub lags: usize,
    pub statistic: Option<f64>,
    pub p_value: Option<f64>,
    pub threshold: f64,
    pub warning: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelError {
    pub model: String,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub manifest: RunManifest,
    pub input: String,
    pub n_input: usize,
    pub blocks: Option<BlockSummary>,
    pub ljung_box: LjungBoxSummary,
    /// Of the data after block reduction, before centering.
    pub descriptive: DescriptiveStats,
    pub centered: bool,
    pub shift: f64,
    pub models: Vec<ModelReport>,
    pub errors: Vec<ModelError>,
    /// Only set for `--model both`.
    pub preferred: Option<String>,
    pub converged: bool,
}

fn screen(data: &[f64], lags: Option<usize>, threshold: f64) -> LjungBoxSummary {
    let lags = lags.unwrap_or((data.len() / 5).clamp(1, 10));
    let mut s = LjungBoxSummary {
        lags,
        statistic: None,
        p_value: None,
        threshold,
        warning: None,
    };
    match ljung_box(data, lags) {
        Ok(r) => {
            s.statistic = Some(r.statistic);
            s.p_value = Some(r.p_value);
            if r.p_value < threshold {
                s.warning = Some(format!(
                    "Ljung-Box p-value {:.4} is below {threshold}; the data may be serially dependent",
                    r.p_value
                ));
            }
        }
        Err(e) => s.warning = Some(format!("Ljung-Box test not computed: {e}")),
    }
    s
}

pub fn run(a: &FitArgs) -> Result<Status> {
    let raw = read_column(&a.input)?;
    let (data, blocks) = match a.blocks {
        Some(len) => {
            if len == 0 {
                return Err(CliError::Usage("--blocks must be at least 1".into()));
            }
            let cfg = BlockMaximaConfig {
                block_length: len,
                allow_partial_last_block: a.partial_last_block,
            };
            let m = block_maxima(&raw, &cfg)?;
            let summary = BlockSummary {
                block_length: len,
                allow_partial_last_block: a.partial_last_block,
                n_blocks: m.len(),
                full_blocks: raw.len() / len,
                remainder: raw.len() % len,
            };
            (m, Some(summary))
        }
        None => (raw.clone(), None),
    };
    if data.len() < 5 {
        return Err(CliError::Usage(format!(
            "need at least 5 values to fit, got {}",
            data.len()
        )));
    }

    let lb = screen(&data, a.ljung_box_lags, a.lb_threshold);
    if let Some(w) = &lb.warning {
        eprintln!("bgumbel: warning: {w}");
    }
    let descriptive = descriptive_stats(&data)?;
    let center = !a.no_center;
    let fit_opts = FitOptions {
        max_iter: a.max_iter,
        ..FitOptions::default()
    };

    let mut models = Vec::new();
    let mut errors = Vec::new();
    let mut preferred = None;
    let shift;
    if a.model == ModelChoice::Both {
        let c = compare_models(&data, &CompareOptions { center, fit: fit_opts })?;
        shift = c.shift;
        preferred = c.preferred;
        for (name, report, err) in [(BG_MODEL, c.bg, c.bg_error), (GUMBEL_MODEL, c.gumbel, c.gumbel_error)] {
            models.extend(report);
            if let Some(error) = err {
                errors.push(ModelError {
                    model: name.into(),
                    error,
                });
            }
        }
    } else {
        shift = if center { descriptive.mean } else { 0.0 };
        let x: Vec<f64> = data.iter().map(|v| v - shift).collect();
        let (name, k, fit) = match a.model {
            ModelChoice::Bg => (BG_MODEL, 3, fit_mle(&x, &fit_opts)),
            _ => (GUMBEL_MODEL, 2, fit_gumbel_mle(&x, &fit_opts)),
        };
        match fit.and_then(|f| gof_report(name, &f, &x, k)) {
            Ok(r) => models.push(r),
            Err(e) => errors.push(ModelError {
                model: name.into(),
                error: e.to_string(),
            }),
        }
    }

    let converged = models.iter().all(|m| m.converged);
    let report = FitReport {
        manifest: RunManifest::new("fit", None, a),
        input: a.input.display().to_string(),
        n_input: raw.len(),
        blocks,
        ljung_box: lb,
        descriptive,
        centered: center,
        shift,
        models,
        errors,
        preferred,
        converged,
    };
    emit(a.output.as_deref(), &to_json(&report))?;

    if !report.errors.is_empty() {
        for e in &report.errors {
            eprintln!("bgumbel: {} fit failed: {}", e.model, e.error);
        }
        return Ok(Status::FitFailed);
    }
    if !converged {
        eprintln!("bgumbel: an optimizer stopped before converging; the report is partial");
        return Ok(Status::NotConverged);
    }
    Ok(Status::Done)
}
