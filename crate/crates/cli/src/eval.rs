use std::fmt::Write as _;
use std::path::PathBuf;

use bgumbel_core::distribution::{bg_cdf, bg_moment_set, bg_pdf};
use bgumbel_core::shape::{find_modes, hazard};
use bgumbel_core::QuadratureSpec;
use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::args::{parse_grid, Grid, ParamArgs};
use crate::error::{CliError, Result};
use crate::io::{emit, emit_csv, to_json};
use crate::manifest::{Report, RunManifest};
use crate::Status;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantity {
    Pdf,
    Cdf,
    Hazard,
    Moments,
    Shape,
}

#[derive(Debug, Args, Serialize)]
pub struct EvalArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub params: ParamArgs,
    /// Quantity to evaluate
    #[arg(long, value_enum)]
    pub what: Quantity,
    /// Evaluation grid lo:hi:n (pdf, cdf, hazard)
    #[arg(long, value_parser = parse_grid, conflicts_with = "at", allow_hyphen_values = true)]
    pub grid: Option<Grid>,
    /// Single evaluation point (pdf, cdf, hazard)
    #[arg(long, allow_negative_numbers = true)]
    pub at: Option<f64>,
    /// Output file; stdout if omitted. CSV files get a .manifest.json sidecar.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

pub fn run(a: &EvalArgs) -> Result<Status> {
    let p = a.params.params()?;
    let manifest = RunManifest::new("eval", None, a);
    let spec = QuadratureSpec::default();
    let out = a.output.as_deref();

    let xs = || -> Result<Vec<f64>> {
        match (a.grid, a.at) {
            (Some(g), _) => Ok(g.points()),
            (None, Some(x)) => Ok(vec![x]),
            (None, None) => Err(CliError::Usage(format!(
                "--what {} needs --grid lo:hi:n or --at x",
                a.what.to_possible_value().expect("no skipped variants").get_name()
            ))),
        }
    };

    match a.what {
        Quantity::Pdf => {
            let mut csv = String::from("x,pdf\n");
            for x in xs()? {
                writeln!(csv, "{x},{}", bg_pdf(&p, x)).unwrap();
            }
            emit_csv(out, &csv, manifest, ())?;
        }
        Quantity::Cdf => {
            let mut csv = String::from("x,cdf\n");
            for x in xs()? {
                writeln!(csv, "{x},{}", bg_cdf(&p, x, &spec)?).unwrap();
            }
            emit_csv(out, &csv, manifest, ())?;
        }
        Quantity::Hazard => {
            let mut csv = String::from("x,survival,hazard\n");
            for x in xs()? {
                let h = hazard(&p, x, &spec)?;
                writeln!(csv, "{x},{},{}", h.survival, h.hazard).unwrap();
            }
            emit_csv(out, &csv, manifest, ())?;
        }
        Quantity::Moments => {
            let result = bg_moment_set(&p)?;
            emit(out, &to_json(&Report { manifest, result }))?;
        }
        Quantity::Shape => {
            let result = find_modes(&p)?;
            emit(out, &to_json(&Report { manifest, result }))?;
        }
    }
    Ok(Status::Done)
}
