//! The bimodal Gumbel (BG) distribution: density, distribution function and
//! moments, mode and hazard analysis, sampling, maximum-likelihood fitting and
//! Gumbel-vs-BG model comparison for block maxima.

pub mod distribution;
pub mod error;
pub mod inference;
pub mod sampling;
pub mod selection;
pub mod shape;
pub mod special;

pub use distribution::{BgParams, GumbelParams, MomentSet};
pub use error::{BgError, Result};
pub use inference::{FitOptions, FitResult, StdErrors};
pub use sampling::{Chain, ChainSummary, McmcConfig};
pub use selection::{BlockMaximaConfig, Comparison, GofReport, ModelReport};
pub use shape::{Modality, ShapeReport};
pub use special::QuadratureSpec;
