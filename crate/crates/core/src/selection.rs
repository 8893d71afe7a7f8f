//! Block maxima, serial-independence screening and Gumbel-vs-BG comparison.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::distribution::{bg_cdf, BgParams};
use crate::error::{BgError, Result};
use crate::inference::{fit_gumbel_mle, fit_mle, FitOptions, FitResult, StdErrors};
use crate::special::QuadratureSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockMaximaConfig {
    pub block_length: usize,
    /// Keep the maximum of a trailing block shorter than `block_length`.
    pub allow_partial_last_block: bool,
}

/// Maxima of consecutive non-overlapping blocks, in series order.
pub fn block_maxima(series: &[f64], cfg: &BlockMaximaConfig) -> Result<Vec<f64>> {
    if series.is_empty() {
        return Err(BgError::EmptyData);
    }
    if cfg.block_length == 0 {
        return Err(BgError::InvalidParams("block_length must be at least 1".into()));
    }
    Ok(series
        .chunks(cfg.block_length)
        .filter(|c| cfg.allow_partial_last_block || c.len() == cfg.block_length)
        .map(|c| c.iter().copied().fold(f64::NEG_INFINITY, f64::max))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub statistic: f64,
    pub p_value: f64,
}

/// Ljung–Box portmanteau test, `Q = n(n+2) Σ_{k≤h} ρ̂ₖ²/(n−k)` against χ²(h).
pub fn ljung_box(series: &[f64], lags: usize) -> Result<TestResult> {
    let n = series.len();
    if lags == 0 {
        return Err(BgError::InvalidParams("lags must be positive".into()));
    }
    if lags >= n {
        return Err(BgError::InsufficientData {
            needed: lags + 1,
            got: n,
        });
    }
    let mean = series.iter().sum::<f64>() / n as f64;
    let dev: Vec<f64> = series.iter().map(|x| x - mean).collect();
    let c0: f64 = dev.iter().map(|d| d * d).sum();
    if c0 == 0.0 {
        return Err(BgError::DegenerateData);
    }
    let nf = n as f64;
    let mut q = 0.0;
    for k in 1..=lags {
        let ck: f64 = dev[k..].iter().zip(&dev[..n - k]).map(|(a, b)| a * b).sum();
        let rho = ck / c0;
        q += rho * rho / (nf - k as f64);
    }
    q *= nf * (nf + 2.0);
    let chi = ChiSquared::new(lags as f64).map_err(|e| BgError::Domain(e.to_string()))?;
    Ok(TestResult {
        statistic: q,
        p_value: chi.sf(q).clamp(0.0, 1.0),
    })
}

/// Survival function of the Kolmogorov distribution, P(K > λ).
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if !(lambda > 0.0) {
        return 1.0;
    }
    if lambda < 1.18 {
        let c = std::f64::consts::PI * std::f64::consts::PI / (8.0 * lambda * lambda);
        let sum: f64 = (1..=20)
            .map(|k| {
                let j = (2 * k - 1) as f64;
                (-j * j * c).exp()
            })
            .sum();
        (1.0 - (2.0 * std::f64::consts::PI).sqrt() / lambda * sum).clamp(0.0, 1.0)
    } else {
        let sum: f64 = (1..=100)
            .map(|k| {
                let kf = k as f64;
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                sign * (-2.0 * kf * kf * lambda * lambda).exp()
            })
            .sum();
        (2.0 * sum).clamp(0.0, 1.0)
    }
}

fn sorted_finite(data: &[f64]) -> Result<Vec<f64>> {
    if data.is_empty() {
        return Err(BgError::EmptyData);
    }
    if data.iter().any(|x| !x.is_finite()) {
        return Err(BgError::Domain("data contains a non-finite value".into()));
    }
    let mut v = data.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// One-sample Kolmogorov–Smirnov test with the asymptotic p-value.
///
/// Both `F_n(x)` and `F_n(x⁻)` are compared at every distinct data value, so
/// ties are handled exactly.
pub fn ks_test<F: FnMut(f64) -> Result<f64>>(data: &[f64], mut cdf: F) -> Result<TestResult> {
    let v = sorted_finite(data)?;
    let n = v.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < v.len() {
        let mut j = i;
        while j + 1 < v.len() && v[j + 1] == v[i] {
            j += 1;
        }
        let f = cdf(v[i])?;
        d = d.max(f - i as f64 / n).max((j + 1) as f64 / n - f);
        i = j + 1;
    }
    let d = d.clamp(0.0, 1.0);
    Ok(TestResult {
        statistic: d,
        p_value: kolmogorov_sf(n.sqrt() * d),
    })
}

/// Two-sample Kolmogorov–Smirnov test with the asymptotic p-value.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<TestResult> {
    let a = sorted_finite(a)?;
    let b = sorted_finite(b)?;
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    let en = (na * nb / (na + nb)).sqrt();
    Ok(TestResult {
        statistic: d,
        p_value: kolmogorov_sf(en * d),
    })
}

/// Critical value of the two-sample KS statistic at level `alpha`, from the
/// asymptotic distribution.
pub fn ks_two_sample_critical(n: usize, m: usize, alpha: f64) -> f64 {
    let c = (-0.5 * (alpha / 2.0).ln()).sqrt();
    c * ((n + m) as f64 / (n * m) as f64).sqrt()
}

/// (AIC, BIC) = (2k − 2ℓ, k ln n − 2ℓ).
pub fn information_criteria(loglik: f64, k: usize, n: usize) -> (f64, f64) {
    let k = k as f64;
    (2.0 * k - 2.0 * loglik, k * (n as f64).ln() - 2.0 * loglik)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DescriptiveStats {
    pub mean: f64,
    pub median: f64,
    pub max: f64,
    pub min: f64,
    /// Sample standard deviation, n − 1 denominator.
    pub std_dev: f64,
}

pub fn descriptive_stats(data: &[f64]) -> Result<DescriptiveStats> {
    let v = sorted_finite(data)?;
    let n = v.len();
    let mean = v.iter().sum::<f64>() / n as f64;
    let median = if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    };
    let ss: f64 = v.iter().map(|x| (x - mean).powi(2)).sum();
    Ok(DescriptiveStats {
        mean,
        median,
        max: v[n - 1],
        min: v[0],
        std_dev: if n > 1 { (ss / (n - 1) as f64).sqrt() } else { 0.0 },
    })
}

/// Goodness-of-fit summary of one fitted model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GofReport {
    pub model: String,
    pub ks_stat: f64,
    pub ks_p: f64,
    pub aic: f64,
    pub bic: f64,
    pub n: usize,
}

/// A [`GofReport`] together with the fit it describes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelReport {
    #[serde(flatten)]
    pub gof: GofReport,
    pub params: BgParams,
    pub std_errors: Option<StdErrors>,
    pub log_likelihood: f64,
    pub converged: bool,
}

pub const BG_MODEL: &str = "BG";
pub const GUMBEL_MODEL: &str = "Gumbel";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompareOptions {
    /// Subtract the sample mean before fitting.
    pub center: bool,
    pub fit: FitOptions,
}

impl Default for CompareOptions {
    fn default() -> Self {
        Self {
            center: true,
            fit: FitOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub bg: Option<ModelReport>,
    pub bg_error: Option<String>,
    pub gumbel: Option<ModelReport>,
    pub gumbel_error: Option<String>,
    /// Lowest AIC, then lowest BIC, then fewer parameters.
    pub preferred: Option<String>,
    pub centered: bool,
    /// Amount subtracted from the data before fitting.
    pub shift: f64,
}

/// Builds the report for a fitted model on `data`.
pub fn gof_report(name: &str, fit: &FitResult, data: &[f64], n_params: usize) -> Result<ModelReport> {
    let spec = QuadratureSpec::default();
    let ks = ks_test(data, |x| bg_cdf(&fit.params, x, &spec))?;
    let (aic, bic) = information_criteria(fit.log_likelihood, n_params, data.len());
    Ok(ModelReport {
        gof: GofReport {
            model: name.to_string(),
            ks_stat: ks.statistic,
            ks_p: ks.p_value,
            aic,
            bic,
            n: data.len(),
        },
        params: fit.params,
        std_errors: fit.std_errors,
        log_likelihood: fit.log_likelihood,
        converged: fit.converged,
    })
}

/// Fits BG and Gumbel to `data` and ranks them. A failure in one fit is
/// recorded in its `*_error` field and does not stop the other.
pub fn compare_models(data: &[f64], opts: &CompareOptions) -> Result<Comparison> {
    if data.len() < 5 {
        return Err(BgError::InsufficientData {
            needed: 5,
            got: data.len(),
        });
    }
    let stats = descriptive_stats(data)?;
    let shift = if opts.center { stats.mean } else { 0.0 };
    let x: Vec<f64> = data.iter().map(|v| v - shift).collect();

    let run = |name: &str, k: usize, fit: Result<FitResult>| match fit.and_then(|f| gof_report(name, &f, &x, k)) {
        Ok(r) => (Some(r), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let (bg, bg_error) = run(BG_MODEL, 3, fit_mle(&x, &opts.fit));
    let (gumbel, gumbel_error) = run(GUMBEL_MODEL, 2, fit_gumbel_mle(&x, &opts.fit));

    let preferred = match (&bg, &gumbel) {
        (Some(b), Some(g)) => {
            let (b, g) = (&b.gof, &g.gof);
            let bg_wins = b.aic < g.aic || (b.aic == g.aic && b.bic < g.bic);
            Some(if bg_wins { BG_MODEL } else { GUMBEL_MODEL }.to_string())
        }
        (Some(_), None) => Some(BG_MODEL.to_string()),
        (None, Some(_)) => Some(GUMBEL_MODEL.to_string()),
        (None, None) => None,
    };
    Ok(Comparison {
        bg,
        bg_error,
        gumbel,
        gumbel_error,
        preferred,
        centered: opts.center,
        shift,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blocks() {
        let s: Vec<f64> = (1..=10).map(f64::from).collect();
        let full = BlockMaximaConfig {
            block_length: 5,
            allow_partial_last_block: false,
        };
        assert_eq!(block_maxima(&s, &full).unwrap(), vec![5.0, 10.0]);
        let three = BlockMaximaConfig {
            block_length: 3,
            allow_partial_last_block: true,
        };
        assert_eq!(block_maxima(&s, &three).unwrap(), vec![3.0, 6.0, 9.0, 10.0]);
        assert_eq!(
            block_maxima(
                &s,
                &BlockMaximaConfig {
                    allow_partial_last_block: false,
                    ..three
                }
            )
            .unwrap(),
            vec![3.0, 6.0, 9.0]
        );
        assert_eq!(block_maxima(&[], &full), Err(BgError::EmptyData));
    }

    #[test]
    fn criteria_arithmetic() {
        assert_eq!(information_criteria(0.0, 2, 1), (4.0, 0.0));
        let (aic, bic) = information_criteria(-81.9114, 3, 29);
        assert!((aic - 169.8228).abs() < 1e-9);
        assert!((bic - (3.0 * 29f64.ln() + 163.8228)).abs() < 1e-9);
    }

    #[test]
    fn stats_of_small_set() {
        let s = descriptive_stats(&[3.0, 1.0, 2.0]).unwrap();
        assert_eq!((s.mean, s.median, s.max, s.min, s.std_dev), (2.0, 2.0, 3.0, 1.0, 1.0));
        assert_eq!(descriptive_stats(&[4.0, 1.0]).unwrap().median, 2.5);
    }

    #[test]
    fn kolmogorov_branches_agree() {
        // Both series are accurate near the switch point.
        let lo = {
            let c = std::f64::consts::PI.powi(2) / (8.0 * 1.18f64.powi(2));
            let s: f64 = (1..=20).map(|k| (-((2 * k - 1) as f64).powi(2) * c).exp()).sum();
            1.0 - (2.0 * std::f64::consts::PI).sqrt() / 1.18 * s
        };
        assert!((lo - kolmogorov_sf(1.18)).abs() < 1e-14);
        assert!((kolmogorov_sf(1.3581) - 0.05).abs() < 1e-4);
        assert_eq!(kolmogorov_sf(0.0), 1.0);
    }

    #[test]
    fn ks_handles_ties() {
        let r = ks_test(&[0.5, 0.5], Ok).unwrap();
        assert_eq!(r.statistic, 0.5);
    }

    #[test]
    fn ljung_box_errors() {
        assert!(matches!(
            ljung_box(&[1.0, 2.0], 2),
            Err(BgError::InsufficientData { .. })
        ));
        assert_eq!(ljung_box(&[1.0; 10], 2), Err(BgError::DegenerateData));
        let periodic: Vec<f64> = (0..200).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        assert!(ljung_box(&periodic, 5).unwrap().p_value < 1e-12);
    }
}
