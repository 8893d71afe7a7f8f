//! The bimodal Gumbel (BG) distribution.
//!
//! The density is the Gumbel density reweighted by the quadratic
//! `(1 − δx)² + 1`:
//!
//! ```text
//! f(x; μ, σ, δ) = [(1 − δx)² + 1] · f_G(x; μ, σ) / Z_δ
//! Z_δ = 1 + δ²σ²π²/6 + (δμ + δσγ − 1)²
//! ```
//!
//! Every expectation under the BG law decomposes into Gumbel expectations,
//! `E g(X) = {2E g(Y) − 2δE[Y g(Y)] + δ²E[Y² g(Y)]} / Z_δ` with
//! `Y ~ Gumbel(μ, σ)`. The CDF, the moments and the MGF below are all
//! instances of that identity.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{BgError, Result};
use crate::special::{
    gamma_deriv_ratio, ln_gamma, log_moment_constant, lower_log_moment_1, std_gumbel_partial_moment,
    upper_log_moment_1, QuadratureSpec, EULER_GAMMA,
};

/// Parameters (μ, σ, δ) of a bimodal Gumbel distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BgParams {
    pub mu: f64,
    pub sigma: f64,
    pub delta: f64,
}

impl BgParams {
    pub fn new(mu: f64, sigma: f64, delta: f64) -> Result<Self> {
        let p = Self { mu, sigma, delta };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.mu.is_finite() || !self.delta.is_finite() {
            return Err(BgError::InvalidParams(format!(
                "mu and delta must be finite (mu = {}, delta = {})",
                self.mu, self.delta
            )));
        }
        if !(self.sigma > 0.0) || !self.sigma.is_finite() {
            return Err(BgError::InvalidParams(format!(
                "sigma must be positive and finite, got {}",
                self.sigma
            )));
        }
        Ok(())
    }

    /// The underlying Gumbel(μ, σ) law.
    pub fn gumbel(&self) -> GumbelParams {
        GumbelParams {
            mu: self.mu,
            sigma: self.sigma,
        }
    }
}

/// Parameters of the plain Gumbel (maximum) distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GumbelParams {
    pub mu: f64,
    pub sigma: f64,
}

impl GumbelParams {
    pub fn new(mu: f64, sigma: f64) -> Result<Self> {
        BgParams::new(mu, sigma, 0.0).map(|p| p.gumbel())
    }

    pub fn pdf(&self, x: f64) -> f64 {
        self.log_pdf(x).exp()
    }

    pub fn log_pdf(&self, x: f64) -> f64 {
        let z = (x - self.mu) / self.sigma;
        -self.sigma.ln() - z - (-z).exp()
    }

    pub fn cdf(&self, x: f64) -> f64 {
        (-(-(x - self.mu) / self.sigma).exp()).exp()
    }

    pub fn quantile(&self, u: f64) -> f64 {
        self.mu - self.sigma * (-u.ln()).ln()
    }

    pub fn mean(&self) -> f64 {
        self.mu + self.sigma * EULER_GAMMA
    }

    pub fn variance(&self) -> f64 {
        self.sigma * self.sigma * PI * PI / 6.0
    }

    /// Raw moment E(Yᵏ) = Σᵢ C(k,i) μ^{k−i} σⁱ I(i; 0, ∞), for k ≤ 6.
    pub fn raw_moment(&self, k: usize) -> Result<f64> {
        let mut sum = 0.0;
        for i in 0..=k {
            sum += binomial(k, i) * self.mu.powi((k - i) as i32) * self.sigma.powi(i as i32) * log_moment_constant(i)?;
        }
        Ok(sum)
    }

    /// Truncated moment E(Yᵏ 1{Y ≤ x}).
    pub fn truncated_moment(&self, k: usize, x: f64, spec: &QuadratureSpec) -> Result<f64> {
        let z = (x - self.mu) / self.sigma;
        let partial = partial_log_moments_below(k, z, spec)?;
        let mut sum = 0.0;
        for (i, part) in partial.iter().enumerate() {
            sum += binomial(k, i) * self.mu.powi((k - i) as i32) * self.sigma.powi(i as i32) * part;
        }
        Ok(sum)
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `[I(0; w, ∞), …, I(k; w, ∞)]` with `w = e^{−z}`, i.e. the standard Gumbel
/// partial moments over `(−∞, z]`.
fn partial_log_moments_below(k: usize, z: f64, spec: &QuadratureSpec) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(k + 1);
    out.push((-(-z).exp()).exp());
    if k >= 1 {
        out.push(upper_log_moment_1(z));
    }
    for i in 2..=k {
        out.push(partial_or_zero(i, f64::NEG_INFINITY, z, spec)?);
    }
    Ok(out)
}

fn partial_or_zero(k: usize, lo: f64, hi: f64, spec: &QuadratureSpec) -> Result<f64> {
    if hi <= lo {
        return Ok(0.0);
    }
    std_gumbel_partial_moment(k, lo, hi, spec)
}

/// Normalizing constant Z_δ = 1 + δ²σ²π²/6 + (δμ + δσγ − 1)².
pub fn normalizer(p: &BgParams) -> f64 {
    let d = p.delta;
    let s = p.sigma;
    let shifted = d * p.mu + d * s * EULER_GAMMA - 1.0;
    1.0 + d * d * s * s * PI * PI / 6.0 + shifted * shifted
}

/// Density of the BG distribution.
pub fn bg_pdf(p: &BgParams, x: f64) -> f64 {
    bg_log_pdf(p, x).exp()
}

/// Log-density, evaluated without forming the density itself.
pub fn bg_log_pdf(p: &BgParams, x: f64) -> f64 {
    let z = (x - p.mu) / p.sigma;
    let u = 1.0 - p.delta * x;
    (u * u + 1.0).ln() - p.sigma.ln() - normalizer(p).ln() - z - (-z).exp()
}

/// Distribution function.
///
/// With `w = e^{−(x−μ)/σ}`:
///
/// ```text
/// Z_δ F(x) = [2 − δμ(2 − δμ)] e^{−w} + δ²σ² I(2; w, ∞)
///            − 2δ(1 − δμ) {(x − μ) e^{−w} − σ Γ(0, w)}
/// ```
///
/// The last bracket equals `σ I(1; w, ∞)` and is evaluated in that form.
pub fn bg_cdf(p: &BgParams, x: f64, spec: &QuadratureSpec) -> Result<f64> {
    p.validate()?;
    if x == f64::INFINITY {
        return Ok(1.0);
    }
    let z = (x - p.mu) / p.sigma;
    if x == f64::NEG_INFINITY || (-z).exp() > 700.0 {
        return Ok(0.0);
    }
    let (d, mu, s) = (p.delta, p.mu, p.sigma);
    let w = (-z).exp();
    let mut total = (2.0 - d * mu * (2.0 - d * mu)) * (-w).exp();
    if d != 0.0 {
        let i2 = std_gumbel_partial_moment(2, f64::NEG_INFINITY, z, spec)?;
        total += d * d * s * s * i2;
        total -= 2.0 * d * (1.0 - d * mu) * s * upper_log_moment_1(z);
    }
    Ok((total / normalizer(p)).clamp(0.0, 1.0))
}

/// Survival function 1 − F, computed from upper partial moments so that it
/// keeps full relative accuracy in the right tail.
pub fn bg_survival(p: &BgParams, x: f64, spec: &QuadratureSpec) -> Result<f64> {
    p.validate()?;
    if x == f64::NEG_INFINITY {
        return Ok(1.0);
    }
    let z = (x - p.mu) / p.sigma;
    if x == f64::INFINITY || z > 745.0 {
        return Ok(0.0);
    }
    let (d, mu, s) = (p.delta, p.mu, p.sigma);
    let w = (-z).exp();
    let upper0 = -(-w).exp_m1();
    let mut total = (2.0 - d * mu * (2.0 - d * mu)) * upper0;
    if d != 0.0 {
        let upper2 = partial_or_zero(2, z, f64::INFINITY, spec)?;
        total += d * d * s * s * upper2;
        total -= 2.0 * d * (1.0 - d * mu) * s * lower_log_moment_1(z);
    }
    Ok((total / normalizer(p)).clamp(0.0, 1.0))
}

/// CDF of the weighted Gumbel law `F_{Y_k}(x) = E(Yᵏ 1{Y ≤ x}) / E(Yᵏ)`, k ≤ 2.
pub fn weighted_gumbel_cdf(g: &GumbelParams, k: usize, x: f64, spec: &QuadratureSpec) -> Result<f64> {
    BgParams::new(g.mu, g.sigma, 0.0)?;
    if k > 2 {
        return Err(BgError::UnsupportedOrder { order: k, max: 2 });
    }
    let denom = g.raw_moment(k)?;
    if denom.abs() < 1e-12 {
        return Err(BgError::DegenerateWeight { k, value: denom });
    }
    if x == f64::INFINITY {
        return Ok(1.0);
    }
    if x == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    Ok(g.truncated_moment(k, x, spec)? / denom)
}

/// Mixture probabilities (p₁, p₂, p₃) of the representation X = W·T.
///
/// They sum to one for every parameter value; p₂ is nonnegative only when
/// δ(μ + σγ) ≤ 0.
pub fn mixture_weights(p: &BgParams) -> [f64; 3] {
    let z = normalizer(p);
    let m = p.mu + p.sigma * EULER_GAMMA;
    let d = p.delta;
    [
        2.0 / z,
        -2.0 * m * d / z,
        (p.sigma * p.sigma * PI * PI / 6.0 + m * m) * d * d / z,
    ]
}

/// Raw moment E(Xᵏ), k ≤ 4, as the binomial double sum over `I(i; 0, ∞)`.
pub fn bg_moment(p: &BgParams, k: usize) -> Result<f64> {
    p.validate()?;
    if k > 4 {
        return Err(BgError::UnsupportedOrder { order: k, max: 4 });
    }
    if k == 0 {
        return Ok(1.0);
    }
    let (mu, s, d) = (p.mu, p.sigma, p.delta);
    let kk = k as i32;
    let mut total = d * d * s.powi(kk + 2) * log_moment_constant(k + 2)?
        - d * s.powi(kk + 1) * (2.0 - d * mu * (k + 2) as f64) * log_moment_constant(k + 1)?;
    for i in 0..=k {
        let coef = 2.0 * binomial(k, i) - 2.0 * d * mu * binomial(k + 1, i) + d * d * mu * mu * binomial(k + 2, i);
        total += s.powi(i as i32) * mu.powi(kk - i as i32) * coef * log_moment_constant(i)?;
    }
    Ok(total / normalizer(p))
}

/// Explicit closed forms for E(X), E(X²), E(X³) written out in γ, π, ζ(3), ζ(5).
pub fn bg_moment_closed(p: &BgParams, k: usize) -> Result<f64> {
    p.validate()?;
    let (mu, s, d) = (p.mu, p.sigma, p.delta);
    let g = EULER_GAMMA;
    let i2 = log_moment_constant(2)?;
    let i3 = log_moment_constant(3)?;
    let i4 = log_moment_constant(4)?;
    let i5 = log_moment_constant(5)?;
    let dm = d * mu;
    let lead = 2.0 - dm * (2.0 - dm);
    let num = match k {
        0 => return Ok(1.0),
        1 => {
            d * d * s.powi(3) * i3 - d * s * s * (2.0 - 3.0 * dm) * i2
                + mu * lead
                + s * (2.0 - dm * (4.0 - 3.0 * dm)) * g
        }
        2 => {
            d * d * s.powi(4) * i4 - 2.0 * d * s.powi(3) * (1.0 - 2.0 * dm) * i3
                + mu * mu * lead
                + 2.0 * s * mu * (2.0 - dm * (3.0 - 2.0 * dm)) * g
                + 2.0 * s * s * (1.0 - 3.0 * dm * (1.0 - dm)) * i2
        }
        3 => {
            d * d * s.powi(5) * i5
                + mu.powi(3) * lead
                + s * mu * mu * (6.0 - dm * (8.0 - 5.0 * dm)) * g
                + 2.0 * s * s * mu * (3.0 - dm * (6.0 - 5.0 * dm)) * i2
                + 2.0 * s.powi(3) * (1.0 - dm * (4.0 - 5.0 * dm)) * i3
                - d * s.powi(4) * (2.0 - 5.0 * dm) * i4
        }
        _ => return Err(BgError::UnsupportedOrder { order: k, max: 3 }),
    };
    Ok(num / normalizer(p))
}

/// Summary moments of a BG law. `kurtosis` is the plain (non-excess) fourth
/// standardized moment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentSet {
    pub mean: f64,
    pub second_raw: f64,
    pub third_raw: f64,
    pub variance: f64,
    pub skewness: f64,
    pub kurtosis: f64,
}

pub fn bg_moment_set(p: &BgParams) -> Result<MomentSet> {
    let mean = bg_moment_closed(p, 1)?;
    let second_raw = bg_moment_closed(p, 2)?;
    let third_raw = bg_moment_closed(p, 3)?;
    let fourth_raw = bg_moment(p, 4)?;
    let variance = second_raw - mean * mean;
    let raw = [1.0, mean, second_raw, third_raw, fourth_raw];
    let central = |n: usize| -> f64 {
        (0..=n)
            .map(|k| binomial(n, k) * raw[k] * (-mean).powi((n - k) as i32))
            .sum()
    };
    Ok(MomentSet {
        mean,
        second_raw,
        third_raw,
        variance,
        skewness: central(3) / variance.powf(1.5),
        kurtosis: central(4) / (variance * variance),
    })
}

/// E[Xᵐ e^{tX}] · e^{−tμ}, valid whenever 1 − σt > 0.
pub(crate) fn exp_moment_scaled(p: &BgParams, m: usize, t: f64) -> Result<f64> {
    if m > 2 {
        return Err(BgError::UnsupportedOrder { order: m, max: 2 });
    }
    let (mu, s, d) = (p.mu, p.sigma, p.delta);
    let arg = 1.0 - s * t;
    if !(arg > 0.0) {
        return Err(BgError::Domain(format!("need 1 − σt > 0, got {arg}")));
    }
    let mi = m as i32;
    let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut total = sign
        * (d * d * s.powi(mi + 2) * gamma_deriv_ratio(m + 2, arg)?
            + d * s.powi(mi + 1) * (2.0 - d * mu * (m + 2) as f64) * gamma_deriv_ratio(m + 1, arg)?);
    for i in 0..=m {
        let coef = 2.0 * binomial(m, i) - 2.0 * d * mu * binomial(m + 1, i) + d * d * mu * mu * binomial(m + 2, i);
        let alt = if i % 2 == 0 { 1.0 } else { -1.0 };
        total += alt * s.powi(i as i32) * mu.powi(mi - i as i32) * coef * gamma_deriv_ratio(i, arg)?;
    }
    Ok(ln_gamma(arg).exp() * total / normalizer(p))
}

/// E[Xᵐ e^{tX}] for m ≤ 2 and t < min{0, −m/σ}; for δ = 0 the wider range
/// t < 1/σ is accepted.
pub fn bg_exp_moment(p: &BgParams, m: usize, t: f64) -> Result<f64> {
    p.validate()?;
    if m > 2 {
        return Err(BgError::UnsupportedOrder { order: m, max: 2 });
    }
    let bound = if p.delta == 0.0 {
        1.0 / p.sigma
    } else {
        (-(m as f64) / p.sigma).min(0.0)
    };
    if !(t < bound) {
        return Err(BgError::Domain(format!("need t < {bound}, got t = {t}")));
    }
    Ok((t * p.mu).exp() * exp_moment_scaled(p, m, t)?)
}

/// Moment-generating function M(t) = E[e^{tX}] for t < 0 (t < 1/σ when δ = 0):
///
/// ```text
/// M(t) = e^{μt} Γ(1−σt) [2 − 2μδ + μ²δ² + 2σδ(1−μδ) ψ(1−σt)
///                        + σ²δ² Γ″(1−σt)/Γ(1−σt)] / Z_δ
/// ```
pub fn bg_mgf(p: &BgParams, t: f64) -> Result<f64> {
    p.validate()?;
    let bound = if p.delta == 0.0 { 1.0 / p.sigma } else { 0.0 };
    if !(t < bound) {
        return Err(BgError::Domain(format!("MGF needs t < {bound}, got t = {t}")));
    }
    let (mu, s, d) = (p.mu, p.sigma, p.delta);
    let arg = 1.0 - s * t;
    let bracket = 2.0 - 2.0 * mu * d
        + mu * mu * d * d
        + 2.0 * s * d * (1.0 - mu * d) * gamma_deriv_ratio(1, arg)?
        + s * s * d * d * gamma_deriv_ratio(2, arg)?;
    Ok((mu * t + ln_gamma(arg)).exp() * bracket / normalizer(p))
}
