//! Maximum-likelihood estimation of (μ, σ, δ).
//!
//! With `a = μ + σγ`, `c = δa − 1` and `Z = 1 + δ²σ²π²/6 + c²`, the
//! log-likelihood of `x₁..xₙ` is
//!
//! ```text
//! ℓ = −n ln Z − n ln σ + Σ { ln[(1 − δxᵢ)² + 1] − zᵢ − e^{−zᵢ} },   zᵢ = (xᵢ − μ)/σ
//! ```
//!
//! The normalizer enters every second derivative through
//! `D_{u,v} = (n/Z)(∂²Z/∂u∂v − (∂Z/∂u)(∂Z/∂v)/Z)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::distribution::{bg_moment_closed, exp_moment_scaled, normalizer, BgParams};
use crate::error::{BgError, Result};
use crate::special::{integrate_with_breaks, QuadratureSpec, EULER_GAMMA};

pub type Vec3 = [f64; 3];
pub type Mat3 = [[f64; 3]; 3];

/// Z and its first and second partial derivatives, ordered (μ, σ, δ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizerDerivatives {
    pub value: f64,
    pub grad: Vec3,
    pub hess: Mat3,
}

pub fn normalizer_derivatives(p: &BgParams) -> NormalizerDerivatives {
    let (mu, s, d) = (p.mu, p.sigma, p.delta);
    let g = EULER_GAMMA;
    let pi2 = PI * PI;
    let a = mu + s * g;
    let c = d * a - 1.0;
    let grad = [
        2.0 * d * c,
        s * d * d * pi2 / 3.0 + 2.0 * d * g * c,
        d * s * s * pi2 / 3.0 + 2.0 * a * c,
    ];
    let mm = 2.0 * d * d;
    let ss = d * d * pi2 / 3.0 + 2.0 * d * d * g * g;
    let dd = s * s * pi2 / 3.0 + 2.0 * a * a;
    let ms = 2.0 * d * d * g;
    let md = 4.0 * d * a - 2.0;
    let sd = 2.0 * s * d * pi2 / 3.0 + 2.0 * g * (2.0 * d * a - 1.0);
    NormalizerDerivatives {
        value: normalizer(p),
        grad,
        hess: [[mm, ms, md], [ms, ss, sd], [md, sd, dd]],
    }
}

/// `D_{u,v}(Θ; n)` for all pairs.
fn d_matrix(p: &BgParams, n: f64) -> Mat3 {
    let nd = normalizer_derivatives(p);
    let mut out = [[0.0; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = n / nd.value * (nd.hess[i][j] - nd.grad[i] * nd.grad[j] / nd.value);
        }
    }
    out
}

fn check_data(data: &[f64]) -> Result<()> {
    if data.is_empty() {
        return Err(BgError::EmptyData);
    }
    if let Some(x) = data.iter().find(|x| !x.is_finite()) {
        return Err(BgError::Domain(format!("data contains a non-finite value ({x})")));
    }
    Ok(())
}

pub fn log_likelihood(p: &BgParams, data: &[f64]) -> Result<f64> {
    p.validate()?;
    check_data(data)?;
    let n = data.len() as f64;
    let mut sum = 0.0;
    for &x in data {
        let z = (x - p.mu) / p.sigma;
        let u = 1.0 - p.delta * x;
        sum += (u * u + 1.0).ln() - z - (-z).exp();
    }
    Ok(sum - n * normalizer(p).ln() - n * p.sigma.ln())
}

/// Analytic gradient of the log-likelihood, ordered (μ, σ, δ).
pub fn score(p: &BgParams, data: &[f64]) -> Result<Vec3> {
    p.validate()?;
    check_data(data)?;
    let n = data.len() as f64;
    let nd = normalizer_derivatives(p);
    let s = p.sigma;
    let (mut e, mut zt, mut dt) = (0.0, 0.0, 0.0);
    for &x in data {
        let z = (x - p.mu) / s;
        let w = (-z).exp();
        let u = 1.0 - p.delta * x;
        e += w;
        zt += z * (1.0 - w);
        dt += x * u / (u * u + 1.0);
    }
    Ok([
        -n * nd.grad[0] / nd.value + n / s - e / s,
        -n * nd.grad[1] / nd.value - n / s + zt / s,
        -n * nd.grad[2] / nd.value - 2.0 * dt,
    ])
}

/// Analytic Hessian of the log-likelihood, ordered (μ, σ, δ).
pub fn hessian(p: &BgParams, data: &[f64]) -> Result<Mat3> {
    p.validate()?;
    check_data(data)?;
    let n = data.len() as f64;
    let dm = d_matrix(p, n);
    let s = p.sigma;
    let s2 = s * s;
    let (mut e, mut e1, mut f3, mut f4) = (0.0, 0.0, 0.0, 0.0);
    for &x in data {
        let z = (x - p.mu) / s;
        let w = (-z).exp();
        let u = 1.0 - p.delta * x;
        let q = u * u + 1.0;
        e += w;
        e1 += w * (1.0 - z);
        f3 += z * (2.0 - (2.0 - z) * w);
        f4 += x * x * (1.0 - u * u) / (q * q);
    }
    let mm = -dm[0][0] - e / s2;
    let ms = -dm[0][1] - n / s2 + e1 / s2;
    let ss = -dm[1][1] + n / s2 - f3 / s2;
    let dd = -dm[2][2] + 2.0 * f4;
    let md = -dm[0][2];
    let sd = -dm[1][2];
    Ok([[mm, ms, md], [ms, ss, sd], [md, sd, dd]])
}

/// Per-observation expected information `−E[∂²ℓ/∂θ∂θᵀ]` for a single draw.
///
/// The three expectations involving `e^{−z}` come from the exponential moments
/// `E[Xᵐ e^{−(X−μ)/σ}]`, m ≤ 2; the δδ entry is integrated numerically.
pub fn fisher_information(p: &BgParams, spec: &QuadratureSpec) -> Result<Mat3> {
    p.validate()?;
    spec.validate()?;
    let (mu, s) = (p.mu, p.sigma);
    let s2 = s * s;
    let dm = d_matrix(p, 1.0);
    let t = -1.0 / s;
    let s0 = exp_moment_scaled(p, 0, t)?;
    let s1 = exp_moment_scaled(p, 1, t)?;
    let s2m = exp_moment_scaled(p, 2, t)?;
    let mean = bg_moment_closed(p, 1)?;
    let ez_w = (s1 - mu * s0) / s;
    let ez2_w = (s2m - 2.0 * mu * s1 + mu * mu * s0) / s2;
    let e_f1 = s0;
    let e_f2 = s0 - ez_w;
    let e_f3 = 2.0 * (mean - mu) / s - 2.0 * ez_w + ez2_w;
    let e_f4 = expected_delta_curvature(p, spec)?;

    let mm = dm[0][0] + e_f1 / s2;
    let ms = dm[0][1] + 1.0 / s2 - e_f2 / s2;
    let ss = dm[1][1] - 1.0 / s2 + e_f3 / s2;
    let dd = dm[2][2] - 2.0 * e_f4;
    Ok([[mm, ms, dm[0][2]], [ms, ss, dm[1][2]], [dm[0][2], dm[1][2], dd]])
}

/// `E[X²(1 − u²)/(u² + 1)²]` with `u = 1 − δX`, integrated in z-space.
fn expected_delta_curvature(p: &BgParams, spec: &QuadratureSpec) -> Result<f64> {
    let (mu, s, d) = (p.mu, p.sigma, p.delta);
    let ln_z = normalizer(p).ln();
    let integrand = |z: f64| {
        let x = mu + s * z;
        let u = 1.0 - d * x;
        let q = u * u + 1.0;
        let dens = (q.ln() - ln_z - z - (-z).exp()).exp();
        x * x * (1.0 - u * u) / q * dens / q
    };
    let mut breaks = vec![-4.5, -2.0, 0.0, 2.0, 5.0, 10.0, 20.0, 40.0, 60.0];
    if d != 0.0 {
        let z0 = (1.0 / d - mu) / s;
        if z0 > -4.5 && z0 < 60.0 {
            breaks.push(z0);
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    Ok(integrate_with_breaks(integrand, &breaks, spec)?.value)
}

/// Standard errors of the fitted parameters; `delta` is absent for the
/// two-parameter Gumbel fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StdErrors {
    pub mu: f64,
    pub sigma: f64,
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub params: BgParams,
    /// From the inverse observed information; `None` when it is singular or
    /// not positive definite.
    pub std_errors: Option<StdErrors>,
    pub log_likelihood: f64,
    pub n_obs: usize,
    pub converged: bool,
    pub iterations: usize,
    pub grad_norm_at_solution: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    /// Extra starting point tried in addition to the default multistart.
    pub init: Option<BgParams>,
    pub max_iter: usize,
    /// Gradient tolerance for the quasi-Newton phase, relative to n.
    pub tol: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            init: None,
            max_iter: 500,
            tol: 1e-9,
        }
    }
}

/// Invert a symmetric positive-definite `dim × dim` block by Cholesky.
fn spd_inverse(m: &Mat3, dim: usize) -> Option<Mat3> {
    let mut l = [[0.0; 3]; 3];
    for i in 0..dim {
        for j in 0..=i {
            let mut sum = m[i][j];
            for k in 0..j {
                sum -= l[i][k] * l[j][k];
            }
            if i == j {
                if !(sum > 0.0) || !sum.is_finite() {
                    return None;
                }
                l[i][i] = sum.sqrt();
            } else {
                l[i][j] = sum / l[j][j];
            }
        }
    }
    let mut inv = [[0.0; 3]; 3];
    for col in 0..dim {
        let mut y = [0.0; 3];
        for i in 0..dim {
            let mut sum = if i == col { 1.0 } else { 0.0 };
            for k in 0..i {
                sum -= l[i][k] * y[k];
            }
            y[i] = sum / l[i][i];
        }
        for i in (0..dim).rev() {
            let mut sum = y[i];
            for k in i + 1..dim {
                sum -= l[k][i] * inv[k][col];
            }
            inv[i][col] = sum / l[i][i];
        }
    }
    Some(inv)
}

fn std_errors_from_information(info: &Mat3, dim: usize) -> Option<StdErrors> {
    let inv = spd_inverse(info, dim)?;
    let se = |i: usize| inv[i][i].sqrt();
    Some(StdErrors {
        mu: se(0),
        sigma: se(1),
        delta: (dim == 3).then(|| se(2)),
    })
}

/// Standard errors from the expected information of `n` observations.
pub fn expected_std_errors(p: &BgParams, n: usize, full: bool, spec: &QuadratureSpec) -> Result<StdErrors> {
    let info = fisher_information(p, spec)?;
    let scaled = info.map(|row| row.map(|v| v * n as f64));
    std_errors_from_information(&scaled, if full { 3 } else { 2 }).ok_or(BgError::SingularInformation)
}

fn observed_std_errors(p: &BgParams, data: &[f64], dim: usize) -> Result<Option<StdErrors>> {
    let h = hessian(p, data)?;
    Ok(std_errors_from_information(&h.map(|row| row.map(|v| -v)), dim))
}

fn mean_and_sd(data: &[f64]) -> (f64, f64) {
    let n = data.len() as f64;
    let mean = data.iter().sum::<f64>() / n;
    let var = data.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    (mean, var.sqrt())
}

fn robust_scale(data: &[f64]) -> f64 {
    let mut v = data.to_vec();
    v.sort_by(f64::total_cmp);
    let q = |f: f64| {
        let pos = f * (v.len() - 1) as f64;
        let i = pos.floor() as usize;
        let frac = pos - i as f64;
        if i + 1 < v.len() {
            v[i] + frac * (v[i + 1] - v[i])
        } else {
            v[i]
        }
    };
    let iqr = (q(0.75) - q(0.25)) / 1.349;
    if iqr > 0.0 {
        iqr
    } else {
        mean_and_sd(data).1
    }
}

fn validate_sample(data: &[f64], n_params: usize) -> Result<()> {
    check_data(data)?;
    if data.len() < n_params + 1 {
        return Err(BgError::InsufficientData {
            needed: n_params + 1,
            got: data.len(),
        });
    }
    if data.iter().all(|&x| x == data[0]) {
        return Err(BgError::DegenerateData);
    }
    Ok(())
}

/// Gumbel method-of-moments start: σ₀ = s√6/π, μ₀ = x̄ − γσ₀.
fn moment_start(data: &[f64]) -> (f64, f64) {
    let (mean, sd) = mean_and_sd(data);
    let sigma = sd * 6f64.sqrt() / PI;
    (mean - EULER_GAMMA * sigma, sigma)
}

struct Outcome {
    params: BgParams,
    loglik: f64,
    iterations: usize,
}

/// Objective in the unconstrained coordinates θ = (μ, ln σ, δ): returns
/// −ℓ/n and its gradient, or `None` off the domain. With `dim = 2` the δ
/// coordinate is held fixed.
fn objective(theta: &Vec3, data: &[f64], dim: usize) -> Option<(f64, Vec3)> {
    let p = BgParams::new(theta[0], theta[1].exp(), theta[2]).ok()?;
    let n = data.len() as f64;
    let l = log_likelihood(&p, data).ok()?;
    let g = score(&p, data).ok()?;
    if !l.is_finite() || g.iter().any(|v| !v.is_finite()) {
        return None;
    }
    let mut grad = [-g[0] / n, -g[1] * p.sigma / n, -g[2] / n];
    if dim == 2 {
        grad[2] = 0.0;
    }
    Some((-l / n, grad))
}

fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// BFGS with Armijo backtracking on the first `dim` coordinates.
fn bfgs(start: Vec3, data: &[f64], dim: usize, opts: &FitOptions) -> Option<(Vec3, usize)> {
    let mut x = start;
    let (mut f, mut g) = objective(&x, data, dim)?;
    let mut h_inv = [[0.0; 3]; 3];
    for (i, row) in h_inv.iter_mut().enumerate().take(dim) {
        row[i] = 1.0;
    }
    let mut iter = 0;
    while iter < opts.max_iter {
        iter += 1;
        if dot(&g, &g).sqrt() < opts.tol {
            break;
        }
        let mut dir = [0.0; 3];
        for i in 0..dim {
            dir[i] = -(0..dim).map(|j| h_inv[i][j] * g[j]).sum::<f64>();
        }
        let mut slope = dot(&g, &dir);
        if !(slope < 0.0) {
            h_inv = [[0.0; 3]; 3];
            for i in 0..dim {
                h_inv[i][i] = 1.0;
                dir[i] = -g[i];
            }
            slope = dot(&g, &dir);
        }
        let norm = dot(&dir, &dir).sqrt();
        let mut step = if norm > 5.0 { 5.0 / norm } else { 1.0 };
        let mut accepted = None;
        for _ in 0..60 {
            let trial = [x[0] + step * dir[0], x[1] + step * dir[1], x[2] + step * dir[2]];
            if let Some((ft, gt)) = objective(&trial, data, dim) {
                if ft <= f + 1e-4 * step * slope {
                    accepted = Some((trial, ft, gt));
                    break;
                }
            }
            step *= 0.5;
        }
        let Some((xn, fn_, gn)) = accepted else { break };
        let s: Vec3 = [xn[0] - x[0], xn[1] - x[1], xn[2] - x[2]];
        let y: Vec3 = [gn[0] - g[0], gn[1] - g[1], gn[2] - g[2]];
        let sy = dot(&s, &y);
        if sy > 1e-14 {
            let mut hy = [0.0; 3];
            for i in 0..dim {
                hy[i] = (0..dim).map(|j| h_inv[i][j] * y[j]).sum();
            }
            let yhy = dot(&y, &hy);
            for i in 0..dim {
                for j in 0..dim {
                    h_inv[i][j] += (sy + yhy) * s[i] * s[j] / (sy * sy) - (hy[i] * s[j] + s[i] * hy[j]) / sy;
                }
            }
        }
        let done = (f - fn_).abs() <= 1e-15 * f.abs().max(1.0);
        x = xn;
        f = fn_;
        g = gn;
        if done {
            break;
        }
    }
    Some((x, iter))
}

/// Newton iterations with the analytic Hessian, in the original coordinates.
fn newton_polish(p: BgParams, data: &[f64], dim: usize) -> (BgParams, usize) {
    let mut p = p;
    let mut iters = 0;
    for _ in 0..50 {
        let (Ok(g), Ok(h), Ok(l)) = (score(&p, data), hessian(&p, data), log_likelihood(&p, data)) else {
            break;
        };
        let gnorm = g[..dim].iter().map(|v| v * v).sum::<f64>().sqrt();
        if gnorm < 1e-11 * l.abs().max(1.0) {
            break;
        }
        let Some(inv) = spd_inverse(&h.map(|row| row.map(|v| -v)), dim) else {
            break;
        };
        let mut dir = [0.0; 3];
        for i in 0..dim {
            dir[i] = (0..dim).map(|j| inv[i][j] * g[j]).sum();
        }
        let mut step = 1.0;
        let mut improved = false;
        for _ in 0..30 {
            let trial = BgParams {
                mu: p.mu + step * dir[0],
                sigma: p.sigma + step * dir[1],
                delta: p.delta + step * dir[2],
            };
            if let (Ok(lt), Ok(gt)) = (log_likelihood(&trial, data), score(&trial, data)) {
                let gt_norm = gt[..dim].iter().map(|v| v * v).sum::<f64>().sqrt();
                if lt > l || (lt >= l - 1e-12 * l.abs() && gt_norm < gnorm) {
                    p = trial;
                    improved = true;
                    break;
                }
            }
            step *= 0.5;
        }
        iters += 1;
        if !improved {
            break;
        }
    }
    (p, iters)
}

fn optimize(data: &[f64], starts: &[BgParams], dim: usize, opts: &FitOptions) -> Result<FitResult> {
    let mut best: Option<Outcome> = None;
    for s in starts {
        let theta = [s.mu, s.sigma.ln(), s.delta];
        // Settle (μ, σ) for the starting δ before freeing δ.
        let Some((theta, profile_it)) = bfgs(theta, data, 2, opts) else {
            continue;
        };
        let Some((x, it)) = (if dim == 3 {
            bfgs(theta, data, 3, opts)
        } else {
            Some((theta, 0))
        }) else {
            continue;
        };
        let it = it + profile_it;
        let Ok(p) = BgParams::new(x[0], x[1].exp(), x[2]) else {
            continue;
        };
        let (p, polish) = newton_polish(p, data, dim);
        let Ok(loglik) = log_likelihood(&p, data) else {
            continue;
        };
        let better = match &best {
            None => true,
            Some(b) => {
                if (loglik - b.loglik).abs() <= 1e-8 {
                    p.delta.abs() < b.params.delta.abs()
                } else {
                    loglik > b.loglik
                }
            }
        };
        if better {
            best = Some(Outcome {
                params: p,
                loglik,
                iterations: it + polish,
            });
        }
    }
    let best = best.ok_or_else(|| BgError::Domain("no starting point produced a finite likelihood".into()))?;
    let g = score(&best.params, data)?;
    let grad_norm = g[..dim].iter().map(|v| v * v).sum::<f64>().sqrt();
    Ok(FitResult {
        params: best.params,
        std_errors: observed_std_errors(&best.params, data, dim)?,
        log_likelihood: best.loglik,
        n_obs: data.len(),
        converged: grad_norm < 1e-6 * best.loglik.abs().max(1.0),
        iterations: best.iterations,
        grad_norm_at_solution: grad_norm,
    })
}

/// Maximum-likelihood fit of all three parameters.
///
/// Starts from the Gumbel moment estimates of (μ, σ) combined with
/// δ ∈ {−1, −0.1, 0, 0.1, 1}/s, where s is the IQR-based scale of the data,
/// and with δ = 1/q for the data deciles q, which places the zero of the
/// weight (and hence a possible antimode) inside the sample. Each start first
/// fits (μ, σ) with δ held at its starting value.
/// The best optimum is kept; near-ties (within 1e−8) go to the smaller |δ|.
pub fn fit_mle(data: &[f64], opts: &FitOptions) -> Result<FitResult> {
    validate_sample(data, 3)?;
    let (mu0, sigma0) = moment_start(data);
    let scale = robust_scale(data);
    let mut starts: Vec<BgParams> = [-1.0, -0.1, 0.0, 0.1, 1.0]
        .iter()
        .map(|c| BgParams {
            mu: mu0,
            sigma: sigma0,
            delta: c / scale,
        })
        .collect();
    let mut sorted = data.to_vec();
    sorted.sort_by(f64::total_cmp);
    for f in [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9] {
        let q = sorted[((sorted.len() - 1) as f64 * f).round() as usize];
        if q.abs() > 1e-3 * scale {
            starts.push(BgParams {
                mu: mu0,
                sigma: sigma0,
                delta: 1.0 / q,
            });
        }
    }
    if let Some(init) = opts.init {
        init.validate()?;
        starts.push(init);
    }
    optimize(data, &starts, 3, opts)
}

/// Maximum-likelihood fit of the Gumbel sub-model (δ = 0).
pub fn fit_gumbel_mle(data: &[f64], opts: &FitOptions) -> Result<FitResult> {
    validate_sample(data, 2)?;
    let (mu, sigma) = moment_start(data);
    let mut starts = vec![BgParams { mu, sigma, delta: 0.0 }];
    if let Some(init) = opts.init {
        init.validate()?;
        starts.push(BgParams { delta: 0.0, ..init });
    }
    optimize(data, &starts, 2, opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point_at_delta_zero() {
        let p = BgParams::new(0.4, 1.7, 0.0).unwrap();
        let l = log_likelihood(&p, &[0.4]).unwrap();
        assert!((l - (-(1.7f64).ln() - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn normalizer_slope_in_mu_vanishes_at_delta_zero() {
        let nd = normalizer_derivatives(&BgParams::new(1.0, 2.0, 0.0).unwrap());
        assert_eq!(nd.grad[0], 0.0);
    }

    #[test]
    fn empty_and_degenerate_data() {
        let p = BgParams::new(0.0, 1.0, 0.0).unwrap();
        assert_eq!(log_likelihood(&p, &[]), Err(BgError::EmptyData));
        assert_eq!(
            fit_mle(&[1.0; 10], &FitOptions::default()).unwrap_err(),
            BgError::DegenerateData
        );
        assert!(matches!(
            fit_mle(&[1.0, 2.0, 3.0], &FitOptions::default()),
            Err(BgError::InsufficientData { needed: 4, got: 3 })
        ));
    }

    #[test]
    fn hessian_is_symmetric() {
        let p = BgParams::new(-0.3, 1.2, 0.7).unwrap();
        let h = hessian(&p, &[-1.0, 0.2, 0.9, 2.5, 4.0]).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(h[i][j], h[j][i]);
            }
        }
    }

    #[test]
    fn gumbel_fisher_block() {
        let p = BgParams::new(0.0, 2.0, 0.0).unwrap();
        let i = fisher_information(&p, &QuadratureSpec::default()).unwrap();
        let g = EULER_GAMMA;
        assert!((i[0][0] - 0.25).abs() < 1e-12);
        assert!((i[0][1] + (1.0 - g) / 4.0).abs() < 1e-12);
        let ss = (PI * PI / 6.0 + (1.0 - g).powi(2)) / 4.0;
        assert!((i[1][1] - ss).abs() < 1e-12);
    }

    #[test]
    fn spd_inverse_rejects_indefinite() {
        let m = [[1.0, 2.0, 0.0], [2.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        assert!(spd_inverse(&m, 3).is_none());
        let m = [[4.0, 2.0, 0.0], [2.0, 3.0, 0.0], [0.0, 0.0, 9.0]];
        let inv = spd_inverse(&m, 3).unwrap();
        assert!((inv[0][0] - 3.0 / 8.0).abs() < 1e-15 && (inv[2][2] - 1.0 / 9.0).abs() < 1e-15);
    }
}
