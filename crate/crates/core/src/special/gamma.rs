//! Gamma function, polygamma functions and derivatives of Γ.

use crate::error::{BgError, Result};

const LANCZOS: [f64; 14] = [
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_747,
    -0.491_913_816_097_620_2,
    0.339_946_499_848_118_9e-4,
    0.465_236_289_270_485_8e-4,
    -0.983_744_753_048_795_6e-4,
    0.158_088_703_224_912_5e-3,
    -0.210_264_441_724_104_9e-3,
    0.217_439_618_115_212_6e-3,
    -0.164_318_106_536_763_9e-3,
    0.844_182_239_838_527_4e-4,
    -0.261_908_384_015_814_1e-4,
    0.368_991_826_595_316_2e-5,
];

/// ln Γ(x) for x > 0 (Lanczos, g = 607/128).
pub fn ln_gamma(x: f64) -> f64 {
    let mut y = x;
    let tmp = x + 5.242_187_5;
    let tmp = (x + 0.5) * tmp.ln() - tmp;
    let mut ser = 0.999_999_999_999_997_1;
    for c in LANCZOS {
        y += 1.0;
        ser += c / y;
    }
    tmp + (2.506_628_274_631_000_5 * ser / x).ln()
}

/// Γ(x) for x > 0.
pub fn gamma(x: f64) -> f64 {
    // Exact factorials keep Γ(n) bit-exact for small integers.
    if x.fract() == 0.0 && (1.0..=23.0).contains(&x) {
        return (1..x as u64).map(|k| k as f64).product();
    }
    ln_gamma(x).exp()
}

// Bernoulli numbers B_2, B_4, ..., B_16.
const BERNOULLI: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Polygamma function ψ⁽ⁿ⁾(x) for n ≤ 3 and x > 0.
pub fn polygamma(n: usize, x: f64) -> Result<f64> {
    if n > 3 {
        return Err(BgError::UnsupportedOrder { order: n, max: 3 });
    }
    if !(x > 0.0) || !x.is_finite() {
        return Err(BgError::Domain(format!("polygamma requires x > 0, got {x}")));
    }
    let sign = if n.is_multiple_of(2) { -1.0 } else { 1.0 }; // (-1)^{n+1}
    let nf = factorial(n);
    let mut acc = 0.0;
    let mut z = x;
    while z < 15.0 {
        acc += sign * nf / z.powi(n as i32 + 1);
        z += 1.0;
    }
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let tail = if n == 0 {
        let mut s = z.ln() - 0.5 * inv;
        let mut p = inv2;
        for (k, b) in BERNOULLI.iter().enumerate() {
            s -= b / (2.0 * (k + 1) as f64) * p;
            p *= inv2;
        }
        s
    } else {
        let mut s = factorial(n - 1) * inv.powi(n as i32) + 0.5 * nf * inv.powi(n as i32 + 1);
        let mut p = inv.powi(n as i32 + 2);
        for (k, b) in BERNOULLI.iter().enumerate() {
            let two_k = 2 * (k + 1);
            s += b * factorial(two_k + n - 1) / factorial(two_k) * p;
            p *= inv2;
        }
        sign * s
    };
    Ok(acc + tail)
}

pub fn digamma(x: f64) -> Result<f64> {
    polygamma(0, x)
}

pub fn trigamma(x: f64) -> Result<f64> {
    polygamma(1, x)
}

/// Γ⁽ⁱ⁾(x) / Γ(x), expressed through polygamma values (complete Bell polynomials).
pub fn gamma_deriv_ratio(i: usize, x: f64) -> Result<f64> {
    if i > 4 {
        return Err(BgError::UnsupportedOrder { order: i, max: 4 });
    }
    if i == 0 {
        if !(x > 0.0) {
            return Err(BgError::Domain(format!("Γ derivatives require x > 0, got {x}")));
        }
        return Ok(1.0);
    }
    let p0 = polygamma(0, x)?;
    let p1 = if i >= 2 { polygamma(1, x)? } else { 0.0 };
    let p2 = if i >= 3 { polygamma(2, x)? } else { 0.0 };
    let p3 = if i >= 4 { polygamma(3, x)? } else { 0.0 };
    Ok(match i {
        1 => p0,
        2 => p0 * p0 + p1,
        3 => p0.powi(3) + 3.0 * p0 * p1 + p2,
        _ => p0.powi(4) + 6.0 * p0 * p0 * p1 + 4.0 * p0 * p2 + 3.0 * p1 * p1 + p3,
    })
}

/// i-th derivative of Γ at x > 0, for i ≤ 4.
///
/// Γ′ = Γψ and Γ″ = Γ(ψ² + ψ′); orders 3 and 4 follow the same Bell-polynomial
/// pattern in ψ, ψ′, ψ″, ψ‴.
pub fn gamma_deriv(i: usize, x: f64) -> Result<f64> {
    let ratio = gamma_deriv_ratio(i, x)?;
    Ok(gamma(x) * ratio)
}
