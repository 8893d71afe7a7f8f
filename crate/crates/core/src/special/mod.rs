//! Scalar special functions and the incomplete log-moment integral
//!
//! `I(k; a, b) = (−1)ᵏ ∫ₐᵇ lnᵏ(v) e^{−v} dv`
//!
//! which is the partial k-th moment of a standard Gumbel variable. Under
//! `v = e^{−y}` it becomes `∫ yᵏ φ(y) dy` over `[−ln b, −ln a]` with
//! `φ(y) = exp(−y − e^{−y})`, a smooth integrand without the logarithmic
//! singularity at `v = 0`. All quadrature in this crate runs in that variable.

mod gamma;
mod quadrature;

pub use gamma::{digamma, gamma, gamma_deriv, gamma_deriv_ratio, ln_gamma, polygamma, trigamma};
pub use quadrature::{integrate, integrate_with_breaks, Integral, QuadratureSpec};

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{BgError, Result};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_61;
pub const ZETA3: f64 = 1.202_056_903_159_594_285_4;
pub const ZETA5: f64 = 1.036_927_755_143_369_926_3;

/// Mathematical constants used by the closed-form moment expressions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Constants {
    pub euler_gamma: f64,
    pub pi: f64,
    pub zeta3: f64,
    pub zeta5: f64,
}

pub const CONSTANTS: Constants = Constants {
    euler_gamma: EULER_GAMMA,
    pi: PI,
    zeta3: ZETA3,
    zeta5: ZETA5,
};

/// Exponential integral E₁(x) = Γ(0, x) for x > 0.
pub fn exp_integral_e1(x: f64) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return Err(BgError::Domain(format!("E1 requires x >= 0, got {x}")));
    }
    if x == 0.0 {
        return Err(BgError::Divergent("Γ(0, 0) = ∫₀^∞ e^{-t}/t dt".into()));
    }
    if x > 745.0 {
        return Ok(0.0);
    }
    if x < 1.0 {
        Ok(-EULER_GAMMA - x.ln() - e1_series_tail(x))
    } else {
        Ok(e1_continued_fraction(x))
    }
}

/// Σ_{k≥1} (−x)ᵏ / (k·k!), so that E₁(x) = −γ − ln x − S(x).
fn e1_series_tail(x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 0.0;
    for k in 1..200 {
        term *= -x / k as f64;
        let add = term / k as f64;
        sum += add;
        if add.abs() < 1e-17 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

fn e1_continued_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..500 {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h * (-x).exp()
}

/// Upper incomplete gamma Γ(a, x) for a nonnegative integer `a` and x ≥ 0.
pub fn upper_incomplete_gamma(a: f64, x: f64) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return Err(BgError::Domain(format!("Γ(a, x) requires x >= 0, got {x}")));
    }
    if a < 0.0 || a.fract() != 0.0 || a > 170.0 {
        return Err(BgError::Domain(format!(
            "Γ(a, x) is implemented for integer a in [0, 170], got {a}"
        )));
    }
    if a == 0.0 {
        return exp_integral_e1(x);
    }
    // Γ(n, x) = (n−1)! e^{−x} Σ_{k<n} xᵏ/k!
    let n = a as usize;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..n {
        term *= x / k as f64;
        sum += term;
    }
    Ok(gamma(a) * (-x).exp() * sum)
}

/// `I(1; e^{−z}, ∞)` written in terms of `z`, avoiding both `ln 0` and the
/// cancellation between `z e^{−w}` and `Γ(0, w)` when `w = e^{−z}` is small.
pub(crate) fn upper_log_moment_1(z: f64) -> f64 {
    let w = (-z).exp();
    if w < 1.0 {
        z * (-w).exp_m1() + EULER_GAMMA + e1_series_tail(w)
    } else if w > 745.0 {
        0.0
    } else {
        z * (-w).exp() - e1_continued_fraction(w)
    }
}

/// `∫_z^∞ y φ(y) dy = I(1; 0, e^{−z})`, the complement of [`upper_log_moment_1`].
pub(crate) fn lower_log_moment_1(z: f64) -> f64 {
    let w = (-z).exp();
    if w < 1.0 {
        -z * (-w).exp_m1() - e1_series_tail(w)
    } else {
        EULER_GAMMA - upper_log_moment_1(z)
    }
}

/// Closed-form values of `I(k; 0, ∞)` for k ≤ 6.
pub fn log_moment_constant(k: usize) -> Result<f64> {
    let g = EULER_GAMMA;
    let (z3, z5) = (ZETA3, ZETA5);
    let pi2 = PI * PI;
    let pi4 = pi2 * pi2;
    Ok(match k {
        0 => 1.0,
        1 => g,
        2 => g * g + pi2 / 6.0,
        3 => 2.0 * z3 + g.powi(3) + g * pi2 / 2.0,
        4 => 8.0 * g * z3 + g.powi(4) + g * g * pi2 + 3.0 * pi4 / 20.0,
        5 => {
            20.0 * g * g * z3
                + 10.0 * pi2 * z3 / 3.0
                + 24.0 * z5
                + g.powi(5)
                + 5.0 * g.powi(3) * pi2 / 3.0
                + 3.0 * g * pi4 / 4.0
        }
        6 => {
            20.0 * g * (2.0 * g * g + pi2) * z3
                + 40.0 * z3 * z3
                + 144.0 * g * z5
                + g.powi(6)
                + 5.0 * g.powi(4) * pi2 / 2.0
                + 9.0 * g * g * pi4 / 4.0
                + 61.0 * pi4 * pi2 / 168.0
        }
        _ => return Err(BgError::UnsupportedOrder { order: k, max: 6 }),
    })
}

/// Standard Gumbel density φ(y) = exp(−y − e^{−y}).
#[inline]
pub(crate) fn std_gumbel_density(y: f64) -> f64 {
    (-y - (-y).exp()).exp()
}

/// Left truncation point L with ∫_{−∞}^{L} |y|ᵏ φ(y) dy < `bound`.
///
/// With u = e^{−y} the left tail is ∫_U^∞ lnᵏ(u) e^{−u} du, and for
/// U ≥ max(2k, e) the integrand decays at least like e^{−(u−U)/2}.
pub(crate) fn left_cutoff(k: usize, bound: f64) -> f64 {
    let mut u = (2.0 * k as f64).max(std::f64::consts::E);
    while 2.0 * u.ln().powi(k as i32) * (-u).exp() >= bound {
        u *= 1.25;
    }
    -u.ln()
}

/// Right truncation point Y with ∫_Y^∞ yᵏ φ(y) dy ≤ Γ(k+1, Y) < `bound`.
pub(crate) fn right_cutoff(k: usize, bound: f64) -> f64 {
    let mut y = k as f64 + 10.0;
    loop {
        let tail = upper_incomplete_gamma((k + 1) as f64, y).unwrap_or(0.0);
        if tail < bound {
            return y;
        }
        y += 2.0;
    }
}

/// ∫_lo^hi yᵏ φ(y) dy for −∞ ≤ lo < hi ≤ ∞: the partial k-th moment of a
/// standard Gumbel variable.
pub fn std_gumbel_partial_moment(k: usize, lo: f64, hi: f64, spec: &QuadratureSpec) -> Result<f64> {
    spec.validate()?;
    if lo.is_nan() || hi.is_nan() || lo >= hi {
        return Err(BgError::InvalidRange { a: lo, b: hi });
    }
    let cut = spec.abs_tol / 10.0;
    let lo_c = lo.max(left_cutoff(k, cut));
    let hi_c = hi.min(right_cutoff(k, cut));
    if lo_c >= hi_c {
        return Ok(0.0);
    }
    let mut breaks = vec![lo_c];
    for p in [
        -1.0,
        0.0,
        1.0,
        2.0 + k as f64,
        8.0 + 2.0 * k as f64,
        25.0 + 2.0 * k as f64,
    ] {
        if p > lo_c && p < hi_c {
            breaks.push(p);
        }
    }
    breaks.push(hi_c);
    let ki = k as i32;
    let r = integrate_with_breaks(|y| y.powi(ki) * std_gumbel_density(y), &breaks, spec)?;
    Ok(r.value)
}

/// Incomplete log-moment `I(k; a, b) = (−1)ᵏ ∫ₐᵇ lnᵏ(v) e^{−v} dv`, with
/// `b = f64::INFINITY` allowed.
///
/// For b = ∞ the k = 0 and k = 1 cases use the closed forms `e^{−a}` and
/// `−e^{−a} ln a − Γ(0, a)` (with the limit γ at a = 0).
pub fn incomplete_log_moment(k: usize, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    if a.is_nan() || b.is_nan() || a < 0.0 || a >= b {
        return Err(BgError::InvalidRange { a, b });
    }
    if k == 0 {
        return Ok((-a).exp() - (-b).exp());
    }
    if b == f64::INFINITY && k == 1 {
        if a == 0.0 {
            return Ok(EULER_GAMMA);
        }
        return Ok(-(-a).exp() * a.ln() - exp_integral_e1(a)?);
    }
    let lo = -b.ln();
    let hi = if a == 0.0 { f64::INFINITY } else { -a.ln() };
    std_gumbel_partial_moment(k, lo, hi, spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn incomplete_gamma_values() {
        assert_eq!(upper_incomplete_gamma(1.0, 0.0).unwrap(), 1.0);
        let e1 = upper_incomplete_gamma(0.0, 1.0).unwrap();
        assert!((e1 - 0.219_383_934_395_520_27).abs() < 1e-15);
        let far = upper_incomplete_gamma(0.0, 50.0).unwrap();
        assert!(far > 0.0 && far < 1e-20);
        assert!(upper_incomplete_gamma(0.0, 800.0).unwrap() == 0.0);
    }

    #[test]
    fn incomplete_gamma_errors() {
        assert!(matches!(upper_incomplete_gamma(1.0, -1.0), Err(BgError::Domain(_))));
        assert!(matches!(upper_incomplete_gamma(0.0, 0.0), Err(BgError::Divergent(_))));
        assert!(matches!(upper_incomplete_gamma(0.5, 1.0), Err(BgError::Domain(_))));
    }

    #[test]
    fn e1_branches_agree_at_split() {
        let below = -EULER_GAMMA - (1.0f64 - 1e-12).ln() - e1_series_tail(1.0 - 1e-12);
        let above = e1_continued_fraction(1.0);
        assert!((below - above).abs() < 1e-12);
    }

    #[test]
    fn log_moment_constants_match_reference_values() {
        assert_eq!(log_moment_constant(0).unwrap(), 1.0);
        assert_eq!(log_moment_constant(1).unwrap(), EULER_GAMMA);
        let i2 = log_moment_constant(2).unwrap();
        assert!((i2 - 1.978_111_990_655_945_5).abs() < 1e-12);
        assert!(matches!(log_moment_constant(7), Err(BgError::UnsupportedOrder { .. })));
    }

    #[test]
    fn closed_form_branches() {
        assert_eq!(incomplete_log_moment(0, 0.0, f64::INFINITY, &spec()).unwrap(), 1.0);
        assert_eq!(
            incomplete_log_moment(1, 0.0, f64::INFINITY, &spec()).unwrap(),
            EULER_GAMMA
        );
        for a in [1e-6, 0.3, 2.0, 40.0] {
            assert_eq!(incomplete_log_moment(0, a, f64::INFINITY, &spec()).unwrap(), (-a).exp());
        }
    }

    #[test]
    fn i1_stable_form_matches_closed_form() {
        for z in [-3.0f64, -0.5, 0.0, 0.7, 4.0, 12.0] {
            let w = (-z).exp();
            let closed = incomplete_log_moment(1, w, f64::INFINITY, &spec()).unwrap();
            assert!((upper_log_moment_1(z) - closed).abs() < 1e-13, "z = {z}");
        }
        assert!((upper_log_moment_1(800.0) - EULER_GAMMA).abs() < 1e-15);
        assert_eq!(upper_log_moment_1(-800.0), 0.0);
    }

    #[test]
    fn i1_halves_sum_to_gamma() {
        for z in [-4.0, -0.2, 0.0, 0.3, 3.0, 30.0] {
            let total = upper_log_moment_1(z) + lower_log_moment_1(z);
            assert!((total - EULER_GAMMA).abs() < 1e-14, "z = {z}");
            let q = std_gumbel_partial_moment(1, z, f64::INFINITY, &spec()).unwrap();
            assert!((lower_log_moment_1(z) - q).abs() < 1e-11, "z = {z}");
        }
    }

    #[test]
    fn invalid_ranges() {
        assert!(matches!(
            incomplete_log_moment(2, 1.0, 1.0, &spec()),
            Err(BgError::InvalidRange { .. })
        ));
        assert!(matches!(
            incomplete_log_moment(2, -0.1, 1.0, &spec()),
            Err(BgError::InvalidRange { .. })
        ));
    }

    #[test]
    fn quadrature_reaches_constants() {
        for k in 0..=6 {
            let q = incomplete_log_moment(k, 0.0, f64::INFINITY, &spec()).unwrap();
            let c = log_moment_constant(k).unwrap();
            assert!((q - c).abs() < 1e-8, "k = {k}: {q} vs {c}");
        }
    }
}
