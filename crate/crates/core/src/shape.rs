//! Modes, antimode, hazard rate and tail rate of the BG density.
//!
//! Critical points are the roots of
//!
//! ```text
//! g(x) = (1/σ)[e^{−(x−μ)/σ} − 1] − 2δ(1 − δx) / [(1 − δx)² + 1]
//! ```
//!
//! since `f′ = f·g`. A sign change of `g` from + to − is a mode, − to + an
//! antimode.

use serde::{Deserialize, Serialize};

use crate::distribution::{bg_pdf, bg_survival, BgParams};
use crate::error::{BgError, Result};
use crate::special::QuadratureSpec;

const INITIAL_GRID: usize = 4096;
const MAX_GRID: usize = 65536;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Modality {
    Unimodal,
    Bimodal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShapeReport {
    pub modality: Modality,
    /// Local maxima, ascending.
    pub modes: Vec<f64>,
    pub antimode: Option<f64>,
    pub condition_c_holds: bool,
    pub r2_in_d: bool,
    pub d_interval: Option<(f64, f64)>,
}

/// The four inequalities defining the parameter set 𝒞.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionC {
    pub cond1: bool,
    pub cond2: bool,
    pub cond3: bool,
    pub cond4: bool,
}

impl ConditionC {
    pub fn holds(&self) -> bool {
        self.cond1 && self.cond2 && self.cond3 && self.cond4
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HazardPoint {
    pub x: f64,
    pub survival: f64,
    pub hazard: f64,
}

pub fn critical_function_g(p: &BgParams, x: f64) -> f64 {
    let z = (x - p.mu) / p.sigma;
    let u = 1.0 - p.delta * x;
    ((-z).exp() - 1.0) / p.sigma - 2.0 * p.delta * u / (u * u + 1.0)
}

/// Evaluates (cond1)–(cond4) literally.
pub fn check_condition_c(p: &BgParams) -> ConditionC {
    let (mu, s, d) = (p.mu, p.sigma, p.delta);
    let ratio = |c: f64| {
        let u = 1.0 - c * d;
        2.0 * d * u / (u * u + 1.0)
    };
    ConditionC {
        cond1: d > 1f64.max(((mu / s).exp() - 1.0) / s),
        cond2: ratio(-1.0) < ((1.0 + mu) / s).exp_m1() / s,
        cond3: ratio(2.0) < (-(2.0 - mu) / s).exp_m1() / s,
        cond4: ratio(3.0) > (-(3.0 - mu) / s).exp_m1() / s,
    }
}

/// The function whose negative set is 𝒟: `2δ²[(1−δx)²−1]/[(1−δx)²+1] + e^{−(x−μ)/σ}/σ²`.
pub fn d_set_function(p: &BgParams, x: f64) -> f64 {
    let u = 1.0 - p.delta * x;
    let z = (x - p.mu) / p.sigma;
    2.0 * p.delta * p.delta * (u * u - 1.0) / (u * u + 1.0) + (-z).exp() / (p.sigma * p.sigma)
}

/// Locates the interval 𝒟 where `g` is increasing, for parameters in 𝒞.
///
/// Under (cond1) δ > 1, and the quadratic term is negative only on
/// (0, 2/δ), so the scan is confined there.
pub fn d_interval(p: &BgParams) -> Result<Option<(f64, f64)>> {
    p.validate()?;
    if !check_condition_c(p).holds() {
        return Err(BgError::Precondition(
            "the set D is only defined for parameters satisfying condition C".into(),
        ));
    }
    let h = |x: f64| d_set_function(p, x);
    let hi = 2.0 / p.delta;
    let n = INITIAL_GRID;
    let step = hi / n as f64;
    let mut start = None;
    let mut prev_x = 0.0;
    let mut prev_neg = h(0.0) < 0.0;
    for i in 1..=n {
        let x = i as f64 * step;
        let neg = h(x) < 0.0;
        if neg && !prev_neg && start.is_none() {
            start = Some(bisect(&h, prev_x, x));
        }
        if !neg && prev_neg {
            let end = bisect(&h, prev_x, x);
            return Ok(Some((start.unwrap_or(0.0), end)));
        }
        prev_x = x;
        prev_neg = neg;
    }
    Ok(start.map(|s| (s, hi)))
}

/// Bisection on a bracket with a sign change, to 1e−12 relative width.
fn bisect<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64) -> f64 {
    let fa_pos = f(a) > 0.0;
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if (b - a).abs() <= 1e-12 * m.abs().max(1.0) || m <= a || m >= b {
            break;
        }
        if (f(m) > 0.0) == fa_pos {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Interval guaranteed to contain every root of `g`.
///
/// A root needs e^{−z} = 1 + σ r(x) with |r| ≤ |δ| and |r| ≤ 2/|x − 1/δ|,
/// which bounds z from below, and from above either through 1 − σ|δ| > 0 or
/// through |x − 1/δ| ≤ 4σ once z ≥ ln 2.
fn root_window(p: &BgParams) -> (f64, f64) {
    let (mu, s, d) = (p.mu, p.sigma, p.delta.abs());
    let lo = mu - s * (s * d).ln_1p();
    let hi = if d == 0.0 {
        mu
    } else {
        let far = (mu + s * std::f64::consts::LN_2).max(1.0 / p.delta + 4.0 * s);
        if s * d < 1.0 {
            far.min(mu - s * (-s * d).ln_1p())
        } else {
            far
        }
    };
    let pad = 0.05 * (hi - lo) + 0.5 * s;
    (lo - pad, hi + pad)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Crossing {
    Mode(f64),
    Antimode(f64),
}

impl Crossing {
    fn x(&self) -> f64 {
        match *self {
            Crossing::Mode(x) | Crossing::Antimode(x) => x,
        }
    }
}

/// Returns the sign changes of `g` on an `n`-point grid, or the location of a
/// suspected missed pair of roots (a grid-level extremum that crosses zero
/// between samples).
fn scan_roots(p: &BgParams, lo: f64, hi: f64, n: usize) -> std::result::Result<Vec<Crossing>, f64> {
    let g = |x: f64| critical_function_g(p, x);
    let step = (hi - lo) / n as f64;
    let xs: Vec<f64> = (0..=n).map(|i| lo + i as f64 * step).collect();
    let gs: Vec<f64> = xs.iter().map(|&x| g(x)).collect();
    let mut out = Vec::new();
    for i in 0..n {
        let (g0, g1) = (gs[i], gs[i + 1]);
        if g0 > 0.0 && g1 <= 0.0 {
            out.push(Crossing::Mode(bisect(&g, xs[i], xs[i + 1])));
        } else if g0 < 0.0 && g1 >= 0.0 {
            out.push(Crossing::Antimode(bisect(&g, xs[i], xs[i + 1])));
        }
    }
    // Look for a local extremum whose true value lies across zero.
    for i in 1..n {
        let (a, b, c) = (gs[i - 1], gs[i], gs[i + 1]);
        let is_min = b <= a && b <= c && b > 0.0;
        let is_max = b >= a && b >= c && b < 0.0;
        if !(is_min || is_max) {
            continue;
        }
        let sign = if is_min { 1.0 } else { -1.0 };
        let (x_ext, g_ext) = golden_extremum(|x| sign * g(x), xs[i - 1], xs[i + 1]);
        if g_ext <= 0.0 {
            return Err(x_ext);
        }
    }
    Ok(out)
}

fn golden_extremum<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> (f64, f64) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..100 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
        if (b - a).abs() < 1e-13 * a.abs().max(1.0) {
            break;
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Finds all critical points of the density and classifies the shape.
pub fn find_modes(p: &BgParams) -> Result<ShapeReport> {
    p.validate()?;
    let (lo, hi) = root_window(p);
    let mut n = INITIAL_GRID;
    let crossings = loop {
        match scan_roots(p, lo, hi, n) {
            Ok(c) => break c,
            Err(x) if n < MAX_GRID => {
                let _ = x;
                n *= 2;
            }
            Err(x) => return Err(BgError::RootIsolation(x)),
        }
    };

    let modes: Vec<f64> = crossings
        .iter()
        .filter_map(|c| match c {
            Crossing::Mode(x) => Some(*x),
            _ => None,
        })
        .collect();
    let antimodes: Vec<f64> = crossings
        .iter()
        .filter_map(|c| match c {
            Crossing::Antimode(x) => Some(*x),
            _ => None,
        })
        .collect();
    if modes.is_empty() || modes.len() > 2 || antimodes.len() + 1 != modes.len() {
        let at = crossings.first().map(Crossing::x).unwrap_or(p.mu);
        return Err(BgError::RootIsolation(at));
    }

    let cond = check_condition_c(p);
    let d_int = if cond.holds() { d_interval(p)? } else { None };
    let antimode = antimodes.first().copied();
    let r2_in_d = match (antimode, d_int) {
        (Some(r2), Some((a, b))) => r2 > a && r2 < b,
        _ => false,
    };
    Ok(ShapeReport {
        modality: if modes.len() == 2 {
            Modality::Bimodal
        } else {
            Modality::Unimodal
        },
        modes,
        antimode,
        condition_c_holds: cond.holds(),
        r2_in_d,
        d_interval: d_int,
    })
}

/// Survival and hazard at `x`. Where the survival function underflows the
/// hazard is replaced by its limit 1/σ.
pub fn hazard(p: &BgParams, x: f64, spec: &QuadratureSpec) -> Result<HazardPoint> {
    let survival = bg_survival(p, x, spec)?;
    let hazard = if survival > 1e-280 {
        bg_pdf(p, x) / survival
    } else {
        tail_rate(p)
    };
    Ok(HazardPoint { x, survival, hazard })
}

/// Tail rate −lim d ln f/dx = 1/σ: far enough out every BG law has an
/// exponential right tail, lighter than log-normal or Pareto tails and
/// heavier than the normal one.
pub fn tail_rate(p: &BgParams) -> f64 {
    1.0 / p.sigma
}

/// A stretch of the grid on which the hazard moves in one direction. Runs are
/// split where `guaranteed` changes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HazardTrend {
    pub start: f64,
    pub end: f64,
    pub increasing: bool,
    /// The stretch lies inside x < r₁ or r₂ < x < r₃, where the density
    /// increases and so does the hazard. Only set for bimodal parameters in
    /// 𝒞 with r₂ ∈ 𝒟. No decreasing stretch is ever tagged: the hazard is
    /// not monotone on all of 𝒟 in general.
    pub guaranteed: bool,
}

/// Empirical monotonicity of the hazard on an `n`-point grid over `[lo, hi]`.
pub fn hazard_monotonicity(
    p: &BgParams,
    lo: f64,
    hi: f64,
    n: usize,
    spec: &QuadratureSpec,
) -> Result<Vec<HazardTrend>> {
    if !(hi > lo) || n < 2 {
        return Err(BgError::Domain(format!(
            "need lo < hi and n >= 2, got [{lo}, {hi}], n = {n}"
        )));
    }
    let xs: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
    let hs = xs
        .iter()
        .map(|&x| hazard(p, x, spec).map(|h| h.hazard))
        .collect::<Result<Vec<_>>>()?;

    let shape = find_modes(p)?;
    let proven: Vec<(f64, f64)> = match shape.antimode {
        Some(r2) if shape.r2_in_d && shape.modes.len() == 2 => {
            vec![(f64::NEG_INFINITY, shape.modes[0]), (r2, shape.modes[1])]
        }
        _ => Vec::new(),
    };

    let mut trends: Vec<HazardTrend> = Vec::new();
    for i in 0..n - 1 {
        let (a, b) = (xs[i], xs[i + 1]);
        let increasing = hs[i + 1] >= hs[i];
        let guaranteed = increasing && proven.iter().any(|&(lo, hi)| a >= lo && b <= hi);
        match trends.last_mut() {
            Some(t) if t.increasing == increasing && t.guaranteed == guaranteed => t.end = b,
            _ => trends.push(HazardTrend {
                start: a,
                end: b,
                increasing,
                guaranteed,
            }),
        }
    }
    Ok(trends)
}
