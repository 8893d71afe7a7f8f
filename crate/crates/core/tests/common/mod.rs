#![allow(dead_code)]

use std::path::PathBuf;

/// Composite Simpson rule with `panels` (even) subintervals.
pub fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, panels: usize) -> f64 {
    let n = panels + panels % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

/// Simpson over consecutive pieces of a partition, with panel width at most
/// `h` in every piece.
pub fn simpson_pieces<F: Fn(f64) -> f64>(f: &F, points: &[f64], h: f64) -> f64 {
    points
        .windows(2)
        .map(|w| simpson(f, w[0], w[1], (((w[1] - w[0]) / h).ceil() as usize).max(2)))
        .sum()
}

/// Independent BG density, written directly from its definition.
pub fn bg_density(mu: f64, sigma: f64, delta: f64, x: f64) -> f64 {
    let g = 0.577_215_664_901_532_9_f64;
    let pi2 = std::f64::consts::PI.powi(2);
    let z = (x - mu) / sigma;
    let zn = 1.0 + delta * delta * sigma * sigma * pi2 / 6.0 + (delta * mu + delta * sigma * g - 1.0).powi(2);
    ((1.0 - delta * x).powi(2) + 1.0) * (-z - (-z).exp()).exp() / (sigma * zn)
}

/// ∫_{−∞}^x of [`bg_density`], integrated in z-space.
pub fn cdf_oracle(mu: f64, sigma: f64, delta: f64, x: f64) -> f64 {
    let zx = (x - mu) / sigma;
    let lo = (-5.0f64).min(zx - 1.0);
    let f = |z: f64| bg_density(mu, sigma, delta, mu + sigma * z) * sigma;
    let mut pts = vec![lo];
    pts.extend([-2.0, 0.0, 2.0, 6.0, 15.0].into_iter().filter(|&b| b > lo && b < zx));
    pts.push(zx);
    simpson_pieces(&f, &pts, 1e-3)
}

pub fn fixture(name: &str) -> Vec<f64> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name);
    std::fs::read_to_string(&path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.trim().parse().unwrap())
        .collect()
}

/// Sup-distance between the empirical CDF of `xs` and `cdf`.
pub fn ks_distance<F: Fn(f64) -> f64>(xs: &[f64], cdf: F) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    v.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}
