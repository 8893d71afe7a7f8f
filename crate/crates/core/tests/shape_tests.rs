mod common;

use bgumbel_core::distribution::{bg_log_pdf, bg_pdf};
use bgumbel_core::shape::{
    check_condition_c, critical_function_g, d_interval, d_set_function, find_modes, hazard, hazard_monotonicity,
    tail_rate,
};
use bgumbel_core::{BgError, BgParams, Modality, QuadratureSpec};
use common::bg_density;
use proptest::prelude::*;

fn p(mu: f64, sigma: f64, delta: f64) -> BgParams {
    BgParams::new(mu, sigma, delta).unwrap()
}

/// Local maxima of the density on a uniform grid.
fn grid_modes(mu: f64, sigma: f64, delta: f64, lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let xs: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
    let fs: Vec<f64> = xs.iter().map(|&x| bg_density(mu, sigma, delta, x)).collect();
    let floor = 1e-10 * fs.iter().copied().fold(0.0, f64::max);
    (1..n - 1)
        .filter(|&i| fs[i] > floor && fs[i] > fs[i - 1] && fs[i] >= fs[i + 1])
        .map(|i| xs[i])
        .collect()
}

#[test]
fn derivative_roots_and_d_set() {
    let q = p(1.0, 1.0, 2.0);
    let r = find_modes(&q).unwrap();
    assert_eq!(r.modality, Modality::Bimodal);
    let expected = [-0.0896138, 2.79117];
    for (m, e) in r.modes.iter().zip(expected) {
        assert!((m - e).abs() < 1e-4, "{m} vs {e}");
    }
    assert!((r.antimode.unwrap() - 0.389792).abs() < 1e-4);
    let (a, b) = r.d_interval.unwrap();
    assert!((a - 0.132178).abs() < 1e-4 && (b - 0.937349).abs() < 1e-4, "({a}, {b})");
    assert!(r.condition_c_holds && r.r2_in_d);
    for x in r.modes.iter().chain(r.antimode.iter()) {
        assert!(critical_function_g(&q, *x).abs() < 1e-9);
    }
}

#[test]
fn d_endpoints_are_zeros_of_h() {
    let q = p(1.0, 1.0, 2.5);
    assert!(check_condition_c(&q).holds());
    let (a, b) = d_interval(&q).unwrap().unwrap();
    assert!(a < b);
    assert!(d_set_function(&q, a).abs() < 1e-8);
    assert!(d_set_function(&q, b).abs() < 1e-8);
    // Dense-grid sign scan: negative strictly inside, nonnegative just outside.
    let n = 100_000;
    let hi = 2.0 / 2.5;
    let neg: Vec<f64> = (0..=n)
        .map(|i| hi * i as f64 / n as f64)
        .filter(|&x| d_set_function(&q, x) < 0.0)
        .collect();
    assert!((neg[0] - a).abs() < 2.0 * hi / n as f64);
    assert!((neg[neg.len() - 1] - b).abs() < 2.0 * hi / n as f64);
}

#[test]
fn d_interval_requires_condition_c() {
    assert!(matches!(d_interval(&p(1.0, 1.0, 1.0)), Err(BgError::Precondition(_))));
}

#[test]
fn modality_matches_dense_grid() {
    for (mu, sigma, delta) in [
        (1.0, 2.0, 0.2),
        (1.0, 2.0, 1.0),
        (1.0, 1.0, 2.0),
        (-2.0, 1.0, -1.0),
        (0.0, 1.0, 0.0),
    ] {
        let r = find_modes(&p(mu, sigma, delta)).unwrap();
        let grid = grid_modes(
            mu,
            sigma,
            delta,
            mu - 15.0 * sigma - 20.0,
            mu + 30.0 * sigma + 20.0,
            1_000_001,
        );
        assert_eq!(
            r.modes.len(),
            grid.len(),
            "({mu}, {sigma}, {delta}): {:?} vs {grid:?}",
            r.modes
        );
        for (m, g) in r.modes.iter().zip(&grid) {
            assert!((m - g).abs() < 1e-3);
        }
    }
}

#[test]
fn gumbel_mode_at_mu() {
    let r = find_modes(&p(0.0, 1.0, 0.0)).unwrap();
    assert_eq!(r.modality, Modality::Unimodal);
    assert!(r.modes[0].abs() < 1e-9);
    assert!(r.antimode.is_none());
}

#[test]
fn derivative_identity() {
    for (mu, sigma, delta) in [(1.0, 1.0, 2.0), (-1.0, 2.0, -2.0), (0.5, 0.7, 0.3)] {
        let q = p(mu, sigma, delta);
        for i in 0..=60 {
            let x = mu + sigma * (-6.0 + 0.2 * i as f64);
            let h = 1e-5 * sigma;
            let fd = (bg_pdf(&q, x + h) - bg_pdf(&q, x - h)) / (2.0 * h);
            let an = bg_pdf(&q, x) * critical_function_g(&q, x);
            let scale = an.abs().max(1e-3 * bg_pdf(&q, x)).max(1e-300);
            assert!((fd - an).abs() < 1e-5 * scale, "x={x}: {fd} vs {an}");
        }
    }
}

#[test]
fn hazard_gumbel_point() {
    let hp = hazard(&p(0.0, 1.0, 0.0), 0.0, &QuadratureSpec::default()).unwrap();
    let s = 1.0 - (-1.0f64).exp();
    assert!((hp.survival - s).abs() < 1e-12);
    assert!((hp.hazard - (-1.0f64).exp() / s).abs() < 1e-10);
}

#[test]
fn hazard_tends_to_tail_rate() {
    let spec = QuadratureSpec::default();
    let q = p(0.0, 2.0, 0.0);
    let far = hazard(&q, 60.0, &spec).unwrap().hazard;
    assert!((far - 0.5).abs() < 1e-3);
    assert_eq!(hazard(&q, 5000.0, &spec).unwrap().hazard, tail_rate(&q));
    assert_eq!(tail_rate(&p(0.0, 1.0, 0.3)), 1.0);
}

#[test]
fn tail_rate_matches_log_density_slope() {
    // For δ ≠ 0 the weight contributes about 2/x to the slope, so the limit is
    // only reached far out.
    let cases = [
        (1.0, 1.0, 0.0, 40.0),
        (-2.0, 2.0, 0.0, 40.0),
        (1.0, 1.0, 2.0, 4000.0),
        (-2.0, 1.0, -1.0, 4000.0),
        (1.0, 2.0, 0.5, 4000.0),
    ];
    for (mu, sigma, delta, k) in cases {
        let q = p(mu, sigma, delta);
        let x = mu + k * sigma;
        let h = 1e-4 * sigma;
        let slope = -(bg_log_pdf(&q, x + h) - bg_log_pdf(&q, x - h)) / (2.0 * h);
        assert!((slope - tail_rate(&q)).abs() < 1e-3, "{slope}");
    }
}

#[test]
fn hazard_monotone_on_proven_intervals() {
    let q = p(1.0, 1.0, 2.0);
    let spec = QuadratureSpec::default();
    let trends = hazard_monotonicity(&q, -3.0, 3.0, 601, &spec).unwrap();
    let r = find_modes(&q).unwrap();
    let (d0, d1) = r.d_interval.unwrap();
    let (r1, r2, r3) = (r.modes[0], r.antimode.unwrap(), r.modes[1]);
    assert!(r2 > d0 && r2 < d1);
    let check = |a: f64, b: f64, inc: bool| {
        let n = 200;
        let hs: Vec<f64> = (0..=n)
            .map(|i| hazard(&q, a + (b - a) * i as f64 / n as f64, &spec).unwrap().hazard)
            .collect();
        assert!(hs.windows(2).all(|w| (w[1] >= w[0]) == inc), "[{a}, {b}] inc={inc}");
    };
    check(-3.0, r1, true);
    check(r2, r3, true);
    assert!(trends.iter().any(|t| t.guaranteed));
    assert!(trends.iter().filter(|t| t.guaranteed).all(|t| t.increasing));

    // The hazard turns around inside D rather than falling across all of it.
    let hs: Vec<f64> = (0..=100)
        .map(|i| hazard(&q, d0 + (d1 - d0) * i as f64 / 100.0, &spec).unwrap().hazard)
        .collect();
    let lowest = hs
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap()
        .0;
    assert!(lowest > 0 && lowest < 100);
}

#[test]
fn survival_strictly_decreasing() {
    let spec = QuadratureSpec::default();
    for q in [p(1.0, 1.0, 2.0), p(-1.0, 2.0, -2.0)] {
        let s: Vec<f64> = (0..200)
            .map(|i| hazard(&q, -8.0 + 0.1 * i as f64, &spec).unwrap())
            .map(|h| {
                assert!(h.hazard >= 0.0);
                h.survival
            })
            .collect();
        // Strict only where S is resolvable from 1 in double precision.
        assert!(s.windows(2).all(|w| w[1] <= w[0]));
        assert!(s
            .windows(2)
            .filter(|w| w[0] < 1.0 - 1e-12 && w[1] > 1e-12)
            .all(|w| w[1] < w[0]));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn modes_are_local_maxima(mu in -3.0..3.0f64, sigma in 0.3..3.0f64, delta in -3.0..3.0f64) {
        let q = p(mu, sigma, delta);
        let r = find_modes(&q).unwrap();
        prop_assert_eq!(r.modes.len(), r.antimode.iter().count() + 1);
        for &m in &r.modes {
            let h = 1e-4 * sigma;
            prop_assert!(bg_pdf(&q, m) >= bg_pdf(&q, m + h));
            prop_assert!(bg_pdf(&q, m) >= bg_pdf(&q, m - h));
        }
        if let Some(a) = r.antimode {
            prop_assert!(r.modes[0] < a && a < r.modes[1]);
        }
        if r.condition_c_holds && r.r2_in_d {
            prop_assert_eq!(r.modality, Modality::Bimodal);
        }
    }
}
