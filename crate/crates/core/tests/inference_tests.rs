mod common;

use bgumbel_core::inference::{fisher_information, fit_gumbel_mle, fit_mle, hessian, log_likelihood, score};
use bgumbel_core::sampling::exact_sample;
use bgumbel_core::{BgParams, FitOptions, FitResult, QuadratureSpec};
use common::{bg_density, fixture};
use nalgebra::Matrix3;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn p(mu: f64, sigma: f64, delta: f64) -> BgParams {
    BgParams::new(mu, sigma, delta).unwrap()
}

fn random_instance(rng: &mut ChaCha8Rng) -> (BgParams, Vec<f64>) {
    let truth = p(
        rng.random_range(-2.0..2.0),
        rng.random_range(0.5..2.0),
        rng.random_range(-2.0..2.0),
    );
    let data = exact_sample(&truth, 50, rng.random()).unwrap();
    // Evaluate away from the generating point so the score is not near zero.
    let at = p(
        truth.mu + rng.random_range(-0.3..0.3),
        truth.sigma * rng.random_range(0.8..1.25),
        truth.delta + rng.random_range(-0.3..0.3),
    );
    (at, data)
}

fn shifted(q: &BgParams, i: usize, h: f64) -> BgParams {
    let mut v = [q.mu, q.sigma, q.delta];
    v[i] += h;
    p(v[0], v[1], v[2])
}

/// Fourth-order central difference of `f` along coordinate `i`.
fn fd<F: Fn(&BgParams) -> f64>(f: F, q: &BgParams, i: usize, h: f64) -> f64 {
    let at = |k: f64| f(&shifted(q, i, k * h));
    (-at(2.0) + 8.0 * at(1.0) - 8.0 * at(-1.0) + at(-2.0)) / (12.0 * h)
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

fn within_3se(fit: &FitResult, truth: &BgParams) -> [bool; 3] {
    let se = fit.std_errors.expect("standard errors");
    [
        (fit.params.mu - truth.mu).abs() < 3.0 * se.mu,
        (fit.params.sigma - truth.sigma).abs() < 3.0 * se.sigma,
        (fit.params.delta - truth.delta).abs() < 3.0 * se.delta.unwrap(),
    ]
}

#[test]
fn score_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..50 {
        let (q, data) = random_instance(&mut rng);
        let s = score(&q, &data).unwrap();
        for i in 0..3 {
            let num = fd(|r| log_likelihood(r, &data).unwrap(), &q, i, 1e-3);
            assert!(rel_err(s[i], num) < 1e-6, "{q:?} [{i}]: {} vs {num}", s[i]);
        }
    }
}

#[test]
fn hessian_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let (q, data) = random_instance(&mut rng);
        let h = hessian(&q, &data).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let num = fd(|r| score(r, &data).unwrap()[i], &q, j, 1e-3);
                assert!(rel_err(h[i][j], num) < 1e-5, "{q:?} [{i}][{j}]: {} vs {num}", h[i][j]);
            }
            for j in 0..3 {
                assert_eq!(h[i][j], h[j][i]);
            }
        }
    }
}

#[test]
fn log_likelihood_matches_independent_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..20 {
        let (q, data) = random_instance(&mut rng);
        let direct: f64 = data.iter().map(|&x| bg_density(q.mu, q.sigma, q.delta, x).ln()).sum();
        let l = log_likelihood(&q, &data).unwrap();
        assert!((l - direct).abs() < 1e-10 * direct.abs().max(1.0), "{l} vs {direct}");
    }
}

#[test]
fn log_likelihood_on_hundred_point_sample() {
    let q = p(-2.0, 1.0, -1.0);
    let data = exact_sample(&q, 100, 100).unwrap();
    let direct: f64 = data.iter().map(|&x| bg_density(-2.0, 1.0, -1.0, x).ln()).sum();
    assert!((log_likelihood(&q, &data).unwrap() - direct).abs() < 1e-10 * direct.abs());
}

#[test]
fn fisher_is_symmetric_and_psd_at_fit() {
    let spec = QuadratureSpec::default();
    for (truth, seed) in [(p(-2.0, 1.0, -1.0), 1), (p(1.0, 1.0, 2.0), 2)] {
        let data = exact_sample(&truth, 20_000, seed).unwrap();
        let fit = fit_mle(&data, &FitOptions::default()).unwrap();
        let f = fisher_information(&fit.params, &spec).unwrap();
        let m = Matrix3::from_fn(|i, j| f[i][j]);
        assert_eq!(m, m.transpose());
        let eig = m.symmetric_eigenvalues();
        assert!(eig.iter().all(|&e| e > 0.0), "{eig}");
    }
}

#[test]
fn fisher_at_delta_zero_matches_score_outer_product() {
    let q = p(0.5, 1.5, 0.0);
    let f = fisher_information(&q, &QuadratureSpec::default()).unwrap();
    let xs = exact_sample(&q, 200_000, 77).unwrap();
    let n = xs.len() as f64;
    let mut sum = [[0.0; 3]; 3];
    let mut sq = [[0.0; 3]; 3];
    for &x in &xs {
        let s = score(&q, &[x]).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let v = s[i] * s[j];
                sum[i][j] += v;
                sq[i][j] += v * v;
            }
        }
    }
    for i in 0..3 {
        for j in 0..3 {
            let mean = sum[i][j] / n;
            let se = ((sq[i][j] / n - mean * mean) / n).sqrt();
            assert!(
                (mean - f[i][j]).abs() < 3.0 * se + 1e-12,
                "[{i}][{j}] {mean} vs {}",
                f[i][j]
            );
        }
    }
    // The (μ, σ) block is the Gumbel information.
    let g = 0.577_215_664_901_532_9_f64;
    let s2 = 1.5f64 * 1.5;
    let pi2 = std::f64::consts::PI.powi(2);
    assert!((f[0][0] - 1.0 / s2).abs() < 1e-10);
    assert!((f[0][1] - (g - 1.0) / s2).abs() < 1e-10);
    assert!((f[1][1] - (pi2 / 6.0 + (1.0 - g).powi(2)) / s2).abs() < 1e-10);
}

#[test]
fn information_equals_mean_negative_hessian() {
    let q = p(-2.0, 1.0, -1.0);
    let f = fisher_information(&q, &QuadratureSpec::default()).unwrap();
    let reps = 200;
    let n = 2000;
    let mut acc = [[0.0; 3]; 3];
    for r in 0..reps {
        let data = exact_sample(&q, n, 1000 + r).unwrap();
        let h = hessian(&q, &data).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                acc[i][j] -= h[i][j] / (n as f64 * reps as f64);
            }
        }
    }
    let a = Matrix3::from_fn(|i, j| acc[i][j]);
    let b = Matrix3::from_fn(|i, j| f[i][j]);
    let rel = (a - b).norm() / b.norm();
    assert!(rel < 0.05, "{rel}\n{a}\n{b}");
}

#[test]
fn bg_parameters_recovered() {
    let opts = FitOptions::default();
    for truth in [p(-2.0, 1.0, -1.0), p(1.0, 1.0, 2.0)] {
        let mut hits = [0; 3];
        for seed in 0..5 {
            let data = exact_sample(&truth, 5000, 500 + seed).unwrap();
            let fit = fit_mle(&data, &opts).unwrap();
            assert!(fit.converged);
            assert!(fit.grad_norm_at_solution < 1e-6 * fit.log_likelihood.abs().max(1.0));
            for (h, ok) in hits.iter_mut().zip(within_3se(&fit, &truth)) {
                *h += ok as usize;
            }
        }
        assert!(hits.iter().all(|&h| h >= 4), "{truth:?}: {hits:?}");
    }
}

#[test]
fn gumbel_parameters_recovered() {
    let truth = p(0.0, 1.0, 0.0);
    let data = exact_sample(&truth, 5000, 31).unwrap();
    let opts = FitOptions::default();
    let g = fit_gumbel_mle(&data, &opts).unwrap();
    assert_eq!(g.params.delta, 0.0);
    let se = g.std_errors.unwrap();
    assert!(se.delta.is_none());
    assert!((g.params.mu - truth.mu).abs() < 3.0 * se.mu);
    assert!((g.params.sigma - truth.sigma).abs() < 3.0 * se.sigma);
    let b = fit_mle(&data, &opts).unwrap();
    assert!(b.params.delta.abs() < 3.0 * b.std_errors.unwrap().delta.unwrap());
}

#[test]
fn gumbel_fit_is_translation_equivariant() {
    let data = exact_sample(&p(0.0, 1.0, 0.0), 500, 4).unwrap();
    let opts = FitOptions::default();
    let base = fit_gumbel_mle(&data, &opts).unwrap();
    for c in [-7.5, 3.0, 1009.0] {
        let moved: Vec<f64> = data.iter().map(|x| x + c).collect();
        let fit = fit_gumbel_mle(&moved, &opts).unwrap();
        assert!((fit.params.mu - base.params.mu - c).abs() < 1e-6 * (1.0 + c.abs()));
        assert!((fit.params.sigma - base.params.sigma).abs() < 1e-6);
        assert!((fit.log_likelihood - base.log_likelihood).abs() < 1e-6);
    }
}

#[test]
fn centered_fixture_prefers_bg_likelihood() {
    let data = fixture("centered_maxima.csv");
    assert_eq!(data.len(), 29);
    let opts = FitOptions::default();
    let b = fit_mle(&data, &opts).unwrap();
    let g = fit_gumbel_mle(&data, &opts).unwrap();
    assert!(b.log_likelihood > g.log_likelihood);
    let se = g.std_errors.unwrap();
    assert!(se.mu > 0.0 && se.sigma > 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn bg_likelihood_dominates_gumbel(
        mu in -2.0..2.0f64, sigma in 0.5..2.0f64, delta in -2.0..2.0f64, seed in 0u64..1000
    ) {
        let data = exact_sample(&p(mu, sigma, delta), 200, seed).unwrap();
        let opts = FitOptions::default();
        let b = fit_mle(&data, &opts).unwrap();
        let g = fit_gumbel_mle(&data, &opts).unwrap();
        prop_assert!(b.log_likelihood >= g.log_likelihood - 1e-9);
    }
}
