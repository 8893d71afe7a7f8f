//! Random variates from the BG law.
//!
//! Two generators are provided. [`mh_sample`] is a Gaussian random-walk
//! Metropolis chain targeting the log-density. [`exact_sample`] draws iid
//! variates from the decomposition of the density into Gumbel, |y|-weighted
//! Gumbel and y²-weighted Gumbel pieces, followed by an accept/reject step that
//! restores the sign of the linear term. [`representation_sample`] is the same
//! generator restricted to the regime δ(μ + σγ) < 0 where all three mixture
//! probabilities are nonnegative.
//!
//! All randomness comes from ChaCha20 (`rand_chacha::ChaCha20Rng`) seeded with
//! `seed_from_u64`, so a seed fully determines the output on every platform.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::distribution::{bg_log_pdf, bg_moment_set, BgParams, GumbelParams};
use crate::error::{BgError, Result};
use crate::special::{QuadratureSpec, EULER_GAMMA};

/// Random-walk Metropolis settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McmcConfig {
    pub n_iterations: usize,
    pub burn_in: usize,
    pub proposal_scale: f64,
    pub seed: u64,
    pub initial_point: f64,
    /// Keep every `thin`-th post burn-in state. 1 keeps them all.
    pub thin: usize,
}

impl McmcConfig {
    /// Defaults for `p`: scale 2.4·sd(X) (σ if the moments are unavailable),
    /// 10% burn-in, start at μ, no thinning.
    pub fn for_params(p: &BgParams, n_iterations: usize, seed: u64) -> Self {
        let scale = bg_moment_set(p)
            .ok()
            .map(|m| m.variance)
            .filter(|v| v.is_finite() && *v > 0.0)
            .map(|v| 2.4 * v.sqrt())
            .unwrap_or(p.sigma);
        Self {
            n_iterations,
            burn_in: n_iterations / 10,
            proposal_scale: scale,
            seed,
            initial_point: p.mu,
            thin: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_iterations == 0 {
            return Err(BgError::InvalidParams("n_iterations must be positive".into()));
        }
        if self.burn_in >= self.n_iterations {
            return Err(BgError::InvalidParams(format!(
                "burn_in ({}) must be smaller than n_iterations ({})",
                self.burn_in, self.n_iterations
            )));
        }
        if !(self.proposal_scale >= 0.0) || !self.proposal_scale.is_finite() {
            return Err(BgError::InvalidParams(format!(
                "proposal_scale must be nonnegative and finite, got {}",
                self.proposal_scale
            )));
        }
        if !self.initial_point.is_finite() {
            return Err(BgError::InvalidParams("initial_point must be finite".into()));
        }
        if self.thin == 0 {
            return Err(BgError::InvalidParams("thin must be at least 1".into()));
        }
        Ok(())
    }
}

/// Output of [`mh_sample`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Chain {
    /// Post burn-in states, `n_iterations − burn_in` of them when `thin = 1`.
    pub draws: Vec<f64>,
    /// Accepted over proposed, counted over every iteration.
    pub acceptance_rate: f64,
    pub seed: u64,
}

impl Chain {
    /// True when the acceptance rate falls outside [0.1, 0.6], which usually
    /// means the proposal scale is badly tuned.
    pub fn poorly_mixing(&self) -> bool {
        !(0.1..=0.6).contains(&self.acceptance_rate)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        write_draws_csv(&self.draws, out)
    }
}

/// Writes a single-column CSV with header `draw`.
pub fn write_draws_csv<W: Write>(draws: &[f64], mut out: W) -> std::io::Result<()> {
    writeln!(out, "draw")?;
    for d in draws {
        writeln!(out, "{d}")?;
    }
    out.flush()
}

pub fn mh_sample(p: &BgParams, cfg: &McmcConfig) -> Result<Chain> {
    p.validate()?;
    cfg.validate()?;
    let mut rng = ChaCha20Rng::seed_from_u64(cfg.seed);
    let mut x = cfg.initial_point;
    let mut lp = bg_log_pdf(p, x);
    let mut accepted = 0usize;
    let kept = (cfg.n_iterations - cfg.burn_in).div_ceil(cfg.thin);
    let mut draws = Vec::with_capacity(kept);
    for i in 0..cfg.n_iterations {
        let step: f64 = rng.sample(StandardNormal);
        let y = x + cfg.proposal_scale * step;
        let lq = bg_log_pdf(p, y);
        let u: f64 = rng.random();
        if u.ln() < lq - lp {
            x = y;
            lp = lq;
            accepted += 1;
        }
        if i >= cfg.burn_in && (i - cfg.burn_in).is_multiple_of(cfg.thin) {
            draws.push(x);
        }
    }
    Ok(Chain {
        draws,
        acceptance_rate: accepted as f64 / cfg.n_iterations as f64,
        seed: cfg.seed,
    })
}

/// Gumbel law weighted by |y|ᵏ, k ∈ {0, 1, 2}: CDF, density and inverse.
struct AbsWeightedGumbel {
    g: GumbelParams,
    k: usize,
    norm: f64,
    below_zero: f64,
    spec: QuadratureSpec,
    /// CDF tabulated on a fine grid; inversion refines inside one cell.
    table_x: Vec<f64>,
    table_cdf: Vec<f64>,
}

const GL8_NODES: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL8_WEIGHTS: [f64; 4] = [
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

fn gauss_legendre8<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    let mut s = 0.0;
    for (x, w) in GL8_NODES.iter().zip(GL8_WEIGHTS) {
        s += w * (f(c - h * x) + f(c + h * x));
    }
    s * h
}

impl AbsWeightedGumbel {
    fn new(g: GumbelParams, k: usize, spec: QuadratureSpec) -> Result<Self> {
        let (norm, below_zero) = match k {
            0 => (1.0, 0.0),
            1 => {
                let t0 = g.truncated_moment(1, 0.0, &spec)?;
                (g.mean() - 2.0 * t0, t0)
            }
            _ => (g.raw_moment(2)?, 0.0),
        };
        let mut w = Self {
            g,
            k,
            norm,
            below_zero,
            spec,
            table_x: Vec::new(),
            table_cdf: Vec::new(),
        };
        if k > 0 {
            w.tabulate()?;
        }
        Ok(w)
    }

    /// Grid over z ∈ [−4.5, 45] with step 0.025, plus y = 0 where the |y|
    /// weight has a kink.
    fn tabulate(&mut self) -> Result<()> {
        let (mu, s) = (self.g.mu, self.g.sigma);
        let mut xs: Vec<f64> = (0..=1980).map(|i| mu + s * (-4.5 + 0.025 * i as f64)).collect();
        if xs[0] < 0.0 && *xs.last().unwrap() > 0.0 {
            let at = xs.partition_point(|&x| x < 0.0);
            if xs[at] != 0.0 {
                xs.insert(at, 0.0);
            }
        }
        let mut cdf = Vec::with_capacity(xs.len());
        cdf.push(self.cdf(xs[0])?);
        for i in 1..xs.len() {
            let prev = cdf[i - 1];
            cdf.push(prev + gauss_legendre8(|x| self.pdf(x), xs[i - 1], xs[i]));
        }
        self.table_x = xs;
        self.table_cdf = cdf;
        Ok(())
    }

    fn cdf(&self, x: f64) -> Result<f64> {
        Ok(match self.k {
            0 => self.g.cdf(x),
            1 => {
                let t = self.g.truncated_moment(1, x, &self.spec)?;
                let raw = if x <= 0.0 { -t } else { t - 2.0 * self.below_zero };
                raw / self.norm
            }
            _ => self.g.truncated_moment(2, x, &self.spec)? / self.norm,
        })
    }

    fn pdf(&self, x: f64) -> f64 {
        x.abs().powi(self.k as i32) * self.g.pdf(x) / self.norm
    }

    fn quantile(&self, u: f64) -> Result<f64> {
        if self.k == 0 {
            return Ok(self.g.quantile(u));
        }
        let (xs, cs) = (&self.table_x, &self.table_cdf);
        let i = cs.partition_point(|&c| c < u);
        if i == 0 || i == cs.len() {
            return self.quantile_direct(u);
        }
        let (x0, c0) = (xs[i - 1], cs[i - 1]);
        let local = |x: f64| Ok(c0 + gauss_legendre8(|t| self.pdf(t), x0, x));
        self.newton(u, x0, xs[i], local)
    }

    /// Inversion against the full CDF, used outside the tabulated range.
    fn quantile_direct(&self, u: f64) -> Result<f64> {
        let (mu, s) = (self.g.mu, self.g.sigma);
        let mut width = s;
        let (mut lo, mut hi) = (mu - width, mu + width);
        while self.cdf(lo)? > u {
            width *= 2.0;
            lo = mu - width;
        }
        width = s;
        while self.cdf(hi)? < u {
            width *= 2.0;
            hi = mu + width;
        }
        self.newton(u, lo, hi, |x| self.cdf(x))
    }

    /// Safeguarded Newton iteration on a bracket of the CDF, to 1e−10 in x.
    fn newton<F: Fn(f64) -> Result<f64>>(&self, u: f64, mut lo: f64, mut hi: f64, cdf: F) -> Result<f64> {
        let mut x = 0.5 * (lo + hi);
        for _ in 0..200 {
            let f = cdf(x)? - u;
            if f > 0.0 {
                hi = x;
            } else {
                lo = x;
            }
            let d = self.pdf(x);
            let newton = if d > 0.0 { x - f / d } else { f64::NAN };
            let next = if newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            let tol = 1e-10 * x.abs().max(1.0);
            if (next - x).abs() < tol || hi - lo < tol {
                return Ok(next);
            }
            x = next;
        }
        Ok(x)
    }
}

/// Iid draws for any valid parameters.
///
/// The proposal density is proportional to `[(1 + |δy|)² + 1] f_G(y)`, a
/// mixture of the |y|ᵏ-weighted Gumbel laws with weights
/// `2 : 2|δ|E|Y| : δ²E(Y²)`; each component is sampled by inversion. A
/// proposal is accepted with probability `[(1 − δy)² + 1] / [(1 + |δy|)² + 1]`.
pub fn exact_sample(p: &BgParams, n: usize, seed: u64) -> Result<Vec<f64>> {
    p.validate()?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let g = p.gumbel();
    if p.delta == 0.0 {
        return Ok((0..n).map(|_| g.quantile(open_unit(&mut rng))).collect());
    }
    let spec = QuadratureSpec::default();
    let parts = [
        AbsWeightedGumbel::new(g, 0, spec)?,
        AbsWeightedGumbel::new(g, 1, spec)?,
        AbsWeightedGumbel::new(g, 2, spec)?,
    ];
    let d = p.delta;
    let raw = [2.0, 2.0 * d.abs() * parts[1].norm, d * d * parts[2].norm];
    let total: f64 = raw.iter().sum();
    let cum = [raw[0] / total, (raw[0] + raw[1]) / total];

    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let w: f64 = rng.random();
        let k = if w < cum[0] {
            0
        } else if w < cum[1] {
            1
        } else {
            2
        };
        let y = parts[k].quantile(open_unit(&mut rng))?;
        let dy = d * y;
        let accept = ((1.0 - dy).powi(2) + 1.0) / ((1.0 + dy.abs()).powi(2) + 1.0);
        let v: f64 = rng.random();
        if v < accept {
            out.push(y);
        }
    }
    Ok(out)
}

/// Mixture-representation draws, defined only when δ(μ + σγ) < 0.
pub fn representation_sample(p: &BgParams, n: usize, seed: u64) -> Result<Vec<f64>> {
    p.validate()?;
    let m = p.mu + p.sigma * EULER_GAMMA;
    if !(p.delta * m < 0.0) {
        return Err(BgError::Regime(format!(
            "the mixture representation needs delta*(mu + sigma*gamma) < 0, \
             i.e. delta > 0 with mu + sigma*gamma < 0 or delta < 0 with mu + sigma*gamma > 0; \
             got delta = {}, mu + sigma*gamma = {m}",
            p.delta
        )));
    }
    exact_sample(p, n, seed)
}

fn open_unit(rng: &mut ChaCha20Rng) -> f64 {
    loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            return u;
        }
    }
}

/// Sample moments of a chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainSummary {
    pub n: usize,
    pub mean: f64,
    /// Unbiased (n − 1 denominator); zero for a single draw.
    pub variance: f64,
}

impl ChainSummary {
    /// (sample mean − E X, sample variance − Var X).
    pub fn bias_vs(&self, p: &BgParams) -> Result<(f64, f64)> {
        let m = bg_moment_set(p)?;
        Ok((self.mean - m.mean, self.variance - m.variance))
    }
}

pub fn summarize(draws: &[f64]) -> Result<ChainSummary> {
    if draws.is_empty() {
        return Err(BgError::EmptyData);
    }
    let n = draws.len();
    let mean = draws.iter().sum::<f64>() / n as f64;
    let ss: f64 = draws.iter().map(|x| (x - mean).powi(2)).sum();
    let variance = if n > 1 { ss / (n - 1) as f64 } else { 0.0 };
    Ok(ChainSummary { n, mean, variance })
}

pub fn chain_summary(c: &Chain) -> Result<ChainSummary> {
    summarize(&c.draws)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(mu: f64, sigma: f64, delta: f64) -> BgParams {
        BgParams::new(mu, sigma, delta).unwrap()
    }

    #[test]
    fn config_validation() {
        let q = p(0.0, 1.0, 1.0);
        let mut cfg = McmcConfig::for_params(&q, 100, 1);
        assert_eq!(cfg.burn_in, 10);
        assert_eq!(cfg.initial_point, 0.0);
        cfg.burn_in = 100;
        assert!(cfg.validate().is_err());
        cfg.burn_in = 0;
        cfg.thin = 0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn chain_length_and_rate() {
        let q = p(-2.0, 1.0, -1.0);
        let cfg = McmcConfig::for_params(&q, 1000, 7);
        let c = mh_sample(&q, &cfg).unwrap();
        assert_eq!(c.draws.len(), 900);
        assert!((0.0..=1.0).contains(&c.acceptance_rate));
        assert_eq!(c.seed, 7);
        let thinned = mh_sample(&q, &McmcConfig { thin: 4, ..cfg }).unwrap();
        assert_eq!(thinned.draws.len(), 225);
        assert_eq!(thinned.draws[1], c.draws[4]);
    }

    #[test]
    fn zero_scale_chain_stays_put() {
        let q = p(0.5, 1.0, 1.0);
        let cfg = McmcConfig {
            proposal_scale: 0.0,
            ..McmcConfig::for_params(&q, 50, 3)
        };
        let c = mh_sample(&q, &cfg).unwrap();
        assert!(c.draws.iter().all(|&x| x == 0.5));
    }

    #[test]
    fn regime_check() {
        assert!(matches!(
            representation_sample(&p(1.0, 1.0, 1.0), 10, 1),
            Err(BgError::Regime(_))
        ));
        assert_eq!(representation_sample(&p(-2.0, 1.0, 1.0), 10, 1).unwrap().len(), 10);
    }

    #[test]
    fn abs_weighted_quantile_inverts_cdf() {
        let g = GumbelParams::new(-0.5, 1.5).unwrap();
        for k in 1..=2 {
            let w = AbsWeightedGumbel::new(g, k, QuadratureSpec::default()).unwrap();
            for u in [1e-6, 0.1, 0.5, 0.9, 1.0 - 1e-9] {
                let x = w.quantile(u).unwrap();
                assert!((w.cdf(x).unwrap() - u).abs() < 1e-9, "k = {k}, u = {u}");
            }
        }
    }

    #[test]
    fn summary_of_constant_chain() {
        let s = summarize(&[2.5; 10]).unwrap();
        assert_eq!((s.mean, s.variance, s.n), (2.5, 0.0, 10));
        assert!(summarize(&[]).is_err());
        let s = summarize(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(s.variance, 1.0);
    }

    #[test]
    fn csv_has_header() {
        let mut buf = Vec::new();
        write_draws_csv(&[1.5, -2.0], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "draw\n1.5\n-2\n");
    }
}
