//! Reference computations that share no code with the library: sequential
//! one-observation conjugate updates, direct summation over count
//! distributions, exhaustive enumeration and plain Monte Carlo.
#![allow(dead_code)]

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Beta, Distribution, Gamma, Normal, Poisson};

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

pub fn seq_poisson_u2(mut alpha: f64, mut beta: f64, xs: &[f64]) -> f64 {
    for &x in xs {
        alpha += x;
        beta += 1.0;
    }
    alpha / (beta * beta)
}

/// Normal-inverse-gamma with `mu | s2 ~ N(mu0, lambda s2)`, updated one
/// observation at a time in precision form.
pub fn seq_normal_u2(mu0: f64, lambda: f64, mut alpha: f64, mut beta: f64, xs: &[f64]) -> f64 {
    let mut kappa = 1.0 / lambda;
    let mut mu = mu0;
    for &x in xs {
        beta += kappa * (x - mu) * (x - mu) / (2.0 * (kappa + 1.0));
        mu = (kappa * mu + x) / (kappa + 1.0);
        kappa += 1.0;
        alpha += 0.5;
    }
    beta / ((alpha - 1.0) * kappa)
}

pub fn seq_bernoulli_u2(mut a: f64, mut b: f64, xs: &[f64]) -> f64 {
    for &x in xs {
        if x > 0.5 {
            a += 1.0;
        } else {
            b += 1.0;
        }
    }
    a * b / ((a + b) * (a + b) * (a + b + 1.0))
}

#[derive(Debug, Clone, Copy)]
pub enum Hyper {
    Poisson { alpha: f64, beta: f64 },
    Normal { mu0: f64, lambda: f64, alpha: f64, beta: f64 },
    Bernoulli { a: f64, b: f64 },
}

impl Hyper {
    /// Prior-predictive draw of `n` observations followed by the sequential
    /// posterior variance.
    pub fn simulate_u2<R: Rng>(&self, n: usize, rng: &mut R) -> f64 {
        match *self {
            Hyper::Poisson { alpha, beta } => {
                let theta: f64 = Gamma::new(alpha, 1.0 / beta).unwrap().sample(rng);
                let xs: Vec<f64> = if theta > 0.0 {
                    let d = Poisson::new(theta).unwrap();
                    (0..n).map(|_| d.sample(rng)).collect()
                } else {
                    vec![0.0; n]
                };
                seq_poisson_u2(alpha, beta, &xs)
            }
            Hyper::Normal { mu0, lambda, alpha, beta } => {
                let g: f64 = Gamma::new(alpha, 1.0).unwrap().sample(rng);
                let s2 = beta / g;
                let mu = Normal::new(mu0, (lambda * s2).sqrt()).unwrap().sample(rng);
                let d = Normal::new(mu, s2.sqrt()).unwrap();
                let xs: Vec<f64> = (0..n).map(|_| d.sample(rng)).collect();
                seq_normal_u2(mu0, lambda, alpha, beta, &xs)
            }
            Hyper::Bernoulli { a, b } => {
                let p: f64 = Beta::new(a, b).unwrap().sample(rng);
                let xs: Vec<f64> = (0..n).map(|_| if rng.random::<f64>() < p { 1.0 } else { 0.0 }).collect();
                seq_bernoulli_u2(a, b, &xs)
            }
        }
    }
}

pub struct McEstimate {
    pub mean: f64,
    pub sd: f64,
    pub mean_se: f64,
    pub sd_se: f64,
}

/// Sample mean and sd with delete-one jackknife standard errors.
pub fn jackknife(values: &[f64]) -> McEstimate {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
    let sd = (ss / (n - 1.0)).sqrt();
    let mut loo_sd = Vec::with_capacity(values.len());
    for v in values {
        let d = v - mean;
        let ss_i = (ss - n / (n - 1.0) * d * d).max(0.0);
        loo_sd.push((ss_i / (n - 2.0)).sqrt());
    }
    let bar = loo_sd.iter().sum::<f64>() / n;
    let sd_se = ((n - 1.0) / n * loo_sd.iter().map(|s| (s - bar).powi(2)).sum::<f64>()).sqrt();
    McEstimate {
        mean,
        sd,
        mean_se: sd / n.sqrt(),
        sd_se,
    }
}

/// Mean and sd of `u_n^2` under the Poisson prior predictive by summing the
/// negative binomial law of the total count.
pub fn negbin_moments(alpha: f64, beta: f64, n: u64) -> (f64, f64) {
    let n = n as f64;
    let q = n / (n + beta);
    let mut p = (beta / (n + beta)).powf(alpha);
    let (mut m1, mut m2, mut mass) = (0.0, 0.0, 0.0);
    let count_mean = alpha * q / (1.0 - q);
    let last = count_mean + 60.0 * (count_mean / (1.0 - q)).sqrt() + 60.0;
    let mut s = 0.0;
    while s <= last {
        let u = (alpha + s) / ((n + beta) * (n + beta));
        m1 += p * u;
        m2 += p * u * u;
        mass += p;
        p *= (alpha + s) / (s + 1.0) * q;
        s += 1.0;
    }
    assert!((mass - 1.0).abs() < 1e-10);
    (m1, (m2 - m1 * m1).max(0.0).sqrt())
}

/// Mean and sd of `u_n^2` for the Normal model through the representation
/// `2 beta_n = 2 beta + s2 W` with `W ~ chi2_n` independent of
/// `s2 ~ InvGamma(alpha, beta)`.
pub fn nig_mixture_moments(lambda: f64, alpha: f64, beta: f64, n: u64) -> (f64, f64) {
    let nf = n as f64;
    let e1 = beta / (alpha - 1.0);
    let e2 = beta * beta / ((alpha - 1.0) * (alpha - 2.0));
    let num_mean = 2.0 * beta + e1 * nf;
    let num_var = e2 * (nf * nf + 2.0 * nf) - e1 * e1 * nf * nf;
    let denom = (nf + 1.0 / lambda) * (nf + 2.0 * alpha - 2.0);
    (num_mean / denom, num_var.max(0.0).sqrt() / denom)
}

/// Mean and sd of `u_n^2` for the Beta-Bernoulli model by enumerating all
/// `2^n` sequences with their sequential predictive probabilities.
pub fn enumerate_bernoulli(a: f64, b: f64, n: u32) -> (f64, f64) {
    let (mut m1, mut m2) = (0.0, 0.0);
    for mask in 0u32..(1 << n) {
        let (mut aa, mut bb, mut prob) = (a, b, 1.0);
        for i in 0..n {
            if mask >> i & 1 == 1 {
                prob *= aa / (aa + bb);
                aa += 1.0;
            } else {
                prob *= bb / (aa + bb);
                bb += 1.0;
            }
        }
        let u = aa * bb / ((aa + bb) * (aa + bb) * (aa + bb + 1.0));
        m1 += prob * u;
        m2 += prob * u * u;
    }
    (m1, (m2 - m1 * m1).max(0.0).sqrt())
}

/// Composite Simpson rule on `[lo, hi]` with `intervals` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, lo: f64, hi: f64, intervals: usize) -> f64 {
    let h = (hi - lo) / intervals as f64;
    let mut total = f(lo) + f(hi);
    for i in 1..intervals {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        total += w * f(lo + h * i as f64);
    }
    total * h / 3.0
}

/// `sd(p(1-p)) / E[p(1-p)]` for `p ~ Beta(a, b)` by quadrature, with
/// `a, b >= 1` so the density is bounded.
pub fn beta_gamma_quadrature(a: f64, b: f64) -> f64 {
    // p = (1 - cos(pi s)) / 2 flattens the endpoint power singularities
    let integrate = |g: &dyn Fn(f64) -> f64| {
        simpson(
            |s| {
                let p = (1.0 - (std::f64::consts::PI * s).cos()) / 2.0;
                let jac = std::f64::consts::FRAC_PI_2 * (std::f64::consts::PI * s).sin();
                p.powf(a - 1.0) * (1.0 - p).powf(b - 1.0) * g(p) * jac
            },
            0.0,
            1.0,
            20_000,
        )
    };
    let z = integrate(&|_| 1.0);
    let m1 = integrate(&|p| p * (1.0 - p)) / z;
    let m2 = integrate(&|p| (p * (1.0 - p)).powi(2)) / z;
    (m2 - m1 * m1).sqrt() / m1
}

/// Posterior variance of `theta` for the Poisson model by integrating the
/// unnormalized posterior `theta^(alpha+s-1) exp(-(beta+n) theta)`.
pub fn poisson_u2_quadrature(alpha: f64, beta: f64, n: u64, sum: f64) -> f64 {
    let shape = alpha + sum;
    let rate = beta + n as f64;
    let mode = ((shape - 1.0) / rate).max(0.0);
    let hi = mode + 40.0 * shape.sqrt() / rate + 40.0 / rate;
    let logk = (shape - 1.0) * mode.max(1e-300).ln() - rate * mode;
    let dens = |t: f64| {
        if t <= 0.0 {
            0.0
        } else {
            ((shape - 1.0) * t.ln() - rate * t - logk).exp()
        }
    };
    // t = v^2 removes the sqrt-type singularity at zero when shape < 2
    let integrate = |power: i32| simpson(|v| dens(v * v) * (v * v).powi(power) * 2.0 * v, 0.0, hi.sqrt(), 200_000);
    let z = integrate(0);
    let m1 = integrate(1) / z;
    let m2 = integrate(2) / z;
    m2 - m1 * m1
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}
