//! Mean and standard deviation of the posterior variance under the prior
//! predictive distribution.
//!
//! Poisson and Normal use closed forms. Bernoulli sums exactly over the
//! Beta-Binomial law of the number of successes. [`mc_moment_oracle`] is an
//! independent simulation check for all three.

use rayon::prelude::*;
use serde::Serialize;

use crate::models::{BetaBernoulli, ConjugateModel, NormalNig, PoissonGamma};
use crate::rng::Substreams;
use crate::{Error, Result, Scalar};

/// Prior-predictive mean and standard deviation of `u_n^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentPair<S> {
    pub n: u64,
    pub mean_u2: S,
    pub sd_u2: S,
}

impl<S: Scalar> MomentPair<S> {
    /// `mean + k * sd`, the left-hand side of the variance criterion.
    pub fn lhs(&self, k: S) -> S {
        self.mean_u2 + k * self.sd_u2
    }

    /// Coefficient of variation `sd / mean`.
    pub fn coefficient_of_variation(&self) -> S {
        self.sd_u2 / self.mean_u2
    }
}

pub fn moment_pair<S: Scalar>(model: &ConjugateModel<S>, n: u64) -> MomentPair<S> {
    let (mean_u2, sd_u2) = match model {
        ConjugateModel::Poisson(m) => (m.expected_posterior_variance(n), m.sd_posterior_variance(n)),
        ConjugateModel::Normal(m) => (m.expected_posterior_variance(n), m.sd_posterior_variance(n)),
        ConjugateModel::Bernoulli(m) => m.beta_binomial_moments(n),
    };
    MomentPair { n, mean_u2, sd_u2 }
}

pub fn expected_posterior_variance<S: Scalar>(model: &ConjugateModel<S>, n: u64) -> S {
    match model {
        ConjugateModel::Poisson(m) => m.expected_posterior_variance(n),
        ConjugateModel::Normal(m) => m.expected_posterior_variance(n),
        ConjugateModel::Bernoulli(m) => m.beta_binomial_moments(n).0,
    }
}

pub fn sd_posterior_variance<S: Scalar>(model: &ConjugateModel<S>, n: u64) -> S {
    match model {
        ConjugateModel::Poisson(m) => m.sd_posterior_variance(n),
        ConjugateModel::Normal(m) => m.sd_posterior_variance(n),
        ConjugateModel::Bernoulli(m) => m.beta_binomial_moments(n).1,
    }
}

/// `mean_u2 + k * sd_u2` at sample size `n`.
pub fn vpvc_lhs<S: Scalar>(model: &ConjugateModel<S>, n: u64, k: S) -> S {
    if k == S::zero() {
        expected_posterior_variance(model, n)
    } else {
        moment_pair(model, n).lhs(k)
    }
}

impl<S: Scalar> PoissonGamma<S> {
    /// `(alpha / beta) / (n + beta)`
    pub fn expected_posterior_variance(&self, n: u64) -> S {
        self.prior_mean() / (S::of_count(n) + self.beta())
    }

    /// `(sqrt(alpha) / beta) * sqrt(n / (n + beta)) / (n + beta)`
    pub fn sd_posterior_variance(&self, n: u64) -> S {
        let n = S::of_count(n);
        let scale = n + self.beta();
        self.prior_sd() * (n / scale).sqrt() / scale
    }
}

impl<S: Scalar> NormalNig<S> {
    /// `beta / (n_lambda (alpha - 1))`
    pub fn expected_posterior_variance(&self, n: u64) -> S {
        self.mean_s2() / self.n_lambda(n)
    }

    /// `beta / (n_lambda (alpha - 1) sqrt(alpha - 2)) * sqrt(n / (n + 2 alpha - 2))`
    pub fn sd_posterior_variance(&self, n: u64) -> S {
        let two = S::of(2.0);
        let nf = S::of_count(n);
        let shape = (nf / (nf + two * self.alpha() - two)).sqrt();
        self.expected_posterior_variance(n) / (self.alpha() - two).sqrt() * shape
    }
}

impl<S: Scalar> BetaBernoulli<S> {
    /// Exact mean and sd of the posterior variance, summing over the
    /// Beta-Binomial distribution of the success count.
    ///
    /// Weights are built by the ratio recurrence in log space and
    /// renormalized, so no Beta function evaluation is needed and nothing
    /// underflows for large `n`.
    pub fn beta_binomial_moments(&self, n: u64) -> (S, S) {
        let weights = self.beta_binomial_pmf(n);
        let u2 = |s: usize| self.posterior_variance(n, S::of_count(s as u64));
        let mean: S = weights.iter().enumerate().map(|(s, &w)| w * u2(s)).sum();
        let var: S = weights
            .iter()
            .enumerate()
            .map(|(s, &w)| {
                let d = u2(s) - mean;
                w * d * d
            })
            .sum();
        (mean, var.max(S::zero()).sqrt())
    }

    /// Prior-predictive probabilities of `0..=n` successes.
    pub fn beta_binomial_pmf(&self, n: u64) -> Vec<S> {
        let (a, b) = (self.a(), self.b());
        let nf = S::of_count(n);
        let mut log_w = Vec::with_capacity(n as usize + 1);
        let mut current = S::zero();
        log_w.push(current);
        for s in 0..n {
            let sf = S::of_count(s);
            let ratio = (nf - sf) / (sf + S::one()) * ((a + sf) / (b + nf - sf - S::one()));
            current += ratio.ln();
            log_w.push(current);
        }
        let peak = log_w.iter().copied().fold(S::neg_infinity(), S::max);
        let mut weights: Vec<S> = log_w.into_iter().map(|l| (l - peak).exp()).collect();
        let total: S = weights.iter().copied().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        weights
    }
}

/// Simulated moments together with their standard errors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McMoments<S> {
    pub moments: MomentPair<S>,
    pub mean_se: S,
    /// Jackknife standard error of the sample sd.
    pub sd_se: S,
    pub replicates: usize,
}

/// Sample mean and sd of a batch of draws, with jackknife standard errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JackknifeStats<S> {
    pub mean: S,
    pub sd: S,
    pub mean_se: S,
    pub sd_se: S,
}

pub const MIN_ORACLE_REPLICATES: usize = 100;

/// Draws `x_n` from the prior predictive `replicates` times and summarizes
/// the resulting posterior variances.
pub fn mc_moment_oracle<S: Scalar>(
    model: &ConjugateModel<S>,
    n: u64,
    replicates: usize,
    streams: Substreams,
) -> Result<McMoments<S>> {
    if replicates < MIN_ORACLE_REPLICATES {
        return Err(Error::TooFewReplicates {
            got: replicates,
            need: MIN_ORACLE_REPLICATES,
        });
    }
    if n == 0 {
        return Err(Error::ZeroSampleSize);
    }
    let draws: Vec<S> = (0..replicates as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = streams.stream(r);
            let data = model
                .prior_predictive_sample(n as usize, &mut rng)
                .expect("n >= 1 checked above");
            model.posterior_variance_from_summary(&data.summary())
        })
        .collect();
    let stats = jackknife_stats(&draws);
    Ok(McMoments {
        moments: MomentPair {
            n,
            mean_u2: stats.mean,
            sd_u2: stats.sd,
        },
        mean_se: stats.mean_se,
        sd_se: stats.sd_se,
        replicates,
    })
}

/// Leave-one-out jackknife for the mean and the standard deviation.
///
/// Needs at least three values.
pub fn jackknife_stats<S: Scalar>(values: &[S]) -> JackknifeStats<S> {
    let count = values.len();
    assert!(count >= 3, "jackknife needs at least 3 values");
    let nf = S::of_count(count as u64);
    let one = S::one();
    let mean = values.iter().copied().sum::<S>() / nf;
    let ss: S = values.iter().map(|&x| (x - mean) * (x - mean)).sum();
    let sd = (ss / (nf - one)).sqrt();

    // SS without observation i: SS - n/(n-1) * d_i^2
    let loo: Vec<S> = values
        .iter()
        .map(|&x| {
            let d = x - mean;
            let ss_i = (ss - nf / (nf - one) * d * d).max(S::zero());
            (ss_i / (nf - S::of(2.0))).sqrt()
        })
        .collect();
    let loo_mean = loo.iter().copied().sum::<S>() / nf;
    let spread: S = loo.iter().map(|&v| (v - loo_mean) * (v - loo_mean)).sum();
    JackknifeStats {
        mean,
        sd,
        mean_se: sd / nf.sqrt(),
        sd_se: ((nf - one) / nf * spread).sqrt(),
    }
}
