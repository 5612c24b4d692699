use rand::Rng;
use rand_distr::{Beta, Distribution};
use serde::Serialize;

use super::{require_positive, TrueParameter};
use crate::{Error, Result, Scalar};

/// Bernoulli trials with a `Beta(a, b)` prior on the success probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BetaBernoulli<S> {
    a: S,
    b: S,
}

impl<S: Scalar> BetaBernoulli<S> {
    pub fn new(a: S, b: S) -> Result<Self> {
        require_positive("a", a)?;
        require_positive("b", b)?;
        Ok(Self { a, b })
    }

    pub fn from_marginal(mean: S, sd: S) -> Result<Self> {
        if !(mean > S::zero() && mean < S::one()) {
            return Err(Error::Infeasible(format!("prior mean must lie in (0, 1) (got {mean})")));
        }
        if !(sd.is_finite() && sd > S::zero()) {
            return Err(Error::Infeasible(format!("prior sd must be > 0 (got {sd})")));
        }
        let max_var = mean * (S::one() - mean);
        if !(sd * sd < max_var) {
            return Err(Error::Infeasible(format!(
                "prior sd {sd} must be below sqrt(mean * (1 - mean)) = {}",
                max_var.sqrt()
            )));
        }
        let concentration = max_var / (sd * sd) - S::one();
        Self::new(mean * concentration, (S::one() - mean) * concentration)
    }

    pub fn a(&self) -> S {
        self.a
    }

    pub fn b(&self) -> S {
        self.b
    }

    pub fn prior_mean(&self) -> S {
        self.a / (self.a + self.b)
    }

    pub fn prior_sd(&self) -> S {
        beta_variance(self.a, self.b).sqrt()
    }

    /// Variance of `Beta(a + successes, b + n - successes)`.
    pub fn posterior_variance(&self, n: u64, successes: S) -> S {
        beta_variance(self.a + successes, self.b + S::of_count(n) - successes)
    }

    /// Raw prior moment `E[p^m] = prod_{i<m} (a + i) / (a + b + i)`.
    pub fn raw_moment(&self, order: u32) -> S {
        (0..order)
            .map(|i| {
                let i = S::of_count(u64::from(i));
                (self.a + i) / (self.a + self.b + i)
            })
            .fold(S::one(), |acc, f| acc * f)
    }

    pub(super) fn sample_prior<R: Rng + ?Sized>(&self, rng: &mut R) -> TrueParameter<S> {
        let beta = Beta::new(self.a.f64(), self.b.f64()).expect("validated hyperparameters");
        TrueParameter::Bernoulli {
            p: S::of(beta.sample(rng)),
        }
    }
}

pub(crate) fn beta_variance<S: Scalar>(a: S, b: S) -> S {
    let total = a + b;
    a / total * (b / total) / (total + S::one())
}
