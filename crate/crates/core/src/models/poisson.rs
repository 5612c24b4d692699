use rand::Rng;
use rand_distr::{Distribution, Gamma};
use serde::Serialize;

use super::{require_positive, TrueParameter};
use crate::{Error, Result, Scalar};

/// Poisson counts with a `Gamma(alpha, beta)` prior (shape, rate) on the mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoissonGamma<S> {
    alpha: S,
    beta: S,
}

impl<S: Scalar> PoissonGamma<S> {
    pub fn new(alpha: S, beta: S) -> Result<Self> {
        require_positive("alpha", alpha)?;
        require_positive("beta", beta)?;
        Ok(Self { alpha, beta })
    }

    /// Prior with the given mean and standard deviation of the Poisson rate.
    pub fn from_marginal(mean: S, sd: S) -> Result<Self> {
        if !(mean.is_finite() && mean > S::zero()) {
            return Err(Error::Infeasible(format!("prior mean must be > 0 (got {mean})")));
        }
        if !(sd.is_finite() && sd > S::zero()) {
            return Err(Error::Infeasible(format!("prior sd must be > 0 (got {sd})")));
        }
        let ratio = mean / sd;
        Self::new(ratio * ratio, mean / (sd * sd))
    }

    pub fn alpha(&self) -> S {
        self.alpha
    }

    pub fn beta(&self) -> S {
        self.beta
    }

    pub fn prior_mean(&self) -> S {
        self.alpha / self.beta
    }

    pub fn prior_sd(&self) -> S {
        self.alpha.sqrt() / self.beta
    }

    /// `(alpha + sum) / (n + beta)^2`
    pub fn posterior_variance(&self, n: u64, sum: S) -> S {
        let scale = S::of_count(n) + self.beta;
        (self.alpha + sum) / scale / scale
    }

    pub(super) fn sample_prior<R: Rng + ?Sized>(&self, rng: &mut R) -> TrueParameter<S> {
        let gamma = Gamma::new(self.alpha.f64(), 1.0 / self.beta.f64()).expect("validated hyperparameters");
        // a draw that underflows to zero is nudged to the smallest positive value
        let theta = gamma.sample(rng).max(f64::MIN_POSITIVE);
        TrueParameter::Poisson {
            theta: S::of(theta).max(S::min_positive_value()),
        }
    }
}
