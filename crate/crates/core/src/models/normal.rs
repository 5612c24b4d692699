use rand::Rng;
use rand_distr::{Distribution, Gamma, Normal};
use serde::Serialize;

use super::{require_finite, require_positive, Summary, TrueParameter};
use crate::{Error, Result, Scalar};

/// Normal data with unknown mean and variance under the normal-inverse-gamma
/// prior `N(mu | mu0, lambda * sigma2) * IG(sigma2 | alpha, beta)`.
///
/// The mean `mu` is the parameter of interest and `sigma2` is a nuisance
/// parameter. `alpha > 2` is required so the spread of the posterior
/// variance under the prior predictive exists.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalNig<S> {
    mu0: S,
    lambda: S,
    alpha: S,
    beta: S,
}

impl<S: Scalar> NormalNig<S> {
    pub fn new(mu0: S, lambda: S, alpha: S, beta: S) -> Result<Self> {
        require_finite("mu0", mu0)?;
        require_positive("lambda", lambda)?;
        require_positive("beta", beta)?;
        if !(alpha.is_finite() && alpha > S::of(2.0)) {
            return Err(Error::InvalidHyperparameter {
                name: "alpha",
                value: alpha.f64(),
                constraint: "finite and > 2",
            });
        }
        Ok(Self {
            mu0,
            lambda,
            alpha,
            beta,
        })
    }

    /// Prior from the marginal moments of `mu` and `sigma2`.
    ///
    /// The inverse-gamma shape follows from the coefficient of variation of
    /// `sigma2`; `lambda` is then fixed by `Var(mu) = lambda * E[sigma2]`.
    pub fn from_marginal(mean_mu: S, sd_mu: S, mean_s2: S, sd_s2: S) -> Result<Self> {
        if !mean_mu.is_finite() {
            return Err(Error::Infeasible(format!("prior mean of mu must be finite (got {mean_mu})")));
        }
        for (what, v) in [("sd of mu", sd_mu), ("mean of sigma2", mean_s2), ("sd of sigma2", sd_s2)] {
            if !(v.is_finite() && v > S::zero()) {
                return Err(Error::Infeasible(format!("prior {what} must be > 0 (got {v})")));
            }
        }
        let cv = mean_s2 / sd_s2;
        let alpha = S::of(2.0) + cv * cv;
        if !(alpha > S::of(2.0)) {
            return Err(Error::Infeasible(format!(
                "implied inverse-gamma shape {alpha} must exceed 2 (mean/sd of sigma2 too small)"
            )));
        }
        let beta = mean_s2 * (alpha - S::one());
        let lambda = sd_mu * sd_mu * (alpha - S::one()) / beta;
        Self::new(mean_mu, lambda, alpha, beta)
    }

    pub fn mu0(&self) -> S {
        self.mu0
    }

    pub fn lambda(&self) -> S {
        self.lambda
    }

    pub fn alpha(&self) -> S {
        self.alpha
    }

    pub fn beta(&self) -> S {
        self.beta
    }

    /// Prior mean of `sigma2`, `beta / (alpha - 1)`.
    pub fn mean_s2(&self) -> S {
        self.beta / (self.alpha - S::one())
    }

    pub fn sd_s2(&self) -> S {
        self.mean_s2() / (self.alpha - S::of(2.0)).sqrt()
    }

    /// Marginal prior sd of `mu`: `sqrt(lambda * E[sigma2])`.
    pub fn sd_mu(&self) -> S {
        (self.lambda * self.mean_s2()).sqrt()
    }

    /// `n + 1 / lambda`
    pub fn n_lambda(&self, n: u64) -> S {
        S::of_count(n) + self.lambda.recip()
    }

    /// Variance of the marginal posterior of `mu`.
    ///
    /// With no data this is the prior marginal variance `lambda beta / (alpha - 1)`.
    pub fn posterior_variance(&self, summary: &Summary<S>) -> S {
        let two = S::of(2.0);
        let n = S::of_count(summary.n);
        let n_lambda = self.n_lambda(summary.n);
        let shift = if summary.n == 0 {
            S::zero()
        } else {
            let d = summary.mean - self.mu0;
            n / (self.lambda * n_lambda) * d * d
        };
        (two * self.beta + summary.centered_ss + shift) / (n_lambda * (n + two * self.alpha - two))
    }

    pub(super) fn sample_prior<R: Rng + ?Sized>(&self, rng: &mut R) -> TrueParameter<S> {
        let gamma = Gamma::new(self.alpha.f64(), 1.0).expect("validated hyperparameters");
        let sigma2 = (self.beta.f64() / gamma.sample(rng)).min(f64::MAX);
        let mu = Normal::new(self.mu0.f64(), (self.lambda.f64() * sigma2).sqrt())
            .expect("finite prior scale")
            .sample(rng);
        TrueParameter::Normal {
            mu: S::of(mu),
            sigma2: S::of(sigma2).max(S::min_positive_value()),
        }
    }
}
