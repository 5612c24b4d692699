//! Conjugate families: priors, posterior variance of the parameter of
//! interest, prior-predictive and sampling draws, and inverse Fisher
//! information.

mod bernoulli;
mod data;
mod normal;
mod poisson;
mod truth;

use std::fmt;

use rand::Rng;
use serde::Serialize;

pub use bernoulli::BetaBernoulli;
pub use data::{DataSample, Summary};
pub use normal::NormalNig;
pub use poisson::PoissonGamma;
pub use truth::TrueParameter;

use crate::{Error, Result, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Poisson,
    Normal,
    Bernoulli,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Poisson => "poisson",
            Family::Normal => "normal",
            Family::Bernoulli => "bernoulli",
        })
    }
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "poisson" | "poisson-gamma" | "count" => Ok(Family::Poisson),
            "normal" | "normal-nig" | "continuous" => Ok(Family::Normal),
            "bernoulli" | "beta-bernoulli" | "binary" => Ok(Family::Bernoulli),
            other => Err(format!("unknown family `{other}` (expected poisson, normal or bernoulli)")),
        }
    }
}

/// A conjugate model with validated native hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum ConjugateModel<S> {
    Poisson(PoissonGamma<S>),
    Normal(NormalNig<S>),
    Bernoulli(BetaBernoulli<S>),
}

impl<S: Scalar> From<PoissonGamma<S>> for ConjugateModel<S> {
    fn from(m: PoissonGamma<S>) -> Self {
        ConjugateModel::Poisson(m)
    }
}

impl<S: Scalar> From<NormalNig<S>> for ConjugateModel<S> {
    fn from(m: NormalNig<S>) -> Self {
        ConjugateModel::Normal(m)
    }
}

impl<S: Scalar> From<BetaBernoulli<S>> for ConjugateModel<S> {
    fn from(m: BetaBernoulli<S>) -> Self {
        ConjugateModel::Bernoulli(m)
    }
}

impl<S: Scalar> ConjugateModel<S> {
    pub fn family(&self) -> Family {
        match self {
            ConjugateModel::Poisson(_) => Family::Poisson,
            ConjugateModel::Normal(_) => Family::Normal,
            ConjugateModel::Bernoulli(_) => Family::Bernoulli,
        }
    }

    /// Builds a model from marginal prior moments, the parameterization
    /// used on grid axes.
    pub fn from_marginal(moments: MarginalMoments<S>) -> Result<Self> {
        Ok(match moments {
            MarginalMoments::Poisson { mean, sd } => PoissonGamma::from_marginal(mean, sd)?.into(),
            MarginalMoments::Normal {
                mean_mu,
                sd_mu,
                mean_s2,
                sd_s2,
            } => NormalNig::from_marginal(mean_mu, sd_mu, mean_s2, sd_s2)?.into(),
            MarginalMoments::Bernoulli { mean, sd } => BetaBernoulli::from_marginal(mean, sd)?.into(),
        })
    }

    pub fn marginal_moments(&self) -> MarginalMoments<S> {
        match self {
            ConjugateModel::Poisson(m) => MarginalMoments::Poisson {
                mean: m.prior_mean(),
                sd: m.prior_sd(),
            },
            ConjugateModel::Normal(m) => MarginalMoments::Normal {
                mean_mu: m.mu0(),
                sd_mu: m.sd_mu(),
                mean_s2: m.mean_s2(),
                sd_s2: m.sd_s2(),
            },
            ConjugateModel::Bernoulli(m) => MarginalMoments::Bernoulli {
                mean: m.prior_mean(),
                sd: m.prior_sd(),
            },
        }
    }

    /// Posterior variance of the parameter of interest given `data`.
    pub fn posterior_variance(&self, data: &DataSample<S>) -> Result<S> {
        data.validate(self.family())?;
        Ok(self.posterior_variance_from_summary(&data.summary()))
    }

    /// Same as [`posterior_variance`](Self::posterior_variance) on already
    /// validated sufficient statistics.
    pub fn posterior_variance_from_summary(&self, summary: &Summary<S>) -> S {
        match self {
            ConjugateModel::Poisson(m) => m.posterior_variance(summary.n, summary.sum),
            ConjugateModel::Normal(m) => m.posterior_variance(summary),
            ConjugateModel::Bernoulli(m) => m.posterior_variance(summary.n, summary.sum),
        }
    }

    /// Draws `theta ~ prior` and then `n` i.i.d. observations given `theta`.
    pub fn prior_predictive_sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<DataSample<S>> {
        if n == 0 {
            return Err(Error::ZeroSampleSize);
        }
        let theta = self.sample_prior(rng);
        Ok(theta.sample_unchecked(n, rng))
    }

    /// One draw of the full parameter from the prior.
    pub fn sample_prior<R: Rng + ?Sized>(&self, rng: &mut R) -> TrueParameter<S> {
        match self {
            ConjugateModel::Poisson(m) => m.sample_prior(rng),
            ConjugateModel::Normal(m) => m.sample_prior(rng),
            ConjugateModel::Bernoulli(m) => m.sample_prior(rng),
        }
    }
}

/// Prior hyperparameters expressed through marginal prior moments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum MarginalMoments<S> {
    Poisson { mean: S, sd: S },
    Normal { mean_mu: S, sd_mu: S, mean_s2: S, sd_s2: S },
    Bernoulli { mean: S, sd: S },
}

impl<S: Scalar> MarginalMoments<S> {
    pub fn family(&self) -> Family {
        match self {
            MarginalMoments::Poisson { .. } => Family::Poisson,
            MarginalMoments::Normal { .. } => Family::Normal,
            MarginalMoments::Bernoulli { .. } => Family::Bernoulli,
        }
    }

    /// Names accepted by [`with_axis`](Self::with_axis) for this family.
    pub fn axis_names(&self) -> &'static [&'static str] {
        match self {
            MarginalMoments::Poisson { .. } | MarginalMoments::Bernoulli { .. } => &["mean", "sd"],
            MarginalMoments::Normal { .. } => &["mean_mu", "sd_mu", "mean_s2", "sd_s2"],
        }
    }

    /// Returns a copy with the named marginal moment replaced.
    pub fn with_axis(mut self, axis: &str, value: S) -> Result<Self> {
        let slot = match (&mut self, axis.replace('-', "_").as_str()) {
            (MarginalMoments::Poisson { mean, .. }, "mean") => mean,
            (MarginalMoments::Poisson { sd, .. }, "sd") => sd,
            (MarginalMoments::Bernoulli { mean, .. }, "mean") => mean,
            (MarginalMoments::Bernoulli { sd, .. }, "sd") => sd,
            (MarginalMoments::Normal { mean_mu, .. }, "mean_mu" | "mu0") => mean_mu,
            (MarginalMoments::Normal { sd_mu, .. }, "sd_mu") => sd_mu,
            (MarginalMoments::Normal { mean_s2, .. }, "mean_s2") => mean_s2,
            (MarginalMoments::Normal { sd_s2, .. }, "sd_s2") => sd_s2,
            _ => {
                return Err(Error::InvalidCriterion(format!(
                    "unknown grid axis `{axis}` for the {} family (expected one of {:?})",
                    self.family(),
                    self.axis_names()
                )))
            }
        };
        *slot = value;
        Ok(self)
    }
}

pub(crate) fn require_positive<S: Scalar>(name: &'static str, value: S) -> Result<()> {
    if value.is_finite() && value > S::zero() {
        Ok(())
    } else {
        Err(Error::InvalidHyperparameter {
            name,
            value: value.f64(),
            constraint: "finite and > 0",
        })
    }
}

pub(crate) fn require_finite<S: Scalar>(name: &'static str, value: S) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidHyperparameter {
            name,
            value: value.f64(),
            constraint: "finite",
        })
    }
}
