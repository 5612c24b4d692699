use rand::Rng;
use rand_distr::{Binomial, Distribution, Gamma, Normal, Poisson};
use serde::Serialize;

use super::{DataSample, Family, Summary};
use crate::{Error, Result, Scalar};

/// A fixed parameter value treated as the data-generating truth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum TrueParameter<S> {
    Poisson { theta: S },
    Normal { mu: S, sigma2: S },
    Bernoulli { p: S },
}

impl<S: Scalar> TrueParameter<S> {
    pub fn poisson(theta: S) -> Result<Self> {
        let t = TrueParameter::Poisson { theta };
        t.validate()?;
        Ok(t)
    }

    pub fn normal(mu: S, sigma2: S) -> Result<Self> {
        let t = TrueParameter::Normal { mu, sigma2 };
        t.validate()?;
        Ok(t)
    }

    pub fn bernoulli(p: S) -> Result<Self> {
        let t = TrueParameter::Bernoulli { p };
        t.validate()?;
        Ok(t)
    }

    pub fn family(&self) -> Family {
        match self {
            TrueParameter::Poisson { .. } => Family::Poisson,
            TrueParameter::Normal { .. } => Family::Normal,
            TrueParameter::Bernoulli { .. } => Family::Bernoulli,
        }
    }

    /// Open-interval domain check, no slack at the boundary.
    pub fn validate(&self) -> Result<()> {
        let bad = |what, value: S| Error::OutOfDomain {
            what,
            value: value.f64(),
        };
        match *self {
            TrueParameter::Poisson { theta } => {
                if !(theta.is_finite() && theta > S::zero()) {
                    return Err(bad("theta", theta));
                }
            }
            TrueParameter::Normal { mu, sigma2 } => {
                if !mu.is_finite() {
                    return Err(bad("mu", mu));
                }
                if !(sigma2.is_finite() && sigma2 > S::zero()) {
                    return Err(bad("sigma2", sigma2));
                }
            }
            TrueParameter::Bernoulli { p } => {
                if !(p > S::zero() && p < S::one()) {
                    return Err(bad("p", p));
                }
            }
        }
        Ok(())
    }

    /// Value of the parameter of interest.
    pub fn interest(&self) -> S {
        match *self {
            TrueParameter::Poisson { theta } => theta,
            TrueParameter::Normal { mu, .. } => mu,
            TrueParameter::Bernoulli { p } => p,
        }
    }

    /// Inverse of the Fisher information entry of the parameter of interest
    /// for a single observation: `theta`, `sigma2` or `p (1 - p)`.
    pub fn fisher_inverse(&self) -> Result<S> {
        self.validate()?;
        Ok(match *self {
            TrueParameter::Poisson { theta } => theta,
            TrueParameter::Normal { sigma2, .. } => sigma2,
            TrueParameter::Bernoulli { p } => p * (S::one() - p),
        })
    }

    /// `n` i.i.d. draws from the sampling distribution at this parameter.
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<DataSample<S>> {
        self.validate()?;
        if n == 0 {
            return Err(Error::ZeroSampleSize);
        }
        Ok(self.sample_unchecked(n, rng))
    }

    /// Sufficient statistics of `n` i.i.d. draws, sampled from their exact
    /// joint law in O(1): the Poisson total, the binomial count, or the
    /// independent normal mean and scaled chi-square sum of squares.
    /// Poisson summaries carry `centered_ss = 0`; the posterior never reads it.
    pub fn sample_summary<R: Rng + ?Sized>(&self, n: u64, rng: &mut R) -> Result<Summary<S>> {
        self.validate()?;
        if n == 0 {
            return Err(Error::ZeroSampleSize);
        }
        Ok(self.sample_summary_unchecked(n, rng))
    }

    pub(crate) fn sample_summary_unchecked<R: Rng + ?Sized>(&self, n: u64, rng: &mut R) -> Summary<S> {
        let nf = n as f64;
        let (sum, mean, centered_ss) = match *self {
            TrueParameter::Poisson { theta } => {
                let rate = theta.f64() * nf;
                // a prior draw can underflow to zero
                let total: f64 = if rate > 0.0 {
                    Poisson::new(rate).expect("finite rate").sample(rng)
                } else {
                    0.0
                };
                (total, total / nf, 0.0)
            }
            TrueParameter::Bernoulli { p } => {
                let s = Binomial::new(n, p.f64()).expect("p inside (0, 1)").sample(rng) as f64;
                (s, s / nf, s * (nf - s) / nf)
            }
            TrueParameter::Normal { mu, sigma2 } => {
                let s2 = sigma2.f64();
                let mean: f64 = Normal::new(mu.f64(), (s2 / nf).sqrt()).expect("finite scale").sample(rng);
                let ss = if n > 1 {
                    s2 * Gamma::new((nf - 1.0) / 2.0, 2.0).expect("positive shape").sample(rng)
                } else {
                    0.0
                };
                (mean * nf, mean, ss)
            }
        };
        Summary {
            n,
            sum: S::of(sum),
            mean: S::of(mean),
            centered_ss: S::of(centered_ss),
        }
    }

    pub(crate) fn sample_unchecked<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> DataSample<S> {
        let mut values = Vec::with_capacity(n);
        match *self {
            TrueParameter::Poisson { theta } => {
                match Poisson::new(theta.f64()) {
                    Ok(dist) => values.extend((0..n).map(|_| S::of(dist.sample(rng)))),
                    Err(_) => values.resize(n, S::zero()),
                }
            }
            TrueParameter::Normal { mu, sigma2 } => {
                let dist = Normal::new(mu.f64(), sigma2.f64().sqrt()).expect("finite scale");
                values.extend((0..n).map(|_| S::of(dist.sample(rng))));
            }
            TrueParameter::Bernoulli { p } => {
                let p = p.f64();
                values.extend((0..n).map(|_| if rng.random::<f64>() < p { S::one() } else { S::zero() }));
            }
        }
        DataSample::new(values)
    }
}
