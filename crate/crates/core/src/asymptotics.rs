//! Small-epsilon behaviour of the variance criterion.
//!
//! Everything here depends on the prior only through the first two moments
//! of the inverse Fisher information `I^-1` of the parameter of interest.

use serde::Serialize;

use crate::models::{ConjugateModel, TrueParameter};
use crate::ssd::CriterionSpec;
use crate::{Error, Family, Result, Scalar};

/// Prior mean and variance of `I^-1` for a single observation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InverseFisherMoments<S> {
    pub mean: S,
    pub variance: S,
}

impl<S: Scalar> InverseFisherMoments<S> {
    pub fn sd(&self) -> S {
        self.variance.max(S::zero()).sqrt()
    }
}

pub fn inverse_fisher_moments<S: Scalar>(model: &ConjugateModel<S>) -> InverseFisherMoments<S> {
    match model {
        // I^-1 = theta ~ Gamma(alpha, beta)
        ConjugateModel::Poisson(m) => InverseFisherMoments {
            mean: m.prior_mean(),
            variance: m.prior_sd() * m.prior_sd(),
        },
        // I^-1 = sigma2 ~ IG(alpha, beta)
        ConjugateModel::Normal(m) => InverseFisherMoments {
            mean: m.mean_s2(),
            variance: m.sd_s2() * m.sd_s2(),
        },
        // I^-1 = p (1 - p); E[p^i (1-p)^j] = (a)_i (b)_j / (a+b)_{i+j}
        ConjugateModel::Bernoulli(m) => {
            let (a, b) = (m.a(), m.b());
            let t = a + b;
            let one = S::one();
            let two = S::of(2.0);
            let three = S::of(3.0);
            let first = a / t * (b / (t + one));
            let second = first * ((a + one) / (t + two)) * ((b + one) / (t + three));
            InverseFisherMoments {
                mean: first,
                variance: (second - first * first).max(S::zero()),
            }
        }
    }
}

/// Prior coefficient of variation of `I^-1`, the limit of
/// `sd_u2(n) / mean_u2(n)` as `n` grows.
pub fn gamma_coefficient<S: Scalar>(model: &ConjugateModel<S>) -> S {
    let m = inverse_fisher_moments(model);
    m.sd() / m.mean
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticSummary<S> {
    pub gamma: S,
    pub e_pi_inv_fisher: S,
    /// Limit of `n * (mean_u2 + k sd_u2)`: `(1 + k gamma) E[I^-1]`.
    pub s_infinity: S,
    /// `s_infinity / eps^2`
    pub n_asymptotic: S,
}

pub fn asymptotic_sample_size<S: Scalar>(model: &ConjugateModel<S>, spec: &CriterionSpec<S>) -> AsymptoticSummary<S> {
    let moments = inverse_fisher_moments(model);
    let gamma = moments.sd() / moments.mean;
    let s_infinity = (S::one() + spec.k() * gamma) * moments.mean;
    AsymptoticSummary {
        gamma,
        e_pi_inv_fisher: moments.mean,
        s_infinity,
        n_asymptotic: s_infinity / spec.threshold(),
    }
}

/// Phase-transition threshold for `k` at a given true parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdReport<S> {
    pub k_star: S,
    /// `I^-1(truth) / E[I^-1] - 1`
    pub rho: S,
    /// `max(I^-1(truth) - E[I^-1], 0)`
    pub numerator: S,
    /// `sd[I^-1]` under the prior
    pub denominator: S,
}

pub fn k_star<S: Scalar>(model: &ConjugateModel<S>, truth: &TrueParameter<S>) -> Result<ThresholdReport<S>> {
    if model.family() != truth.family() {
        return Err(Error::FamilyMismatch {
            model: model.family(),
            other: truth.family(),
        });
    }
    let at_truth = truth.fisher_inverse()?;
    let moments = inverse_fisher_moments(model);
    let denominator = moments.sd();
    if !(denominator > S::zero()) {
        return Err(Error::DegeneratePrior(
            "prior variance of the inverse Fisher information is zero".into(),
        ));
    }
    let numerator = (at_truth - moments.mean).max(S::zero());
    Ok(ThresholdReport {
        k_star: numerator / denominator,
        rho: at_truth / moments.mean - S::one(),
        numerator,
        denominator,
    })
}

/// Closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval<S> {
    pub lo: S,
    pub hi: S,
}

impl<S: Scalar> Interval<S> {
    pub fn new(lo: S, hi: S) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(Error::InvalidCriterion(format!("invalid interval [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    pub fn around(center: S, half_width: S) -> Result<Self> {
        Self::new(center - half_width, center + half_width)
    }
}

/// Axis-aligned box of parameter values. `nuisance` is the `sigma2` range
/// for the Normal family and absent otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParameterRegion<S> {
    pub interest: Interval<S>,
    pub nuisance: Option<Interval<S>>,
}

/// Prior marginal mean plus or minus `width` prior sds, per coordinate.
/// Intersection with the open domain happens in [`k_star_upper_bound`].
pub fn prior_region<S: Scalar>(model: &ConjugateModel<S>, width: S) -> Result<ParameterRegion<S>> {
    if !(width.is_finite() && width > S::zero()) {
        return Err(Error::InvalidCriterion(format!("region width must be > 0 (got {width})")));
    }
    Ok(match model {
        ConjugateModel::Poisson(m) => ParameterRegion {
            interest: Interval::around(m.prior_mean(), width * m.prior_sd())?,
            nuisance: None,
        },
        ConjugateModel::Normal(m) => ParameterRegion {
            interest: Interval::around(m.mu0(), width * m.sd_mu())?,
            nuisance: Some(Interval::around(m.mean_s2(), width * m.sd_s2())?),
        },
        ConjugateModel::Bernoulli(m) => ParameterRegion {
            interest: Interval::around(m.prior_mean(), width * m.prior_sd())?,
            nuisance: None,
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KStarBound<S> {
    pub value: S,
    /// Point of the region's closure where the supremum is attained.
    pub at: TrueParameter<S>,
}

/// Supremum of [`k_star`] over the region.
///
/// `k_star` increases with `I^-1(theta)`, so the supremum sits where `I^-1`
/// is largest: the upper end of `theta` or `sigma2`, and the `p` closest
/// to 1/2.
pub fn k_star_upper_bound<S: Scalar>(model: &ConjugateModel<S>, region: &ParameterRegion<S>) -> Result<KStarBound<S>> {
    let outside = |what, value: S| Error::OutOfDomain {
        what,
        value: value.f64(),
    };
    let at = match model.family() {
        Family::Poisson => {
            if !(region.interest.hi > S::zero()) {
                return Err(outside("theta upper bound", region.interest.hi));
            }
            TrueParameter::Poisson {
                theta: region.interest.hi,
            }
        }
        Family::Normal => {
            let s2 = region
                .nuisance
                .ok_or_else(|| Error::InvalidCriterion("normal region needs a sigma2 interval".into()))?;
            if !(s2.hi > S::zero()) {
                return Err(outside("sigma2 upper bound", s2.hi));
            }
            let mid = (region.interest.lo + region.interest.hi) / S::of(2.0);
            TrueParameter::Normal { mu: mid, sigma2: s2.hi }
        }
        Family::Bernoulli => {
            let Interval { lo, hi } = region.interest;
            if !(hi > S::zero()) {
                return Err(outside("p upper bound", hi));
            }
            if !(lo < S::one()) {
                return Err(outside("p lower bound", lo));
            }
            let half = S::of(0.5);
            TrueParameter::Bernoulli { p: half.max(lo).min(hi) }
        }
    };
    let value = k_star(model, &at)?.k_star;
    Ok(KStarBound { value, at })
}
