//! Smallest sample size satisfying the average (APVC) or variance-aware
//! (VPVC) posterior variance criterion.
//!
//! The criterion is `mean_u2(n) + k * sd_u2(n) < eps^2` with a strict
//! inequality. Its left-hand side is not monotone in `n` for every prior,
//! so the solver scans upward from `n = 1`.

use serde::Serialize;

use crate::asymptotics::asymptotic_sample_size;
use crate::models::ConjugateModel;
use crate::moments::vpvc_lhs;
use crate::{Error, Result, Scalar};

/// Smallest cap on the scan, regardless of the asymptotic estimate.
pub const MIN_SEARCH_CAP: u64 = 1_000_000;

/// Precision target `epsilon` (on the sd scale) and variance multiplier `k`.
/// `k = 0` is the average posterior variance criterion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriterionSpec<S> {
    epsilon: S,
    k: S,
}

impl<S: Scalar> CriterionSpec<S> {
    pub fn new(epsilon: S, k: S) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > S::zero()) {
            return Err(Error::InvalidCriterion(format!("epsilon must be finite and > 0 (got {epsilon})")));
        }
        if !(k.is_finite() && k >= S::zero()) {
            return Err(Error::InvalidCriterion(format!("k must be finite and >= 0 (got {k})")));
        }
        Ok(Self { epsilon, k })
    }

    pub fn apvc(epsilon: S) -> Result<Self> {
        Self::new(epsilon, S::zero())
    }

    pub fn epsilon(&self) -> S {
        self.epsilon
    }

    pub fn k(&self) -> S {
        self.k
    }

    /// `epsilon^2`
    pub fn threshold(&self) -> S {
        self.epsilon * self.epsilon
    }

    pub fn with_epsilon(&self, epsilon: S) -> Result<Self> {
        Self::new(epsilon, self.k)
    }

    pub fn with_k(&self, k: S) -> Result<Self> {
        Self::new(self.epsilon, k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SsdResult<S> {
    pub n: u64,
    pub lhs_at_n: S,
    /// `None` when `n = 1`.
    pub lhs_at_n_minus_1: Option<S>,
    pub evaluations: u64,
}

/// Upper end of the scan: ten times the small-epsilon estimate, and never
/// below [`MIN_SEARCH_CAP`].
pub fn search_cap<S: Scalar>(model: &ConjugateModel<S>, spec: &CriterionSpec<S>) -> u64 {
    let estimate = asymptotic_sample_size(model, spec).n_asymptotic.f64();
    let scaled = (estimate.ceil() * 10.0).min(u64::MAX as f64);
    if scaled.is_finite() {
        (scaled as u64).max(MIN_SEARCH_CAP)
    } else {
        MIN_SEARCH_CAP
    }
}

/// Smallest `n >= 1` with `mean_u2 + k sd_u2 < eps^2` (strict).
///
/// `mean_u2` is non-increasing in `n` and bounds the left-hand side from
/// below, so the search starts at the first `n` where `mean_u2` alone is
/// below the target, found by bisection. From there it scans upward, and
/// switches to bisection once `n` passes [`certified_decreasing_from`].
pub fn vpvc_sample_size<S: Scalar>(model: &ConjugateModel<S>, spec: &CriterionSpec<S>) -> Result<SsdResult<S>> {
    let cap = search_cap(model, spec);
    let threshold = spec.threshold();
    let k = spec.k();
    let mut evaluations = 0u64;
    let mut lhs = |n: u64, k: S| {
        evaluations += 1;
        vpvc_lhs(model, n, k)
    };

    let Some(start) = first_below(1, cap, threshold, |n| lhs(n, S::zero())) else {
        return Err(Error::BudgetExceeded {
            cap,
            lhs_at_cap: vpvc_lhs(model, cap, k).f64(),
        });
    };
    let tail = certified_decreasing_from(model).map_or(u64::MAX, |m| m.max(start));
    let mut found = None;
    let mut n = start;
    while n <= cap && n < tail {
        if lhs(n, k) < threshold {
            found = Some(n);
            break;
        }
        n += 1;
    }
    if found.is_none() && n <= cap {
        found = first_below(n, cap, threshold, |m| lhs(m, k));
    }
    let Some(n) = found else {
        return Err(Error::BudgetExceeded {
            cap,
            lhs_at_cap: vpvc_lhs(model, cap, k).f64(),
        });
    };
    let lhs_at_n = lhs(n, k);
    let lhs_at_n_minus_1 = (n > 1).then(|| lhs(n - 1, k));
    Ok(SsdResult {
        n,
        lhs_at_n,
        lhs_at_n_minus_1,
        evaluations,
    })
}

/// First `n` from which the left-hand side is non-increasing for every
/// `k >= 0`, when known in closed form.
///
/// Poisson: `sd_u2` is proportional to `sqrt(n) / (n + beta)^1.5`, whose
/// derivative has the sign of `beta - 2n`. Normal: the log-derivative of
/// `sqrt(n) / ((n + 1/lambda) sqrt(n + 2 alpha - 2))` is negative once
/// `n >= 1/lambda`. No such bound is used for Bernoulli.
pub fn certified_decreasing_from<S: Scalar>(model: &ConjugateModel<S>) -> Option<u64> {
    let bound = match model {
        ConjugateModel::Poisson(m) => m.beta().f64() / 2.0,
        ConjugateModel::Normal(m) => m.lambda().recip().f64(),
        ConjugateModel::Bernoulli(_) => return None,
    };
    Some((bound.ceil().max(1.0)).min(u64::MAX as f64) as u64)
}

/// Smallest `n` in `[lo, hi]` with `f(n) < threshold`, for `f`
/// non-increasing on that range.
fn first_below<S: Scalar>(lo: u64, hi: u64, threshold: S, mut f: impl FnMut(u64) -> S) -> Option<u64> {
    if f(lo) < threshold {
        return Some(lo);
    }
    // galloping keeps small answers cheap
    let mut below = lo;
    let mut step = 1u64;
    let mut above = loop {
        let probe = below.saturating_add(step).min(hi);
        if f(probe) < threshold {
            break probe;
        }
        if probe == hi {
            return None;
        }
        below = probe;
        step = step.saturating_mul(2);
    };
    while above - below > 1 {
        let mid = below + (above - below) / 2;
        if f(mid) < threshold {
            above = mid;
        } else {
            below = mid;
        }
    }
    Some(above)
}

pub fn apvc_sample_size<S: Scalar>(model: &ConjugateModel<S>, epsilon: S) -> Result<SsdResult<S>> {
    vpvc_sample_size(model, &CriterionSpec::apvc(epsilon)?)
}

/// Direct inversion of the average criterion where the mean posterior
/// variance is a simple rational function of `n` (Poisson, Normal).
///
/// Solves `n > c / eps^2 - d` for the smallest integer `n >= 1`. Rounding
/// can put this one step away from the scan at exact boundaries.
pub fn apvc_closed_form<S: Scalar>(model: &ConjugateModel<S>, epsilon: S) -> Option<u64> {
    let eps2 = epsilon * epsilon;
    let bound = match model {
        ConjugateModel::Poisson(m) => m.prior_mean() / eps2 - m.beta(),
        ConjugateModel::Normal(m) => m.mean_s2() / eps2 - m.lambda().recip(),
        ConjugateModel::Bernoulli(_) => return None,
    };
    let bound = bound.f64();
    if bound < 1.0 {
        Some(1)
    } else {
        Some(bound.floor() as u64 + 1)
    }
}
