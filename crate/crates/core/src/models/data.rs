use serde::Serialize;

use super::Family;
use crate::{Error, Result, Scalar};

/// An ordered list of observations.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct DataSample<S> {
    values: Vec<S>,
}

/// Sufficient statistics shared by all three families.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Summary<S> {
    pub n: u64,
    pub sum: S,
    pub mean: S,
    /// Sum of squared deviations from the sample mean.
    pub centered_ss: S,
}

impl<S: Scalar> DataSample<S> {
    pub fn new(values: Vec<S>) -> Self {
        Self { values }
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<S> {
        self.values
    }

    /// Checks the family's domain: non-negative integers for counts,
    /// exactly 0 or 1 for binary data, finite reals otherwise.
    pub fn validate(&self, family: Family) -> Result<()> {
        for (index, &x) in self.values.iter().enumerate() {
            let reason = if !x.is_finite() {
                Some("not finite")
            } else {
                match family {
                    Family::Poisson if x < S::zero() => Some("count must be non-negative"),
                    Family::Poisson if x.fract() != S::zero() => Some("count must be an integer"),
                    Family::Bernoulli if x != S::zero() && x != S::one() => Some("binary value must be 0 or 1"),
                    _ => None,
                }
            };
            if let Some(reason) = reason {
                return Err(Error::InvalidData {
                    index,
                    value: x.f64(),
                    reason,
                });
            }
        }
        Ok(())
    }

    pub fn summary(&self) -> Summary<S> {
        Summary::of(&self.values)
    }
}

impl<S: Scalar> From<Vec<S>> for DataSample<S> {
    fn from(values: Vec<S>) -> Self {
        Self::new(values)
    }
}

impl<S: Scalar> Summary<S> {
    /// Two-pass statistics; the empty sample has mean and spread 0.
    pub fn of(values: &[S]) -> Self {
        if values.is_empty() {
            return Self {
                n: 0,
                sum: S::zero(),
                mean: S::zero(),
                centered_ss: S::zero(),
            };
        }
        let n = values.len() as u64;
        let sum: S = values.iter().copied().sum();
        let mean = sum / S::of_count(n);
        let centered_ss = values.iter().map(|&x| (x - mean) * (x - mean)).sum();
        Self {
            n,
            sum,
            mean,
            centered_ss,
        }
    }
}
