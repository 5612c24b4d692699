//! Bayesian sample size determination from the first two prior-predictive
//! moments of the posterior variance.
//!
//! For a conjugate model and a precision target `epsilon`, the average
//! posterior variance criterion picks the smallest `n` with
//! `E[u_n^2] < epsilon^2`; the variance-aware criterion adds `k` prior-predictive
//! standard deviations of `u_n^2` to the left-hand side. The crate provides
//! the closed-form moments, the solvers, small-epsilon asymptotics and the
//! Monte-Carlo experiments used to judge a planned sample size.
//!
//! All numerics are generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! aliases below fix the scalar to `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
mod error;
pub mod evaluation;
pub mod ingest;
pub mod models;
pub mod moments;
pub mod rng;
mod scalar;
pub mod ssd;

pub use error::{Error, Result};
pub use models::{
    BetaBernoulli, ConjugateModel, DataSample, Family, MarginalMoments, NormalNig, PoissonGamma, Summary, TrueParameter,
};
pub use rng::Substreams;
pub use scalar::Scalar;
pub use ssd::{CriterionSpec, SsdResult};

pub type ConjugateModel64 = ConjugateModel<f64>;
pub type ConjugateModel32 = ConjugateModel<f32>;
pub type PoissonGamma64 = PoissonGamma<f64>;
pub type NormalNig64 = NormalNig<f64>;
pub type BetaBernoulli64 = BetaBernoulli<f64>;
pub type TrueParameter64 = TrueParameter<f64>;
pub type MarginalMoments64 = MarginalMoments<f64>;
pub type CriterionSpec64 = CriterionSpec<f64>;
pub type CriterionSpec32 = CriterionSpec<f32>;
pub type SsdResult64 = SsdResult<f64>;
pub type MomentPair64 = moments::MomentPair<f64>;
pub type Dataset64 = ingest::Dataset<f64>;
pub type EvaluationReport64 = evaluation::EvaluationReport<f64>;
