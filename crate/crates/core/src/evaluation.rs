//! Monte-Carlo experiments judging a planned sample size: how often the
//! realized posterior variance meets the target, coverage of the criterion's
//! bound under the prior predictive, and exceedance probabilities under a
//! fixed truth.
//!
//! Work units draw from `Substreams` keyed by cell and replicate index, and
//! successes are aggregated as integer counts, so results are identical for
//! any rayon thread count.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::ingest::Dataset;
use crate::models::{ConjugateModel, MarginalMoments, Summary, TrueParameter};
use crate::moments::{jackknife_stats, moment_pair, McMoments, MomentPair, MIN_ORACLE_REPLICATES};
use crate::rng::Substreams;
use crate::ssd::{vpvc_sample_size, CriterionSpec, SsdResult};
use crate::{Error, Result, Scalar};

pub const DEFAULT_REPLICATES: usize = 1000;

/// Rates inside this band count as neither success nor failure when
/// measuring how sharp a grid's phase boundary is.
pub const TRANSITION_BAND: (f64, f64) = (0.2, 0.8);

/// Where evaluation datasets come from.
#[derive(Debug, Clone, Copy)]
pub enum DataSource<'a, S> {
    /// i.i.d. draws at a fixed parameter.
    Truth(TrueParameter<S>),
    /// Resampling of an observed dataset.
    Empirical {
        dataset: &'a Dataset<S>,
        with_replacement: bool,
    },
    /// Parameter drawn from the prior, then data given the parameter.
    PriorPredictive,
}

impl<'a, S: Scalar> DataSource<'a, S> {
    /// Resampling with replacement, the default for empirical data.
    pub fn empirical(dataset: &'a Dataset<S>) -> Self {
        DataSource::Empirical {
            dataset,
            with_replacement: true,
        }
    }

    fn check(&self, model: &ConjugateModel<S>, n: u64) -> Result<()> {
        if n == 0 {
            return Err(Error::ZeroSampleSize);
        }
        let other = match self {
            DataSource::Truth(t) => {
                t.validate()?;
                t.family()
            }
            DataSource::Empirical {
                dataset,
                with_replacement,
            } => {
                if !with_replacement && (dataset.len() as u64) < n {
                    return Err(Error::InsufficientData {
                        available: dataset.len(),
                        requested: n as usize,
                    });
                }
                if dataset.is_empty() {
                    return Err(Error::EmptyDataset(dataset.label().to_owned()));
                }
                dataset.family()
            }
            DataSource::PriorPredictive => return Ok(()),
        };
        if other != model.family() {
            return Err(Error::FamilyMismatch {
                model: model.family(),
                other,
            });
        }
        Ok(())
    }

    fn draw<R: Rng + ?Sized>(&self, model: &ConjugateModel<S>, n: usize, rng: &mut R) -> Summary<S> {
        match self {
            DataSource::Truth(t) => t.sample_summary_unchecked(n as u64, rng),
            DataSource::PriorPredictive => model.sample_prior(rng).sample_summary_unchecked(n as u64, rng),
            DataSource::Empirical {
                dataset,
                with_replacement,
            } => {
                let values = dataset.values();
                let picked: Vec<S> = if *with_replacement {
                    (0..n).map(|_| values[rng.random_range(0..values.len())]).collect()
                } else {
                    rand::seq::index::sample(rng, values.len(), n)
                        .into_iter()
                        .map(|i| values[i])
                        .collect()
                };
                Summary::of(&picked)
            }
        }
    }

    /// Posterior variances of `replicates` datasets of size `n`, replicate
    /// `r` drawn from `streams.stream(r)`.
    fn posterior_variances(
        &self,
        model: &ConjugateModel<S>,
        n: u64,
        replicates: usize,
        streams: Substreams,
    ) -> Result<Vec<S>> {
        self.check(model, n)?;
        Ok((0..replicates as u64)
            .into_par_iter()
            .map(|r| {
                let mut rng = streams.stream(r);
                let summary = self.draw(model, n as usize, &mut rng);
                model.posterior_variance_from_summary(&summary)
            })
            .collect())
    }
}

/// Outcome of a batch of Bernoulli trials.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvaluationReport<S> {
    pub replicates: usize,
    pub successes: usize,
    pub rate: f64,
    /// Binomial standard error `sqrt(rate (1 - rate) / replicates)`.
    pub std_error: f64,
    pub seed: u64,
    pub n_used: u64,
    /// Target precision. For coverage runs this is the square root of the
    /// bound `mean_u2 + k sd_u2`.
    pub epsilon: S,
    pub k: S,
}

impl<S: Scalar> EvaluationReport<S> {
    fn from_counts(successes: usize, replicates: usize, seed: u64, n_used: u64, epsilon: S, k: S) -> Self {
        let rate = successes as f64 / replicates as f64;
        Self {
            replicates,
            successes,
            rate,
            std_error: (rate * (1.0 - rate) / replicates as f64).sqrt(),
            seed,
            n_used,
            epsilon,
            k,
        }
    }
}

fn require_replicates(replicates: usize) -> Result<()> {
    if replicates == 0 {
        Err(Error::TooFewReplicates { got: 0, need: 1 })
    } else {
        Ok(())
    }
}

/// Fraction of simulated datasets of size `n` whose posterior variance is
/// strictly below `epsilon^2`.
pub fn success_rate<S: Scalar>(
    model: &ConjugateModel<S>,
    spec: &CriterionSpec<S>,
    source: &DataSource<'_, S>,
    n: u64,
    replicates: usize,
    streams: Substreams,
) -> Result<EvaluationReport<S>> {
    require_replicates(replicates)?;
    let threshold = spec.threshold();
    let u2 = source.posterior_variances(model, n, replicates, streams)?;
    let successes = u2.iter().filter(|&&v| v < threshold).count();
    Ok(EvaluationReport::from_counts(
        successes,
        replicates,
        streams.seed(),
        n,
        spec.epsilon(),
        spec.k(),
    ))
}

/// Probability under the prior predictive that `u_n^2 <= mean_u2 + k sd_u2`.
pub fn coverage_probability<S: Scalar>(
    model: &ConjugateModel<S>,
    n: u64,
    k: S,
    replicates: usize,
    streams: Substreams,
) -> Result<EvaluationReport<S>> {
    require_replicates(replicates)?;
    let bound = moment_pair(model, n).lhs(k);
    let u2 = DataSource::PriorPredictive.posterior_variances(model, n, replicates, streams)?;
    let covered = u2.iter().filter(|&&v| v <= bound).count();
    Ok(EvaluationReport::from_counts(
        covered,
        replicates,
        streams.seed(),
        n,
        bound.sqrt(),
        k,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExceedanceRow<S> {
    pub n: u64,
    pub k: S,
    pub bound: S,
    pub exceedances: usize,
    pub replicates: usize,
    pub probability: f64,
    pub std_error: f64,
}

/// `P(u_n^2 > mean_u2 + k sd_u2)` under the sampling distribution at
/// `truth`, for every `(n, k)` pair.
///
/// All `k` at the same `n` share the same simulated datasets, so each row
/// set is monotone non-increasing in `k`.
pub fn exceedance_curve<S: Scalar>(
    model: &ConjugateModel<S>,
    truth: &TrueParameter<S>,
    k_values: &[S],
    n_values: &[u64],
    replicates: usize,
    streams: Substreams,
) -> Result<Vec<ExceedanceRow<S>>> {
    require_replicates(replicates)?;
    let source = DataSource::Truth(*truth);
    let mut rows = Vec::with_capacity(k_values.len() * n_values.len());
    for (index, &n) in n_values.iter().enumerate() {
        let u2 = source.posterior_variances(model, n, replicates, streams.cell(index as u64))?;
        let pair = moment_pair(model, n);
        for &k in k_values {
            if !(k.is_finite() && k >= S::zero()) {
                return Err(Error::InvalidCriterion(format!("k must be finite and >= 0 (got {k})")));
            }
            let bound = pair.lhs(k);
            let exceedances = u2.iter().filter(|&&v| v > bound).count();
            let p = exceedances as f64 / replicates as f64;
            rows.push(ExceedanceRow {
                n,
                k,
                bound,
                exceedances,
                replicates,
                probability: p,
                std_error: (p * (1.0 - p) / replicates as f64).sqrt(),
            });
        }
    }
    Ok(rows)
}

/// Mean and sd of `u_n^2` under the sampling distribution at `truth`; their
/// ratio is the conditional coefficient of variation.
pub fn conditional_moments<S: Scalar>(
    model: &ConjugateModel<S>,
    truth: &TrueParameter<S>,
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
    let u2 = DataSource::Truth(*truth).posterior_variances(model, n, replicates, streams)?;
    let stats = jackknife_stats(&u2);
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

/// Evenly spaced values of one marginal prior moment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridAxis<S> {
    pub name: String,
    pub min: S,
    pub max: S,
    pub steps: usize,
}

impl<S: Scalar> GridAxis<S> {
    pub fn new(name: impl Into<String>, min: S, max: S, steps: usize) -> Result<Self> {
        let name = name.into();
        if steps == 0 {
            return Err(Error::InvalidCriterion(format!("axis `{name}` needs at least one step")));
        }
        if !(min.is_finite() && max.is_finite() && min <= max) {
            return Err(Error::InvalidCriterion(format!("axis `{name}` has invalid range [{min}, {max}]")));
        }
        Ok(Self { name, min, max, steps })
    }

    pub fn values(&self) -> Vec<S> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let last = S::of_count(self.steps as u64 - 1);
        (0..self.steps)
            .map(|i| {
                let t = S::of_count(i as u64) / last;
                self.min + (self.max - self.min) * t
            })
            .collect()
    }
}

/// A rectangle of priors: two marginal moments vary, the rest stay at `base`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PriorGrid<S> {
    pub base: MarginalMoments<S>,
    pub x: GridAxis<S>,
    pub y: GridAxis<S>,
}

/// One grid position; `model` carries the construction error for
/// infeasible moment combinations.
#[derive(Debug, Clone)]
pub struct GridPoint<S> {
    pub index: usize,
    pub i: usize,
    pub j: usize,
    pub x: S,
    pub y: S,
    pub model: std::result::Result<ConjugateModel<S>, String>,
}

impl<S: Scalar> PriorGrid<S> {
    pub fn new(base: MarginalMoments<S>, x: GridAxis<S>, y: GridAxis<S>) -> Result<Self> {
        base.with_axis(&x.name, x.min)?;
        base.with_axis(&y.name, y.min)?;
        if x.name.replace('-', "_") == y.name.replace('-', "_") {
            return Err(Error::InvalidCriterion(format!("both grid axes are `{}`", x.name)));
        }
        Ok(Self { base, x, y })
    }

    /// Cells in x-major order.
    pub fn points(&self) -> Vec<GridPoint<S>> {
        let ys = self.y.values();
        self.x
            .values()
            .into_iter()
            .enumerate()
            .flat_map(|(i, x)| ys.iter().enumerate().map(move |(j, &y)| (i, j, x, y)))
            .enumerate()
            .map(|(index, (i, j, x, y))| {
                let model = self
                    .base
                    .with_axis(&self.x.name, x)
                    .and_then(|m| m.with_axis(&self.y.name, y))
                    .and_then(ConjugateModel::from_marginal)
                    .map_err(|e| e.to_string());
                GridPoint { index, i, j, x, y, model }
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.x.steps * self.y.steps
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleSizeCell<S> {
    pub i: usize,
    pub j: usize,
    pub x: S,
    pub y: S,
    pub result: std::result::Result<SsdResult<S>, String>,
}

/// Solves the criterion in every cell. Failing cells keep their error
/// message instead of aborting the sweep.
pub fn sample_size_grid<S: Scalar>(grid: &PriorGrid<S>, spec: &CriterionSpec<S>) -> Vec<SampleSizeCell<S>> {
    grid.points()
        .into_par_iter()
        .map(|p| SampleSizeCell {
            i: p.i,
            j: p.j,
            x: p.x,
            y: p.y,
            result: p
                .model
                .and_then(|m| vpvc_sample_size(&m, spec).map_err(|e| e.to_string())),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateCell<S> {
    pub i: usize,
    pub j: usize,
    pub x: S,
    pub y: S,
    pub n: Option<u64>,
    pub report: Option<EvaluationReport<S>>,
    pub reason: Option<String>,
}

impl<S: Scalar> RateCell<S> {
    fn failed(p: &GridPoint<S>, n: Option<u64>, reason: String) -> Self {
        Self {
            i: p.i,
            j: p.j,
            x: p.x,
            y: p.y,
            n,
            report: None,
            reason: Some(reason),
        }
    }

    pub fn rate(&self) -> Option<f64> {
        self.report.map(|r| r.rate)
    }
}

#[derive(Debug, Clone, Copy)]
enum CellExperiment<'a, S> {
    Success(&'a DataSource<'a, S>),
    Coverage,
}

fn rate_grid<S: Scalar>(
    grid: &PriorGrid<S>,
    spec: &CriterionSpec<S>,
    experiment: CellExperiment<'_, S>,
    fixed_n: Option<u64>,
    replicates: usize,
    streams: Substreams,
) -> Result<Vec<RateCell<S>>> {
    require_replicates(replicates)?;
    Ok(grid
        .points()
        .into_par_iter()
        .map(|p| {
            let model = match &p.model {
                Ok(m) => *m,
                Err(e) => return RateCell::failed(&p, None, e.clone()),
            };
            let n = match fixed_n {
                Some(n) => n,
                None => match vpvc_sample_size(&model, spec) {
                    Ok(r) => r.n,
                    Err(e) => return RateCell::failed(&p, None, e.to_string()),
                },
            };
            let cell_streams = streams.cell(p.index as u64);
            let report = match experiment {
                CellExperiment::Success(source) => success_rate(&model, spec, source, n, replicates, cell_streams),
                CellExperiment::Coverage => coverage_probability(&model, n, spec.k(), replicates, cell_streams),
            };
            match report {
                Ok(report) => RateCell {
                    i: p.i,
                    j: p.j,
                    x: p.x,
                    y: p.y,
                    n: Some(n),
                    report: Some(report),
                    reason: None,
                },
                Err(e) => RateCell::failed(&p, Some(n), e.to_string()),
            }
        })
        .collect())
}

/// Success rate per cell at the cell's solved sample size, or at `fixed_n`
/// when given.
pub fn success_rate_grid<S: Scalar>(
    grid: &PriorGrid<S>,
    spec: &CriterionSpec<S>,
    source: &DataSource<'_, S>,
    fixed_n: Option<u64>,
    replicates: usize,
    streams: Substreams,
) -> Result<Vec<RateCell<S>>> {
    rate_grid(grid, spec, CellExperiment::Success(source), fixed_n, replicates, streams)
}

/// Coverage of `mean_u2 + k sd_u2` per cell, at the cell's solved sample size.
pub fn coverage_grid<S: Scalar>(
    grid: &PriorGrid<S>,
    spec: &CriterionSpec<S>,
    replicates: usize,
    streams: Substreams,
) -> Result<Vec<RateCell<S>>> {
    rate_grid(grid, spec, CellExperiment::Coverage, None, replicates, streams)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpsilonPanel<S> {
    pub epsilon: S,
    pub cells: Vec<RateCell<S>>,
}

impl<S: Scalar> EpsilonPanel<S> {
    /// Share of evaluated cells whose rate lies inside [`TRANSITION_BAND`].
    pub fn transitional_fraction(&self) -> f64 {
        let rates: Vec<f64> = self.cells.iter().filter_map(RateCell::rate).collect();
        if rates.is_empty() {
            return 0.0;
        }
        let (lo, hi) = TRANSITION_BAND;
        rates.iter().filter(|&&r| (lo..=hi).contains(&r)).count() as f64 / rates.len() as f64
    }
}

/// Success-rate grids for a decreasing sequence of precision targets.
pub fn epsilon_sweep<S: Scalar>(
    grid: &PriorGrid<S>,
    template: &CriterionSpec<S>,
    source: &DataSource<'_, S>,
    epsilons: &[S],
    replicates: usize,
    streams: Substreams,
) -> Result<Vec<EpsilonPanel<S>>> {
    if epsilons.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::InvalidCriterion("epsilon list must be strictly decreasing".into()));
    }
    epsilons
        .iter()
        .enumerate()
        .map(|(index, &epsilon)| {
            let spec = template.with_epsilon(epsilon)?;
            let cells = success_rate_grid(grid, &spec, source, None, replicates, streams.cell(index as u64))?;
            Ok(EpsilonPanel { epsilon, cells })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{NormalNig, PoissonGamma};

    fn football() -> ConjugateModel<f64> {
        PoissonGamma::from_marginal(2.5, 1.0).unwrap().into()
    }

    #[test]
    fn precise_prior_always_succeeds_at_one() {
        let m: ConjugateModel<f64> = PoissonGamma::from_marginal(2.5, 0.01).unwrap().into();
        let spec = CriterionSpec::new(0.3, 2.0).unwrap();
        let truth = TrueParameter::poisson(2.71).unwrap();
        let r = success_rate(&m, &spec, &DataSource::Truth(truth), 1, 500, Substreams::new(1)).unwrap();
        assert_eq!(r.rate, 1.0);
        assert_eq!(r.std_error, 0.0);
    }

    #[test]
    fn report_invariants() {
        let spec = CriterionSpec::new(0.3, 2.0).unwrap();
        let r = success_rate(&football(), &spec, &DataSource::PriorPredictive, 47, 999, Substreams::new(2)).unwrap();
        assert_eq!(r.rate, r.successes as f64 / 999.0);
        assert!((r.std_error - (r.rate * (1.0 - r.rate) / 999.0).sqrt()).abs() < 1e-15);
        assert_eq!((r.n_used, r.seed, r.replicates), (47, 2, 999));
    }

    #[test]
    fn without_replacement_needs_enough_data() {
        let d = Dataset::new("goals", crate::Family::Poisson, vec![1.0, 2.0, 3.0]).unwrap();
        let spec = CriterionSpec::new(0.3, 2.0).unwrap();
        let source = DataSource::Empirical {
            dataset: &d,
            with_replacement: false,
        };
        assert!(matches!(
            success_rate(&football(), &spec, &source, 4, 10, Substreams::new(0)),
            Err(Error::InsufficientData { available: 3, requested: 4 })
        ));
        assert!(success_rate(&football(), &spec, &source, 3, 10, Substreams::new(0)).is_ok());
        assert!(success_rate(&football(), &spec, &DataSource::empirical(&d), 40, 10, Substreams::new(0)).is_ok());
    }

    #[test]
    fn source_family_must_match() {
        let spec = CriterionSpec::new(0.3, 2.0).unwrap();
        let truth = DataSource::Truth(TrueParameter::normal(0.0, 1.0).unwrap());
        assert!(matches!(
            success_rate(&football(), &spec, &truth, 5, 10, Substreams::new(0)),
            Err(Error::FamilyMismatch { .. })
        ));
    }

    #[test]
    fn huge_k_covers_everything() {
        let r = coverage_probability(&football(), 20, 100.0, 2000, Substreams::new(4)).unwrap();
        assert_eq!(r.rate, 1.0);
    }

    #[test]
    fn exceedance_is_monotone_in_k() {
        let truth = TrueParameter::poisson(2.71).unwrap();
        let ks = [0.0, 0.1, 0.2, 0.5, 1.0, 2.0];
        let rows = exceedance_curve(&football(), &truth, &ks, &[100, 400], 2000, Substreams::new(8)).unwrap();
        for chunk in rows.chunks(ks.len()) {
            for w in chunk.windows(2) {
                assert!(w[1].probability <= w[0].probability);
            }
        }
        let at_two = rows.iter().find(|r| r.n == 100 && r.k == 2.0).unwrap();
        assert!(at_two.probability < 0.01);
    }

    #[test]
    fn grid_axis_values() {
        let a = GridAxis::new("mean", 1.0, 5.0, 5).unwrap();
        assert_eq!(a.values(), vec![1.0, 2.0, 3.0, 4.0, 5.0]);
        assert_eq!(GridAxis::new("mean", 2.0, 2.0, 1).unwrap().values(), vec![2.0]);
        assert!(GridAxis::new("mean", 1.0, 0.0, 3).is_err());
        assert!(GridAxis::new("mean", 1.0, 2.0, 0).is_err());
    }

    #[test]
    fn grid_rejects_unknown_axes() {
        let base = MarginalMoments::Poisson { mean: 2.5, sd: 1.0 };
        let x = GridAxis::new("mean", 1.0, 5.0, 3).unwrap();
        assert!(PriorGrid::new(base, x.clone(), GridAxis::new("sd_s2", 0.1, 1.0, 3).unwrap()).is_err());
        assert!(PriorGrid::new(base, x.clone(), x).is_err());
    }

    #[test]
    fn grid_marks_infeasible_cells() {
        let base = MarginalMoments::Bernoulli { mean: 0.5, sd: 0.1 };
        let grid = PriorGrid::new(
            base,
            GridAxis::new("mean", 0.1, 0.5, 2).unwrap(),
            GridAxis::new("sd", 0.1, 0.45, 2).unwrap(),
        )
        .unwrap();
        let cells = sample_size_grid(&grid, &CriterionSpec::new(0.1, 2.0).unwrap());
        assert_eq!(cells.len(), 4);
        // mean 0.1 with sd 0.45 violates sd^2 < mean (1 - mean)
        assert!(cells[1].result.is_err());
        assert!(cells[3].result.is_ok());
    }

    #[test]
    fn normal_sweep_ignores_mu0() {
        let base = MarginalMoments::Normal {
            mean_mu: 3.5,
            sd_mu: 1.0,
            mean_s2: 3.0,
            sd_s2: 1.5,
        };
        let grid = PriorGrid::new(
            base,
            GridAxis::new("mean_mu", 1.0, 6.0, 6).unwrap(),
            GridAxis::new("sd_mu", 0.2, 2.0, 4).unwrap(),
        )
        .unwrap();
        let cells = sample_size_grid(&grid, &CriterionSpec::new(1.0 / 3.0, 2.0).unwrap());
        for c in &cells {
            let same_j = cells.iter().find(|d| d.i == 0 && d.j == c.j).unwrap();
            assert_eq!(c.result.as_ref().unwrap().n, same_j.result.as_ref().unwrap().n);
        }
    }

    #[test]
    fn epsilon_list_must_decrease() {
        let base = MarginalMoments::Poisson { mean: 2.5, sd: 1.0 };
        let grid = PriorGrid::new(
            base,
            GridAxis::new("mean", 2.5, 2.5, 1).unwrap(),
            GridAxis::new("sd", 1.0, 1.0, 1).unwrap(),
        )
        .unwrap();
        let spec = CriterionSpec::new(0.3, 2.0).unwrap();
        let err = epsilon_sweep(&grid, &spec, &DataSource::PriorPredictive, &[0.1, 0.3], 10, Substreams::new(0));
        assert!(err.is_err());
        let panels = epsilon_sweep(&grid, &spec, &DataSource::PriorPredictive, &[100.0], 10, Substreams::new(0)).unwrap();
        assert_eq!(panels[0].cells[0].n, Some(1));
        assert_eq!(panels[0].cells[0].rate(), Some(1.0));
    }

    #[test]
    fn conditional_moments_shrink() {
        let m: ConjugateModel<f64> = NormalNig::from_marginal(3.5, 1.0, 3.0, 1.5).unwrap().into();
        let truth = TrueParameter::normal(4.17, 4.05).unwrap();
        let small = conditional_moments(&m, &truth, 50, 2000, Substreams::new(1)).unwrap();
        let large = conditional_moments(&m, &truth, 800, 2000, Substreams::new(1)).unwrap();
        assert!(large.moments.coefficient_of_variation() < small.moments.coefficient_of_variation());
    }
}
