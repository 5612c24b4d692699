use anyhow::{bail, Context, Result};
use vpvc::asymptotics::{asymptotic_sample_size, k_star, k_star_upper_bound, prior_region, ParameterRegion};
use vpvc::evaluation::{
    coverage_grid, coverage_probability, epsilon_sweep, exceedance_curve, sample_size_grid, success_rate,
    success_rate_grid, DataSource, GridAxis, PriorGrid, RateCell,
};
use vpvc::ingest::{self, empirical_truth, load_csv, make_surrogate, Dataset};
use vpvc::moments::vpvc_lhs;
use vpvc::ssd::{apvc_sample_size, vpvc_sample_size};
use vpvc::{ConjugateModel, CriterionSpec, Family, MarginalMoments, Substreams, TrueParameter};

use crate::args::{Command, CriterionArgs, EvalKind, GridArgs, ModelArgs, Preset, SourceArgs};
use crate::output::Table;
use crate::UsageError;

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

impl ModelArgs {
    fn require(&self, name: &str, v: Option<f64>) -> Result<f64> {
        v.ok_or_else(|| usage(format!("--{name} is required for the {} family", self.family)))
    }

    fn native(&self) -> bool {
        [self.alpha, self.beta, self.lambda, self.a, self.b].iter().any(Option::is_some)
    }

    /// Marginal moments of the prior, converted from native hyperparameters
    /// when those were given.
    pub fn marginal(&self) -> Result<MarginalMoments<f64>> {
        if self.native() {
            return Ok(self.model()?.marginal_moments());
        }
        Ok(match self.family {
            Family::Poisson => MarginalMoments::Poisson {
                mean: self.require("mean", self.mean)?,
                sd: self.require("sd", self.sd)?,
            },
            Family::Bernoulli => MarginalMoments::Bernoulli {
                mean: self.require("mean", self.mean)?,
                sd: self.require("sd", self.sd)?,
            },
            Family::Normal => MarginalMoments::Normal {
                mean_mu: self.require("mu0", self.mu0)?,
                sd_mu: self.require("sd-mu", self.sd_mu)?,
                mean_s2: self.require("mean-s2", self.mean_s2)?,
                sd_s2: self.require("sd-s2", self.sd_s2)?,
            },
        })
    }

    pub fn model(&self) -> Result<ConjugateModel<f64>> {
        if !self.native() {
            return Ok(ConjugateModel::from_marginal(self.marginal()?)?);
        }
        Ok(match self.family {
            Family::Poisson => {
                vpvc::PoissonGamma::new(self.require("alpha", self.alpha)?, self.require("beta", self.beta)?)?.into()
            }
            Family::Bernoulli => vpvc::BetaBernoulli::new(self.require("a", self.a)?, self.require("b", self.b)?)?.into(),
            Family::Normal => vpvc::NormalNig::new(
                self.require("mu0", self.mu0)?,
                self.require("lambda", self.lambda)?,
                self.require("alpha", self.alpha)?,
                self.require("beta", self.beta)?,
            )?
            .into(),
        })
    }
}

impl CriterionArgs {
    fn spec(&self) -> Result<CriterionSpec<f64>> {
        Ok(CriterionSpec::new(self.eps.value, self.k)?)
    }

    fn note(&self) -> String {
        format!("eps {} k {}", self.eps, self.k)
    }
}

impl GridArgs {
    fn grid(&self, model: &ModelArgs) -> Result<Option<PriorGrid<f64>>> {
        match (&self.x, &self.y) {
            (None, None) => Ok(None),
            (Some(x), Some(y)) => Ok(Some(PriorGrid::new(
                model.marginal()?,
                GridAxis::new(&x.name, x.min, x.max, x.steps)?,
                GridAxis::new(&y.name, y.min, y.max, y.steps)?,
            )?)),
            _ => Err(usage("a grid needs both --x and --y")),
        }
    }
}

fn truth_from(family: Family, values: &[f64]) -> Result<TrueParameter<f64>> {
    Ok(match (family, values) {
        (Family::Poisson, [theta]) => TrueParameter::poisson(*theta)?,
        (Family::Bernoulli, [p]) => TrueParameter::bernoulli(*p)?,
        (Family::Normal, [mu, sigma2]) => TrueParameter::normal(*mu, *sigma2)?,
        (f, v) => bail!(UsageError(format!(
            "--truth for the {f} family takes {} (got {} values)",
            match f {
                Family::Poisson => "theta",
                Family::Bernoulli => "p",
                Family::Normal => "mu,sigma2",
            },
            v.len()
        ))),
    })
}

enum Source {
    Truth(TrueParameter<f64>),
    Data(Dataset<f64>, bool),
    Prior,
}

impl SourceArgs {
    fn load(&self, family: Family) -> Result<Source> {
        use crate::args::SourceKind;
        let kind = self.source.unwrap_or(if self.data.is_some() {
            SourceKind::Data
        } else if self.truth.is_some() {
            SourceKind::Truth
        } else {
            SourceKind::Prior
        });
        Ok(match kind {
            SourceKind::Truth => {
                let values = self.truth.as_ref().ok_or_else(|| usage("--source truth needs --truth"))?;
                Source::Truth(truth_from(family, &values.0)?)
            }
            SourceKind::Data => {
                let path = self.data.as_ref().ok_or_else(|| usage("--source data needs --data"))?;
                Source::Data(load_csv(path, &self.column, family)?, !self.without_replacement)
            }
            SourceKind::Prior => Source::Prior,
        })
    }
}

impl Source {
    fn data_source(&self) -> DataSource<'_, f64> {
        match self {
            Source::Truth(t) => DataSource::Truth(*t),
            Source::Data(d, with_replacement) => DataSource::Empirical {
                dataset: d,
                with_replacement: *with_replacement,
            },
            Source::Prior => DataSource::PriorPredictive,
        }
    }

    fn truth(&self) -> Result<TrueParameter<f64>> {
        match self {
            Source::Truth(t) => Ok(*t),
            Source::Data(d, _) => Ok(empirical_truth(d, d.family())?),
            Source::Prior => Err(usage("exceedance curves need --truth or --data")),
        }
    }

    fn note(&self) -> String {
        match self {
            Source::Truth(t) => format!("source truth {}", serde_json::to_string(t).unwrap_or_default()),
            Source::Data(d, r) => format!(
                "source data `{}` ({} values, {} replacement)",
                d.label(),
                d.len(),
                if *r { "with" } else { "without" }
            ),
            Source::Prior => "source prior predictive".into(),
        }
    }
}

pub fn execute(command: &Command, seed: u64) -> Result<Table> {
    let streams = Substreams::new(seed);
    match command {
        Command::Ssd { model, criterion, .. } => ssd(model, criterion),
        Command::Sweep {
            model, criterion, grid, ..
        } => sweep(model, criterion, grid),
        Command::Evaluate {
            model,
            criterion,
            kind,
            grid,
            source,
            n,
            replicates,
            ks,
            ns,
            eps_list,
            ..
        } => {
            let m = model.model()?;
            let spec = criterion.spec()?;
            let src = source.load(model.family)?;
            let grid = grid.grid(model)?;
            let mut table = match kind {
                EvalKind::Success => match &grid {
                    None => {
                        let n = match n {
                            Some(n) => *n,
                            None => vpvc_sample_size(&m, &spec)?.n,
                        };
                        let r = success_rate(&m, &spec, &src.data_source(), n, *replicates, streams)?;
                        let mut t = Table::new(["n", "epsilon", "k", "replicates", "successes", "rate", "std_error", "seed"]);
                        t.push(vec![
                            r.n_used.into(),
                            r.epsilon.into(),
                            r.k.into(),
                            r.replicates.into(),
                            r.successes.into(),
                            r.rate.into(),
                            r.std_error.into(),
                            r.seed.into(),
                        ]);
                        t
                    }
                    Some(g) => rate_table(
                        g,
                        &success_rate_grid(g, &spec, &src.data_source(), *n, *replicates, streams)?,
                        seed,
                    ),
                },
                EvalKind::Exceedance => {
                    let truth = src.truth()?;
                    let ks = ks.as_ref().map_or_else(|| vec![criterion.k], |l| l.0.clone());
                    let ns = match (ns, n) {
                        (Some(l), _) => l.0.clone(),
                        (None, Some(n)) => vec![*n],
                        (None, None) => vec![vpvc_sample_size(&m, &spec)?.n],
                    };
                    let rows = exceedance_curve(&m, &truth, &ks, &ns, *replicates, streams)?;
                    let mut t = Table::new(["n", "k", "bound", "exceedances", "replicates", "probability", "std_error"]);
                    for r in rows {
                        t.push(vec![
                            r.n.into(),
                            r.k.into(),
                            r.bound.into(),
                            r.exceedances.into(),
                            r.replicates.into(),
                            r.probability.into(),
                            r.std_error.into(),
                        ]);
                    }
                    if let Ok(report) = k_star(&m, &truth) {
                        t.notes.push(format!("k* {}", report.k_star));
                    }
                    t
                }
                EvalKind::EpsSweep => {
                    let g = grid.as_ref().ok_or_else(|| usage("an epsilon sweep needs --x and --y"))?;
                    let eps = eps_list.as_ref().ok_or_else(|| usage("an epsilon sweep needs --eps-list"))?;
                    let values: Vec<f64> = eps.0.iter().map(|e| e.value).collect();
                    let panels = epsilon_sweep(g, &spec, &src.data_source(), &values, *replicates, streams)?;
                    let mut t = Table::new(["epsilon", g.x.name.as_str(), g.y.name.as_str(), "n", "rate", "std_error", "reason"]);
                    for (p, e) in panels.iter().zip(&eps.0) {
                        t.notes.push(format!(
                            "eps {e}: fraction of cells with rate in [0.2, 0.8] = {}",
                            p.transitional_fraction()
                        ));
                        for c in &p.cells {
                            t.push(vec![
                                p.epsilon.into(),
                                c.x.into(),
                                c.y.into(),
                                c.n.into(),
                                c.rate().into(),
                                c.report.map(|r| r.std_error).into(),
                                c.reason.clone().into(),
                            ]);
                        }
                    }
                    t
                }
            };
            table.notes.insert(0, src.note());
            table.notes.insert(0, criterion.note());
            Ok(table)
        }
        Command::Coverage {
            model,
            criterion,
            grid,
            n,
            replicates,
            ..
        } => {
            let m = model.model()?;
            let spec = criterion.spec()?;
            let mut table = match grid.grid(model)? {
                None => {
                    let n = match n {
                        Some(n) => *n,
                        None => vpvc_sample_size(&m, &spec)?.n,
                    };
                    let r = coverage_probability(&m, n, spec.k(), *replicates, streams)?;
                    let mut t = Table::new(["n", "k", "bound", "replicates", "covered", "rate", "std_error", "seed"]);
                    t.push(vec![
                        n.into(),
                        r.k.into(),
                        vpvc_lhs(&m, n, spec.k()).into(),
                        r.replicates.into(),
                        r.successes.into(),
                        r.rate.into(),
                        r.std_error.into(),
                        r.seed.into(),
                    ]);
                    t
                }
                Some(g) => {
                    if n.is_some() {
                        return Err(usage("--n applies to single-prior coverage runs only"));
                    }
                    let cells = coverage_grid(&g, &spec, *replicates, streams)?;
                    let rates: Vec<f64> = cells.iter().filter_map(RateCell::rate).collect();
                    let mut t = rate_table(&g, &cells, seed);
                    if !rates.is_empty() {
                        t.notes.push(format!(
                            "grid average coverage {}",
                            rates.iter().sum::<f64>() / rates.len() as f64
                        ));
                    }
                    t
                }
            };
            table.notes.insert(0, criterion.note());
            Ok(table)
        }
        Command::Asymptotics {
            model,
            criterion,
            truth,
            region_width,
            ..
        } => asymptotics(model, criterion, truth.as_ref().map(|l| l.0.as_slice()), *region_width),
        Command::Surrogate {
            preset,
            family,
            truth,
            size,
            ..
        } => {
            let (label, preset_truth, default_size) = match preset {
                Some(Preset::Football) => (
                    "football goals per match",
                    Some(TrueParameter::poisson(ingest::FOOTBALL_GOALS_PER_MATCH)?),
                    ingest::FOOTBALL_MATCHES,
                ),
                Some(Preset::Songs) => (
                    "song length in minutes",
                    Some(TrueParameter::normal(ingest::SONG_MEAN_MINUTES, ingest::SONG_VARIANCE_MINUTES2)?),
                    ingest::SONG_SURROGATE_SIZE,
                ),
                None => ("surrogate", None, 1000),
            };
            let family = family
                .or(preset_truth.map(|t| t.family()))
                .ok_or_else(|| usage("--family is required without --preset"))?;
            let t = match (truth, preset_truth) {
                (Some(values), _) => truth_from(family, &values.0)?,
                (None, Some(t)) => t,
                (None, None) => return Err(usage("--truth is required without --preset")),
            };
            let size = size.unwrap_or(default_size);
            let mut rng = streams.stream(0);
            let data = make_surrogate(label, &t, size, &mut rng)?;
            let mut table = Table::new(["value"]);
            table.notes.push(format!(
                "{label}: {} draws at {}",
                size,
                serde_json::to_string(&t).unwrap_or_default()
            ));
            for v in data.values() {
                table.push(vec![(*v).into()]);
            }
            Ok(table)
        }
    }
}

fn ssd(model: &ModelArgs, criterion: &CriterionArgs) -> Result<Table> {
    let m = model.model()?;
    let spec = criterion.spec()?;
    let r = vpvc_sample_size(&m, &spec)?;
    let apvc = apvc_sample_size(&m, spec.epsilon())?;
    let asym = asymptotic_sample_size(&m, &spec);
    let mut t = Table::new([
        "family",
        "epsilon",
        "k",
        "n",
        "lhs_at_n",
        "lhs_at_n_minus_1",
        "threshold",
        "apvc_n",
        "n_asymptotic",
        "gamma",
    ]);
    t.notes.push(criterion.note());
    if let Some(prev) = r.lhs_at_n_minus_1 {
        if ((prev - spec.threshold()) / spec.threshold()).abs() < 1e-12 {
            t.notes.push(format!(
                "lhs({}) equals eps^2 to 1e-12; the strict criterion gives {} where a non-strict one would give {}",
                r.n - 1,
                r.n,
                r.n - 1
            ));
        }
    }
    t.push(vec![
        m.family().to_string().into(),
        spec.epsilon().into(),
        spec.k().into(),
        r.n.into(),
        r.lhs_at_n.into(),
        r.lhs_at_n_minus_1.into(),
        spec.threshold().into(),
        apvc.n.into(),
        asym.n_asymptotic.into(),
        asym.gamma.into(),
    ]);
    Ok(t)
}

fn sweep(model: &ModelArgs, criterion: &CriterionArgs, grid: &GridArgs) -> Result<Table> {
    let g = grid.grid(model)?.ok_or_else(|| usage("sweep needs --x and --y"))?;
    let spec = criterion.spec()?;
    let cells = sample_size_grid(&g, &spec);
    let mut t = Table::new([g.x.name.as_str(), g.y.name.as_str(), "n", "lhs_at_n", "reason"]);
    t.notes.push(criterion.note());
    for c in cells {
        let (n, lhs, reason) = match c.result {
            Ok(r) => (Some(r.n), Some(r.lhs_at_n), None),
            Err(e) => (None, None, Some(e)),
        };
        t.push(vec![c.x.into(), c.y.into(), n.into(), lhs.into(), reason.into()]);
    }
    Ok(t)
}

fn rate_table(g: &PriorGrid<f64>, cells: &[RateCell<f64>], seed: u64) -> Table {
    let mut t = Table::new([
        g.x.name.as_str(),
        g.y.name.as_str(),
        "n",
        "replicates",
        "successes",
        "rate",
        "std_error",
        "seed",
        "reason",
    ]);
    for c in cells {
        t.push(vec![
            c.x.into(),
            c.y.into(),
            c.n.into(),
            c.report.map(|r| r.replicates).into(),
            c.report.map(|r| r.successes).into(),
            c.rate().into(),
            c.report.map(|r| r.std_error).into(),
            seed.into(),
            c.reason.clone().into(),
        ]);
    }
    t
}

fn describe(region: &ParameterRegion<f64>) -> String {
    let mut s = format!("interest [{}, {}]", region.interest.lo, region.interest.hi);
    if let Some(n) = region.nuisance {
        s.push_str(&format!(" sigma2 [{}, {}]", n.lo, n.hi));
    }
    s
}

fn asymptotics(model: &ModelArgs, criterion: &CriterionArgs, truth: Option<&[f64]>, width: f64) -> Result<Table> {
    let m = model.model()?;
    let spec = criterion.spec()?;
    let asym = asymptotic_sample_size(&m, &spec);
    let n = vpvc_sample_size(&m, &spec)?.n;
    let report = truth
        .map(|v| truth_from(m.family(), v).and_then(|t| Ok(k_star(&m, &t)?)))
        .transpose()?;
    let region = prior_region(&m, width)?;
    let bound = k_star_upper_bound(&m, &region).context("k* upper bound")?;
    let mut t = Table::new([
        "gamma",
        "e_pi_inv_fisher",
        "s_infinity",
        "n_asymptotic",
        "n",
        "k_star",
        "rho",
        "k_star_upper_bound",
        "region",
    ]);
    t.notes.push(criterion.note());
    t.notes
        .push(format!("region: prior mean +- {width} sd, bound attained at {}", serde_json::to_string(&bound.at)?));
    t.push(vec![
        asym.gamma.into(),
        asym.e_pi_inv_fisher.into(),
        asym.s_infinity.into(),
        asym.n_asymptotic.into(),
        n.into(),
        report.map(|r| r.k_star).into(),
        report.map(|r| r.rho).into(),
        bound.value.into(),
        describe(&region).into(),
    ]);
    Ok(t)
}
