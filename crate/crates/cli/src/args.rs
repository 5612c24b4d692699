use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use vpvc::Family;

pub const SUBCOMMANDS: &[&str] = &["ssd", "sweep", "evaluate", "asymptotics", "surrogate", "coverage"];

/// Bayesian sample size determination with the variance-aware posterior variance criterion.
#[derive(Parser, Debug)]
#[command(name = "vpvc", version)]
pub struct Cli {
    /// INI file; keys from the section named after the subcommand become flags, explicit flags win
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Section to read instead of the subcommand name
    #[arg(long, global = true)]
    pub section: Option<String>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Smallest n meeting the criterion for one prior
    #[command(args_override_self = true)]
    Ssd {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        criterion: CriterionArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Sample sizes over a two-axis grid of marginal prior moments
    #[command(args_override_self = true)]
    Sweep {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        criterion: CriterionArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Success rates, exceedance curves and epsilon sweeps by simulation
    #[command(args_override_self = true)]
    Evaluate {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        criterion: CriterionArgs,
        #[arg(long, value_enum, default_value_t = EvalKind::Success)]
        kind: EvalKind,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        source: SourceArgs,
        /// Evaluate at this n instead of the solved sample size
        #[arg(long)]
        n: Option<u64>,
        #[arg(long, default_value_t = vpvc::evaluation::DEFAULT_REPLICATES)]
        replicates: usize,
        /// k values for exceedance curves
        #[arg(long, value_name = "K,K,...")]
        ks: Option<List<f64>>,
        /// Sample sizes for exceedance curves
        #[arg(long, value_name = "N,N,...")]
        ns: Option<List<u64>>,
        /// Decreasing precision targets for an epsilon sweep, units as for --eps
        #[arg(long, value_name = "EPS,EPS,...")]
        eps_list: Option<List<Epsilon>>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Gamma, asymptotic sample size, k* and its upper bound
    #[command(args_override_self = true)]
    Asymptotics {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        criterion: CriterionArgs,
        /// True parameter: theta, `mu,sigma2` or p
        #[arg(long, value_name = "VALUES")]
        truth: Option<List<f64>>,
        /// Half-width of the parameter box in prior sds
        #[arg(long, default_value_t = 1.0)]
        region_width: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Write a synthetic dataset drawn at a fixed parameter
    #[command(args_override_self = true)]
    Surrogate {
        #[arg(long, value_enum)]
        preset: Option<Preset>,
        #[arg(long, required_unless_present = "preset")]
        family: Option<Family>,
        #[arg(long, value_name = "VALUES", required_unless_present = "preset")]
        truth: Option<List<f64>>,
        #[arg(long)]
        size: Option<usize>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Prior-predictive coverage of mean_u2 + k sd_u2
    #[command(args_override_self = true)]
    Coverage {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        criterion: CriterionArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long, default_value_t = vpvc::evaluation::DEFAULT_REPLICATES)]
        replicates: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
}

impl Command {
    pub fn out(&self) -> &OutputArgs {
        match self {
            Command::Ssd { out, .. }
            | Command::Sweep { out, .. }
            | Command::Evaluate { out, .. }
            | Command::Asymptotics { out, .. }
            | Command::Surrogate { out, .. }
            | Command::Coverage { out, .. } => out,
        }
    }
}

/// Prior as native hyperparameters or as marginal prior moments.
#[derive(Args, Debug, Clone, Serialize)]
pub struct ModelArgs {
    #[arg(long)]
    pub family: Family,
    #[arg(long, help_heading = "Native hyperparameters")]
    pub alpha: Option<f64>,
    #[arg(long, help_heading = "Native hyperparameters")]
    pub beta: Option<f64>,
    #[arg(long, help_heading = "Native hyperparameters")]
    pub lambda: Option<f64>,
    #[arg(long, help_heading = "Native hyperparameters")]
    pub a: Option<f64>,
    #[arg(long, help_heading = "Native hyperparameters")]
    pub b: Option<f64>,
    /// Prior mean of mu (normal family)
    #[arg(long, visible_alias = "mean-mu")]
    pub mu0: Option<f64>,
    #[arg(long, help_heading = "Marginal moments")]
    pub mean: Option<f64>,
    #[arg(long, help_heading = "Marginal moments")]
    pub sd: Option<f64>,
    #[arg(long, help_heading = "Marginal moments")]
    pub sd_mu: Option<f64>,
    #[arg(long, help_heading = "Marginal moments")]
    pub mean_s2: Option<f64>,
    #[arg(long, help_heading = "Marginal moments")]
    pub sd_s2: Option<f64>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CriterionArgs {
    /// Target posterior sd: bare number in model units, or with `sec`/`min` suffix (model units are minutes)
    #[arg(long)]
    pub eps: Epsilon,
    #[arg(long, default_value_t = 2.0)]
    pub k: f64,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct GridArgs {
    /// First grid axis, `name:min:max:steps`
    #[arg(long, value_name = "AXIS")]
    pub x: Option<AxisSpec>,
    /// Second grid axis, `name:min:max:steps`
    #[arg(long, value_name = "AXIS")]
    pub y: Option<AxisSpec>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SourceArgs {
    /// Where evaluation datasets come from; inferred from --data/--truth when omitted
    #[arg(long, value_enum)]
    pub source: Option<SourceKind>,
    /// True parameter: theta, `mu,sigma2` or p
    #[arg(long, value_name = "VALUES")]
    pub truth: Option<List<f64>>,
    /// CSV file to resample
    #[arg(long, value_name = "FILE")]
    pub data: Option<PathBuf>,
    #[arg(long, default_value = "value")]
    pub column: String,
    #[arg(long)]
    pub without_replacement: bool,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct OutputArgs {
    #[arg(long, env = "VPVC_SEED", default_value_t = 1)]
    pub seed: u64,
    /// Worker threads (results do not depend on it)
    #[arg(long)]
    pub threads: Option<usize>,
    /// Write to this file instead of stdout
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvalKind {
    Success,
    Exceedance,
    EpsSweep,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceKind {
    Truth,
    Data,
    Prior,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    /// Goals per match, Poisson(2.71), 5784 matches
    Football,
    /// Song lengths in minutes, Normal(4.17, 4.05), 100000 songs
    Songs,
}

/// Precision target in model units, remembering how it was written.
#[derive(Debug, Clone, Serialize)]
pub struct Epsilon {
    pub raw: String,
    pub value: f64,
}

impl FromStr for Epsilon {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let (number, scale) = if let Some(v) = t.strip_suffix("sec").or_else(|| t.strip_suffix('s')) {
            (v, 1.0 / 60.0)
        } else if let Some(v) = t.strip_suffix("min").or_else(|| t.strip_suffix('m')) {
            (v, 1.0)
        } else {
            (t, 1.0)
        };
        let x: f64 = number
            .trim()
            .parse()
            .map_err(|_| format!("`{s}` is not a number with optional sec/min suffix"))?;
        let value = x * scale;
        if !(value.is_finite() && value > 0.0) {
            return Err(format!("epsilon must be finite and > 0 (got `{s}`)"));
        }
        Ok(Epsilon { raw: t.to_owned(), value })
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (= {} model units)", self.raw, self.value)
    }
}

/// Comma-separated values given as a single flag.
#[derive(Debug, Clone, Serialize)]
#[serde(transparent)]
pub struct List<T>(pub Vec<T>);

impl<T: FromStr> FromStr for List<T>
where
    T::Err: fmt::Display,
{
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let items = s
            .split(',')
            .map(|p| p.trim().parse::<T>().map_err(|e| format!("`{p}`: {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        if items.is_empty() {
            return Err("empty list".into());
        }
        Ok(List(items))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AxisSpec {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl FromStr for AxisSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let [name, min, max, steps] = parts[..] else {
            return Err(format!("axis `{s}` is not name:min:max:steps"));
        };
        let num = |v: &str| v.parse::<f64>().map_err(|_| format!("axis `{s}`: `{v}` is not a number"));
        let steps: usize = steps
            .parse()
            .map_err(|_| format!("axis `{s}`: steps must be a positive integer"))?;
        if steps == 0 {
            return Err(format!("axis `{s}`: steps must be >= 1"));
        }
        Ok(AxisSpec {
            name: name.replace('-', "_"),
            min: num(min)?,
            max: num(max)?,
            steps,
        })
    }
}
