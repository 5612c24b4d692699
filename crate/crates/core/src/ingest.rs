//! Loading, validating and generating one-column numeric datasets.
//!
//! CSV layout: a header row naming the columns, comma separated, numeric
//! values unquoted. Lines starting with `#` are comments.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use rand::Rng;
use serde::Serialize;

use crate::models::{DataSample, Summary, TrueParameter};
use crate::{Error, Family, Result, Scalar};

/// Goal counts: number of matches and mean goals per match of the
/// international football case study.
pub const FOOTBALL_MATCHES: usize = 5784;
pub const FOOTBALL_GOALS_PER_MATCH: f64 = 2.71;

/// Song lengths in minutes. The surrogate is a desk-scale stand-in for the
/// million-song catalogue; the variance is a back-derived assumption, not a
/// published statistic.
pub const SONG_SURROGATE_SIZE: usize = 100_000;
pub const SONG_MEAN_MINUTES: f64 = 4.17;
pub const SONG_VARIANCE_MINUTES2: f64 = 4.05;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Dataset<S> {
    label: String,
    family: Family,
    values: Vec<S>,
    mean: S,
    variance: Option<S>,
}

impl<S: Scalar> Dataset<S> {
    /// Validates the values against the family's domain and caches summary
    /// statistics.
    pub fn new(label: impl Into<String>, family: Family, values: Vec<S>) -> Result<Self> {
        let label = label.into();
        if values.is_empty() {
            return Err(Error::EmptyDataset(label));
        }
        let sample = DataSample::new(values);
        sample.validate(family)?;
        let Summary {
            n,
            mean,
            centered_ss,
            ..
        } = sample.summary();
        let variance = (n > 1).then(|| centered_ss / S::of_count(n - 1));
        Ok(Self {
            label,
            family,
            values: sample.into_values(),
            mean,
            variance,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn family(&self) -> Family {
        self.family
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

    pub fn mean(&self) -> S {
        self.mean
    }

    /// Unbiased sample variance; `None` for a single value.
    pub fn variance(&self) -> Option<S> {
        self.variance
    }

    /// Writes the dataset as a one-column CSV with `label` as header.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record([self.label.as_str()])?;
        for v in &self.values {
            out.write_record([v.to_string()])?;
        }
        out.flush().map_err(csv::Error::from)?;
        Ok(())
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })?;
        self.write_csv(file)
    }
}

/// Reads column `column` of a CSV file as a dataset of the given family.
pub fn load_csv<S: Scalar>(path: impl AsRef<Path>, column: &str, family: Family) -> Result<Dataset<S>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(file);
    let headers = match reader.headers() {
        Ok(h) => h.clone(),
        Err(e) => return Err(parse_error(path, &e)),
    };
    if headers.is_empty() {
        return Err(Error::EmptyDataset(path.display().to_string()));
    }
    let index = headers
        .iter()
        .position(|h| h == column)
        .ok_or_else(|| Error::MissingColumn {
            path: path.to_owned(),
            column: column.to_owned(),
        })?;

    let mut values = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| parse_error(path, &e))?;
        let line = record.position().map_or(0, |p| p.line());
        let field = record.get(index).ok_or_else(|| Error::Parse {
            path: path.to_owned(),
            line,
            message: format!("missing field for column `{column}`"),
        })?;
        let value = S::from_str_radix(field, 10).map_err(|_| Error::Parse {
            path: path.to_owned(),
            line,
            message: format!("cannot parse `{field}` as a number"),
        })?;
        if let Err(Error::InvalidData { reason, .. }) = DataSample::new(vec![value]).validate(family) {
            return Err(Error::Parse {
                path: path.to_owned(),
                line,
                message: format!("value {field} violates the {family} domain: {reason}"),
            });
        }
        values.push(value);
    }
    if values.is_empty() {
        return Err(Error::EmptyDataset(path.display().to_string()));
    }
    Dataset::new(column, family, values)
}

fn parse_error(path: &Path, e: &csv::Error) -> Error {
    Error::Parse {
        path: path.to_owned(),
        line: e.position().map_or(0, |p| p.line()),
        message: e.to_string(),
    }
}

/// Plug-in estimate of the data-generating parameter: the sample mean, and
/// for Normal data the unbiased sample variance.
pub fn empirical_truth<S: Scalar>(dataset: &Dataset<S>, family: Family) -> Result<TrueParameter<S>> {
    if dataset.is_empty() {
        return Err(Error::EmptyDataset(dataset.label.clone()));
    }
    let mean = dataset.mean();
    let degenerate = |what: &str| Error::DegenerateData(format!("{}: {what}", dataset.label));
    match family {
        Family::Poisson => TrueParameter::poisson(mean).map_err(|_| degenerate("mean count is zero")),
        Family::Bernoulli => TrueParameter::bernoulli(mean).map_err(|_| degenerate("all outcomes are identical")),
        Family::Normal => {
            let variance = dataset
                .variance()
                .filter(|v| *v > S::zero())
                .ok_or_else(|| degenerate("sample variance is zero or undefined"))?;
            TrueParameter::normal(mean, variance)
        }
    }
}

/// Synthetic i.i.d. dataset drawn at `truth`.
pub fn make_surrogate<S: Scalar, R: Rng + ?Sized>(
    label: impl Into<String>,
    truth: &TrueParameter<S>,
    size: usize,
    rng: &mut R,
) -> Result<Dataset<S>> {
    let sample = truth.sample(size, rng)?;
    Dataset::new(label, truth.family(), sample.into_values())
}
