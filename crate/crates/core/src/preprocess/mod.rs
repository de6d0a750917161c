//! Feature engineering, CFS feature-subset selection and SMOTE balancing.

mod cfs;
mod smote;

pub use cfs::{cfs_select, CfsResult, MAX_STALE_EXPANSIONS};
pub use smote::{smote_balance, DEFAULT_SMOTE_K};

use crate::miner::{CommitRecord, Label};
use crate::{Error, Result};

/// Columns produced by [`engineer_features`], in order. `la`, `ld` are
/// relative to `lt`; `nuc` is relative to `nf`. `nd` and `rexp` are dropped.
pub const ENGINEERED_FEATURES: [&str; 12] = [
    "ns", "nf", "entropy", "la", "ld", "lt", "fix", "ndev", "age", "nuc", "exp", "sexp",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub features: Vec<f64>,
    pub label: Label,
    pub hash: String,
}

/// Feature matrix with binary labels.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Dataset {
    pub feature_names: Vec<String>,
    pub rows: Vec<Row>,
}

impl Dataset {
    pub fn new(feature_names: Vec<String>, rows: Vec<Row>) -> Result<Self> {
        let width = feature_names.len();
        for row in &rows {
            if row.features.len() != width {
                return Err(Error::InvalidInput(format!(
                    "row {} has {} features, expected {width}",
                    row.hash,
                    row.features.len()
                )));
            }
            if row.features.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "row {} has a non-finite feature",
                    row.hash
                )));
            }
        }
        Ok(Self {
            feature_names,
            rows,
        })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn width(&self) -> usize {
        self.feature_names.len()
    }

    /// (defective, clean) counts.
    pub fn class_counts(&self) -> (usize, usize) {
        let d = self.rows.iter().filter(|r| r.label.is_defective()).count();
        (d, self.rows.len() - d)
    }

    pub fn has_both_classes(&self) -> bool {
        let (d, c) = self.class_counts();
        d > 0 && c > 0
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = f64> + '_ {
        self.rows.iter().map(move |r| r.features[j])
    }

    pub fn labels01(&self) -> Vec<f64> {
        self.rows
            .iter()
            .map(|r| if r.label.is_defective() { 1.0 } else { 0.0 })
            .collect()
    }

    /// Keep only the named columns, in the given order.
    pub fn select_columns(&self, names: &[String]) -> Result<Dataset> {
        let idx: Vec<usize> = names
            .iter()
            .map(|n| {
                self.feature_names
                    .iter()
                    .position(|f| f == n)
                    .ok_or_else(|| Error::InvalidInput(format!("no feature named {n}")))
            })
            .collect::<Result<_>>()?;
        Ok(Dataset {
            feature_names: names.to_vec(),
            rows: self
                .rows
                .iter()
                .map(|r| Row {
                    features: idx.iter().map(|&j| r.features[j]).collect(),
                    label: r.label,
                    hash: r.hash.clone(),
                })
                .collect(),
        })
    }
}

fn relative(numerator: f64, denominator: f64) -> f64 {
    if denominator > 0.0 {
        numerator / denominator
    } else {
        numerator
    }
}

/// Engineered feature vector of one commit, matching [`ENGINEERED_FEATURES`].
pub fn engineer_commit(c: &CommitRecord) -> Vec<f64> {
    let log = |x: f64| x.max(0.0).ln_1p();
    vec![
        log(c.ns as f64),
        log(c.nf as f64),
        log(c.entropy),
        log(relative(c.la as f64, c.lt)),
        log(relative(c.ld as f64, c.lt)),
        log(c.lt),
        if c.fix { 1.0 } else { 0.0 },
        log(c.ndev as f64),
        log(c.age),
        log(relative(c.nuc as f64, c.nf as f64)),
        log(c.exp as f64),
        log(c.sexp as f64),
    ]
}

/// Turn labeled commit records into an engineered [`Dataset`].
pub fn engineer_features<'a, I>(records: I) -> Dataset
where
    I: IntoIterator<Item = &'a CommitRecord>,
{
    Dataset {
        feature_names: ENGINEERED_FEATURES.iter().map(|s| s.to_string()).collect(),
        rows: records
            .into_iter()
            .map(|c| Row {
                features: engineer_commit(c),
                label: c.label,
                hash: c.hash.clone(),
            })
            .collect(),
    }
}
