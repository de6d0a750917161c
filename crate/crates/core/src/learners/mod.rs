//! The six classifiers: logistic regression, k-nearest neighbours, CART
//! decision tree, random forest, Gaussian naive Bayes and a linear SVM with
//! Platt scaling. All are deterministic given `(data, seed)`.

mod knn;
mod logistic;
mod naive_bayes;
mod scaling;
mod svm;
mod tree;

use std::fmt;
use std::str::FromStr;

pub use knn::Knn;
pub use logistic::{logistic_loss_and_gradient, LogisticRegression};
pub use naive_bayes::GaussianNb;
pub use scaling::Standardizer;
pub use svm::{platt_scale, LinearSvm};
pub use tree::{DecisionTree, RandomForest, TreeParams};

use crate::exec::Execution;
use crate::miner::Label;
use crate::preprocess::Dataset;
use crate::{Error, Result};

pub const PROBA_FLOOR: f64 = 1e-6;
pub const DEFAULT_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LearnerKind {
    Lr,
    Knn,
    Dt,
    Rf,
    Nb,
    Svm,
}

impl LearnerKind {
    pub const ALL: [LearnerKind; 6] = [
        LearnerKind::Lr,
        LearnerKind::Knn,
        LearnerKind::Dt,
        LearnerKind::Rf,
        LearnerKind::Nb,
        LearnerKind::Svm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LearnerKind::Lr => "LR",
            LearnerKind::Knn => "KNN",
            LearnerKind::Dt => "DT",
            LearnerKind::Rf => "RF",
            LearnerKind::Nb => "NB",
            LearnerKind::Svm => "SVM",
        }
    }
}

impl fmt::Display for LearnerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LearnerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LearnerKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Config(format!("unknown learner {s:?}")))
    }
}

/// Fixed hyperparameters. No tuning happens anywhere.
#[derive(Debug, Clone, PartialEq)]
pub struct LearnerParams {
    pub knn_k: usize,
    pub lr_iterations: usize,
    pub lr_step: f64,
    pub dt_max_depth: Option<usize>,
    pub min_leaf: usize,
    pub rf_trees: usize,
    /// Features tried per split; `None` = floor(sqrt(p)).
    pub rf_max_features: Option<usize>,
    pub rf_bootstrap: bool,
    pub svm_c: f64,
    pub svm_iterations: usize,
    pub svm_step: f64,
    pub execution: Execution,
}

impl Default for LearnerParams {
    fn default() -> Self {
        Self {
            knn_k: 5,
            lr_iterations: 1000,
            lr_step: 0.1,
            dt_max_depth: None,
            min_leaf: 1,
            rf_trees: 100,
            rf_max_features: None,
            rf_bootstrap: true,
            svm_c: 1.0,
            svm_iterations: 1000,
            svm_step: 0.1,
            execution: Execution::default(),
        }
    }
}

#[derive(Debug, Clone)]
enum Fitted {
    Lr(LogisticRegression),
    Knn(Knn),
    Dt(DecisionTree),
    Rf(RandomForest),
    Nb(GaussianNb),
    Svm(LinearSvm),
}

/// A trained classifier bound to the feature columns it was trained on.
#[derive(Debug, Clone)]
pub struct Model {
    kind: LearnerKind,
    feature_names: Vec<String>,
    fitted: Fitted,
}

/// Train `kind` on `data`.
pub fn train(
    kind: LearnerKind,
    params: &LearnerParams,
    data: &Dataset,
    seed: u64,
) -> Result<Model> {
    if data.len() < 2 {
        return Err(Error::InvalidInput(
            "training needs at least two rows".into(),
        ));
    }
    if !data.has_both_classes() {
        return Err(Error::SingleClass);
    }
    let fitted = match kind {
        LearnerKind::Lr => Fitted::Lr(LogisticRegression::fit(
            data,
            params.lr_iterations,
            params.lr_step,
        )),
        LearnerKind::Knn => Fitted::Knn(Knn::fit(data, params.knn_k)),
        LearnerKind::Dt => Fitted::Dt(DecisionTree::fit(
            data,
            &TreeParams {
                max_depth: params.dt_max_depth,
                min_leaf: params.min_leaf,
                max_features: None,
            },
            seed,
        )),
        LearnerKind::Rf => Fitted::Rf(RandomForest::fit(
            data,
            params.rf_trees,
            params.rf_bootstrap,
            &TreeParams {
                max_depth: params.dt_max_depth,
                min_leaf: params.min_leaf,
                max_features: Some(
                    params
                        .rf_max_features
                        .unwrap_or_else(|| (data.width() as f64).sqrt().floor() as usize)
                        .clamp(1, data.width().max(1)),
                ),
            },
            seed,
            params.execution,
        )),
        LearnerKind::Nb => Fitted::Nb(GaussianNb::fit(data)),
        LearnerKind::Svm => Fitted::Svm(LinearSvm::fit(
            data,
            params.svm_c,
            params.svm_iterations,
            params.svm_step,
        )),
    };
    Ok(Model {
        kind,
        feature_names: data.feature_names.clone(),
        fitted,
    })
}

impl Model {
    pub fn kind(&self) -> LearnerKind {
        self.kind
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    fn raw(&self, x: &[f64]) -> f64 {
        match &self.fitted {
            Fitted::Lr(m) => m.proba(x),
            Fitted::Knn(m) => m.proba(x),
            Fitted::Dt(m) => m.proba(x),
            Fitted::Rf(m) => m.proba(x),
            Fitted::Nb(m) => m.proba(x),
            Fitted::Svm(m) => m.proba(x),
        }
    }

    /// Probability that `x` is defective, clamped to `[1e-6, 1 - 1e-6]`.
    pub fn predict_proba(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.feature_names.len() {
            return Err(Error::ColumnMismatch {
                expected: self.feature_names.clone(),
                actual: vec![format!("<{} unnamed columns>", x.len())],
            });
        }
        let p = self.raw(x);
        let p = if p.is_finite() { p } else { 0.5 };
        Ok(p.clamp(PROBA_FLOOR, 1.0 - PROBA_FLOOR))
    }

    /// Defective when the probability is at least 0.5.
    pub fn classify(&self, x: &[f64]) -> Result<Label> {
        Ok(Label::from_bool(
            self.predict_proba(x)? >= DEFAULT_THRESHOLD,
        ))
    }

    /// Probabilities for every row. Column names and order must match training.
    pub fn predict_dataset(&self, data: &Dataset) -> Result<Vec<f64>> {
        if data.feature_names != self.feature_names {
            return Err(Error::ColumnMismatch {
                expected: self.feature_names.clone(),
                actual: data.feature_names.clone(),
            });
        }
        data.rows
            .iter()
            .map(|r| self.predict_proba(&r.features))
            .collect()
    }
}

pub(crate) fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}
