//! Experiment configuration in a flat `key = value` format.
//!
//! ```text
//! # one project CSV per entry, relative to this file
//! projects = data/alpha.csv, data/beta.csv
//! policies = ALL, M6, M3, RR, E
//! learners = LR, NB
//! seed = 7
//! output = out
//! ```

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use crate::exec::Execution;
use crate::learners::{LearnerKind, LearnerParams};
use crate::sampling::Policy;
use crate::stats::SkConfig;
use crate::{Error, Result};

/// How policy E draws its sample across the releases of one project.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ESampling {
    /// A fresh 25+25 draw for each release under test.
    #[default]
    PerRelease,
    /// One draw per project, reused for every release.
    PerProject,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub projects: Vec<PathBuf>,
    pub policies: Vec<Policy>,
    pub learners: Vec<LearnerKind>,
    pub seed: u64,
    /// Policies whose training sets are balanced with SMOTE.
    pub smote: BTreeSet<Policy>,
    pub smote_k: usize,
    pub cfs: bool,
    /// Run CFS on the real training rows before SMOTE (otherwise after).
    pub cfs_before_smote: bool,
    pub stats: SkConfig,
    pub output: PathBuf,
    /// Score test releases that hold a single class (flagged) instead of
    /// marking them not applicable.
    pub score_degenerate: bool,
    pub e_sampling: ESampling,
    /// Policy sets whose treatments are ranked together, each restricted to
    /// the releases where every member policy is applicable.
    pub comparisons: Vec<Vec<Policy>>,
    /// Apply the project curation filters (needs a `<project>.meta` file next
    /// to each CSV).
    pub curate: bool,
    /// Write the CFS selection of every training set as JSON lines.
    pub debug_dump: bool,
    pub learner_params: LearnerParams,
    pub execution: Execution,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            projects: Vec::new(),
            policies: Policy::ALL_POLICIES.to_vec(),
            learners: LearnerKind::ALL.to_vec(),
            seed: 1,
            smote: Policy::ALL_POLICIES
                .into_iter()
                .filter(|p| p.needs_balancing())
                .collect(),
            smote_k: crate::preprocess::DEFAULT_SMOTE_K,
            cfs: true,
            cfs_before_smote: true,
            stats: SkConfig::default(),
            output: PathBuf::from("results"),
            score_degenerate: true,
            e_sampling: ESampling::PerRelease,
            comparisons: default_comparisons(&Policy::ALL_POLICIES),
            curate: true,
            debug_dump: false,
            learner_params: LearnerParams::default(),
            execution: Execution::default(),
        }
    }
}

fn bad(key: &str, value: &str, why: impl std::fmt::Display) -> Error {
    Error::Config(format!("{key} = {value:?}: {why}"))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(bad(key, value, "expected true or false")),
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e| bad(key, value, e))
}

fn parse_list<T: std::str::FromStr<Err = Error>>(value: &str, sep: char) -> Result<Vec<T>> {
    value
        .split(sep)
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::parse)
        .collect()
}

/// Parse `ALL+M6+M3+E; RR+E`.
pub fn parse_comparisons(value: &str) -> Result<Vec<Vec<Policy>>> {
    value
        .split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|group| parse_list(group, '+'))
        .collect()
}

/// The two standard comparisons, kept when all their policies are run; a
/// single comparison of every configured policy otherwise.
pub fn default_comparisons(policies: &[Policy]) -> Vec<Vec<Policy>> {
    use Policy::*;
    let standard = [vec![All, M6, M3, E], vec![Rr, E]];
    let kept: Vec<Vec<Policy>> = standard
        .into_iter()
        .filter(|c| c.iter().all(|p| policies.contains(p)))
        .collect();
    if kept.is_empty() {
        vec![policies.to_vec()]
    } else {
        kept
    }
}

impl ExperimentConfig {
    /// Parse config text. Relative paths resolve against `base_dir`.
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        let mut comparisons = None;
        let mut seen = BTreeSet::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| {
                    Error::Config(format!("line {}: expected key = value", lineno + 1))
                })?;
            if !seen.insert(key.to_string()) {
                return Err(Error::Config(format!(
                    "line {}: duplicate key {key}",
                    lineno + 1
                )));
            }
            match key {
                "projects" => {
                    cfg.projects = value
                        .split(',')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(|p| base_dir.join(p))
                        .collect()
                }
                "policies" => cfg.policies = parse_list(value, ',')?,
                "learners" => cfg.learners = parse_list(value, ',')?,
                "seed" => cfg.seed = parse_num(key, value)?,
                "smote" => cfg.smote = parse_list(value, ',')?.into_iter().collect(),
                "smote_k" => cfg.smote_k = parse_num(key, value)?,
                "cfs" => cfg.cfs = parse_bool(key, value)?,
                "cfs_before_smote" => cfg.cfs_before_smote = parse_bool(key, value)?,
                "alpha" => cfg.stats.alpha = parse_num(key, value)?,
                "bootstrap_iters" => cfg.stats.bootstrap_iters = parse_num(key, value)?,
                "a12_threshold" => cfg.stats.a12_threshold = parse_num(key, value)?,
                "output" => cfg.output = base_dir.join(value),
                "score_degenerate" => cfg.score_degenerate = parse_bool(key, value)?,
                "e_sampling" => {
                    cfg.e_sampling = match value {
                        "per_release" => ESampling::PerRelease,
                        "per_project" => ESampling::PerProject,
                        _ => return Err(bad(key, value, "expected per_release or per_project")),
                    }
                }
                "comparisons" => comparisons = Some(parse_comparisons(value)?),
                "curate" => cfg.curate = parse_bool(key, value)?,
                "debug_dump" => cfg.debug_dump = parse_bool(key, value)?,
                "rf_trees" => cfg.learner_params.rf_trees = parse_num(key, value)?,
                "knn_k" => cfg.learner_params.knn_k = parse_num(key, value)?,
                "lr_iterations" => cfg.learner_params.lr_iterations = parse_num(key, value)?,
                "svm_iterations" => cfg.learner_params.svm_iterations = parse_num(key, value)?,
                "parallel" => {
                    cfg.execution = if parse_bool(key, value)? {
                        Execution::Parallel
                    } else {
                        Execution::Sequential
                    }
                }
                _ => {
                    return Err(Error::Config(format!(
                        "line {}: unknown key {key}",
                        lineno + 1
                    )))
                }
            }
        }
        cfg.comparisons = comparisons.unwrap_or_else(|| default_comparisons(&cfg.policies));
        if !seen.contains("output") {
            cfg.output = base_dir.join(&cfg.output);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base)
    }

    pub fn validate(&self) -> Result<()> {
        if self.projects.is_empty() {
            return Err(Error::Config("at least one project is required".into()));
        }
        if self.policies.is_empty() {
            return Err(Error::Config("at least one policy is required".into()));
        }
        if self.learners.is_empty() {
            return Err(Error::Config("at least one learner is required".into()));
        }
        let dup = |n: usize, m: usize| n != m;
        if dup(
            self.policies.iter().collect::<BTreeSet<_>>().len(),
            self.policies.len(),
        ) || dup(
            self.learners.iter().collect::<BTreeSet<_>>().len(),
            self.learners.len(),
        ) {
            return Err(Error::Config(
                "policies and learners must not repeat".into(),
            ));
        }
        if self.smote_k < 1 {
            return Err(Error::Config("smote_k must be at least 1".into()));
        }
        if self.learner_params.rf_trees < 1 || self.learner_params.knn_k < 1 {
            return Err(Error::Config(
                "rf_trees and knn_k must be at least 1".into(),
            ));
        }
        for c in &self.comparisons {
            if c.is_empty() {
                return Err(Error::Config("empty comparison".into()));
            }
            if let Some(p) = c.iter().find(|p| !self.policies.contains(p)) {
                return Err(Error::Config(format!(
                    "comparison uses policy {p}, which is not run"
                )));
            }
        }
        self.stats.validate()
    }
}
