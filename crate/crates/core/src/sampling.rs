//! Training-window policies.
//!
//! | policy | training commits for release `R_i` |
//! |--------|------------------------------------|
//! | ALL    | every commit before `R_i`'s first commit |
//! | M6/M3  | commits in the 180/90 days before that instant |
//! | RR     | commits of release `R_{i-1}` |
//! | E      | 25 defective + 25 clean drawn from the project's first 150 commits |
//!
//! A "month" is 30 days.

use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;

use crate::miner::{CommitRecord, ReleaseInfo, SECONDS_PER_DAY};
use crate::preprocess::{engineer_features, Dataset};
use crate::{seed, Error, Result};

pub const E_POOL_SIZE: usize = 150;
pub const E_PER_CLASS: usize = 25;
const MONTH_SECONDS: i64 = 30 * SECONDS_PER_DAY as i64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Policy {
    All,
    M6,
    M3,
    Rr,
    E,
}

impl Policy {
    pub const ALL_POLICIES: [Policy; 5] =
        [Policy::All, Policy::M6, Policy::M3, Policy::Rr, Policy::E];

    pub fn name(self) -> &'static str {
        match self {
            Policy::All => "ALL",
            Policy::M6 => "M6",
            Policy::M3 => "M3",
            Policy::Rr => "RR",
            Policy::E => "E",
        }
    }

    /// Policies whose windows are not class-balanced by construction.
    pub fn needs_balancing(self) -> bool {
        self != Policy::E
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Policy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Policy::ALL_POLICIES
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Config(format!("unknown policy {s:?}")))
    }
}

/// A policy with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolicySpec {
    pub policy: Policy,
    pub pool_size: usize,
    pub per_class: usize,
}

impl From<Policy> for PolicySpec {
    fn from(policy: Policy) -> Self {
        Self {
            policy,
            pool_size: E_POOL_SIZE,
            per_class: E_PER_CLASS,
        }
    }
}

/// Why a (release, policy) cell has no training set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SkipReason {
    /// The release under test has no commits.
    EmptyRelease,
    /// No commits fall inside the window.
    EmptyWindow,
    /// The window holds only one class.
    SingleClass,
    /// E: the first commits of the project do not all precede the release.
    PoolIncomplete,
    /// The test release has a single class and scoring such releases is off.
    DegenerateTest,
    /// Training or prediction failed.
    Failed(String),
}

impl SkipReason {
    pub fn code(&self) -> &'static str {
        match self {
            SkipReason::EmptyRelease => "empty_release",
            SkipReason::EmptyWindow => "empty_window",
            SkipReason::SingleClass => "single_class",
            SkipReason::PoolIncomplete => "pool_incomplete",
            SkipReason::DegenerateTest => "degenerate_test",
            SkipReason::Failed(_) => "failed",
        }
    }
}

impl fmt::Display for SkipReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SkipReason::Failed(msg) => write!(f, "failed: {msg}"),
            other => f.write_str(other.code()),
        }
    }
}

/// Training commits chosen by a policy, in chronological order.
#[derive(Debug, Clone)]
pub struct TrainingWindow<'a> {
    pub commits: Vec<&'a CommitRecord>,
    /// E only: the pool lacked 25 of some label and the sample was filled
    /// from the other label.
    pub e_fallback: bool,
}

impl TrainingWindow<'_> {
    pub fn class_counts(&self) -> (usize, usize) {
        let d = self.commits.iter().filter(|c| c.is_defective()).count();
        (d, self.commits.len() - d)
    }
}

/// Commits of the release under test.
pub fn test_commits<'a>(
    history: &'a [CommitRecord],
    release: &ReleaseInfo,
) -> Vec<&'a CommitRecord> {
    history
        .iter()
        .filter(|c| c.release == Some(release.index))
        .collect()
}

/// The start instant of a release: the timestamp of its first commit.
fn release_start(history: &[CommitRecord], release: &ReleaseInfo) -> Option<i64> {
    release.first_commit_time.or_else(|| {
        test_commits(history, release)
            .iter()
            .map(|c| c.timestamp)
            .min()
    })
}

/// Pick the training commits for `release` under `spec`. `history` must be
/// the project's labeled, release-assigned commits in chronological order.
pub fn select_window<'a>(
    spec: &PolicySpec,
    history: &'a [CommitRecord],
    release: &ReleaseInfo,
    seed: u64,
) -> std::result::Result<TrainingWindow<'a>, SkipReason> {
    let start = release_start(history, release).ok_or(SkipReason::EmptyRelease)?;
    let before = |c: &&CommitRecord| c.timestamp < start;
    let mut e_fallback = false;

    let commits: Vec<&CommitRecord> = match spec.policy {
        Policy::All => history.iter().filter(before).collect(),
        Policy::M6 | Policy::M3 => {
            let months = if spec.policy == Policy::M6 { 6 } else { 3 };
            let from = start - months * MONTH_SECONDS;
            history
                .iter()
                .filter(before)
                .filter(|c| c.timestamp >= from)
                .collect()
        }
        Policy::Rr => match release.index.checked_sub(1) {
            None => Vec::new(),
            Some(prev) => history
                .iter()
                .filter(|c| c.release == Some(prev))
                .filter(before)
                .collect(),
        },
        Policy::E => {
            if history.len() < spec.pool_size {
                return Err(SkipReason::PoolIncomplete);
            }
            let pool = &history[..spec.pool_size];
            if pool.iter().any(|c| c.timestamp >= start) {
                return Err(SkipReason::PoolIncomplete);
            }
            let (defective, clean): (Vec<usize>, Vec<usize>) =
                (0..pool.len()).partition(|&i| pool[i].is_defective());
            if defective.is_empty() || clean.is_empty() {
                return Err(SkipReason::SingleClass);
            }
            let want = 2 * spec.per_class;
            let (take_d, take_c) =
                if defective.len() >= spec.per_class && clean.len() >= spec.per_class {
                    (spec.per_class, spec.per_class)
                } else {
                    e_fallback = true;
                    if defective.len() < clean.len() {
                        (defective.len(), (want - defective.len()).min(clean.len()))
                    } else {
                        ((want - clean.len()).min(defective.len()), clean.len())
                    }
                };
            let mut rng = seed::rng(seed);
            let mut chosen: Vec<usize> = sample(&mut rng, defective.len(), take_d)
                .into_iter()
                .map(|i| defective[i])
                .chain(
                    sample(&mut rng, clean.len(), take_c)
                        .into_iter()
                        .map(|i| clean[i]),
                )
                .collect();
            chosen.sort_unstable();
            chosen.into_iter().map(|i| &pool[i]).collect()
        }
    };

    if commits.is_empty() {
        return Err(SkipReason::EmptyWindow);
    }
    let window = TrainingWindow {
        commits,
        e_fallback,
    };
    let (d, c) = window.class_counts();
    if d == 0 || c == 0 {
        return Err(SkipReason::SingleClass);
    }
    Ok(window)
}

/// [`select_window`] followed by feature engineering.
pub fn build_train_set(
    spec: &PolicySpec,
    history: &[CommitRecord],
    release: &ReleaseInfo,
    seed: u64,
) -> std::result::Result<Dataset, SkipReason> {
    select_window(spec, history, release, seed).map(|w| engineer_features(w.commits))
}

/// Number of training commits that are not strictly earlier than every test
/// commit. Zero means no leakage.
pub fn leakage_violations(window: &TrainingWindow<'_>, test: &[&CommitRecord]) -> usize {
    let Some(first_test) = test.iter().map(|c| c.timestamp).min() else {
        return 0;
    };
    let test_hashes: std::collections::HashSet<&str> =
        test.iter().map(|c| c.hash.as_str()).collect();
    window
        .commits
        .iter()
        .filter(|c| c.timestamp >= first_test || test_hashes.contains(c.hash.as_str()))
        .count()
}
