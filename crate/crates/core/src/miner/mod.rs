//! Mining a git repository into labeled, release-assigned commit records.
//!
//! The miner drives the system `git` binary and parses its porcelain output.
//! Features follow the usual JIT change-metrics catalogue (diffusion, size,
//! purpose, history, experience); labels come from a keyword-plus-blame
//! SZZ-lite pass.

mod csvio;
mod curation;
mod features;
mod git;
mod label;
mod releases;

use std::path::Path;

pub use csvio::{read_commits_csv, write_commits_csv, COMMITS_CSV_HEADER};
pub use curation::{
    filter_project, summarize, Curation, ProjectMeta, ProjectSummary, RejectReason,
};
pub use features::{compute_features, entropy_of};
pub use git::{parse_log, FileChange, RawCommit};
pub use label::{label_commits, KeywordSet, LabelReport, DEFAULT_KEYWORDS};
pub use releases::{assign_releases, extract_releases, releases_from_commits};

use crate::Result;

pub const SECONDS_PER_DAY: f64 = 86_400.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Clean,
    Defective,
}

impl Label {
    pub fn is_defective(self) -> bool {
        self == Label::Defective
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Clean => "clean",
            Label::Defective => "defective",
        }
    }

    pub fn from_bool(defective: bool) -> Self {
        if defective {
            Label::Defective
        } else {
            Label::Clean
        }
    }
}

/// One commit with its change metrics.
#[derive(Debug, Clone, PartialEq)]
pub struct CommitRecord {
    pub hash: String,
    pub author: String,
    /// Author time, UTC seconds.
    pub timestamp: i64,
    /// Modified subsystems (first path component).
    pub ns: u64,
    /// Modified directories (full parent path).
    pub nd: u64,
    pub nf: u64,
    pub entropy: f64,
    pub la: u64,
    pub ld: u64,
    /// Mean line count of the touched files before the change.
    pub lt: f64,
    pub fix: bool,
    pub ndev: u64,
    /// Mean days since the touched files were last changed.
    pub age: f64,
    pub nuc: u64,
    pub exp: u64,
    pub rexp: f64,
    pub sexp: u64,
    pub label: Label,
    pub release: Option<usize>,
    /// Commit message. Not persisted to CSV.
    pub message: String,
    /// First parent, used for blame tracing. Not persisted to CSV.
    pub parent: Option<String>,
}

impl CommitRecord {
    pub fn is_defective(&self) -> bool {
        self.label.is_defective()
    }
}

/// A release interval: every commit after the previous tag and at or before
/// `tag_time` belongs to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReleaseInfo {
    pub index: usize,
    pub tag_name: String,
    pub tag_time: i64,
    pub first_commit_time: Option<i64>,
    pub last_commit_time: Option<i64>,
    pub commit_count: usize,
}

/// Options for a full mining pass.
#[derive(Debug, Clone, Default)]
pub struct MineOptions {
    pub cutoff: Option<i64>,
    pub keywords: KeywordSet,
}

/// Output of [`mine_project`].
#[derive(Debug, Clone)]
pub struct MinedProject {
    pub commits: Vec<CommitRecord>,
    pub releases: Vec<ReleaseInfo>,
    pub labels: LabelReport,
    pub merges_skipped: usize,
    pub empty_skipped: usize,
}

/// Read commits and compute their features. Records come back unlabeled
/// (every label is `Clean`, `fix` unset) in chronological order.
pub fn mine_commits(repo: &Path, cutoff: Option<i64>) -> Result<Vec<CommitRecord>> {
    Ok(mine_commits_with_stats(repo, cutoff)?.0)
}

fn mine_commits_with_stats(
    repo: &Path,
    cutoff: Option<i64>,
) -> Result<(Vec<CommitRecord>, usize, usize)> {
    let mut raw = git::log(repo)?;
    if let Some(cutoff) = cutoff {
        raw.retain(|c| c.timestamp <= cutoff);
    }
    let merges = git::merge_count(repo)?;
    if merges > 0 {
        log::info!("{}: skipped {merges} merge commits", repo.display());
    }
    let before = raw.len();
    let commits = compute_features(&raw);
    let empty = before - commits.len();
    Ok((commits, merges, empty))
}

/// Mine, label and release-assign a repository in one pass.
pub fn mine_project(repo: &Path, options: &MineOptions) -> Result<MinedProject> {
    let (mut commits, merges_skipped, empty_skipped) =
        mine_commits_with_stats(repo, options.cutoff)?;
    let labels = label_commits(repo, &mut commits, &options.keywords)?;
    let mut releases = extract_releases(repo)?;
    assign_releases(&mut commits, &mut releases);
    Ok(MinedProject {
        commits,
        releases,
        labels,
        merges_skipped,
        empty_skipped,
    })
}
