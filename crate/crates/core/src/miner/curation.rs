//! Project curation filters.

use std::fmt;
use std::path::Path;

use super::{CommitRecord, ReleaseInfo, SECONDS_PER_DAY};
use crate::{Error, Result};

pub const MIN_STARS: u64 = 1000;
pub const MIN_DEFECTIVE_RATIO: f64 = 0.01;
pub const MIN_RELEASES: usize = 2;
pub const MIN_LIFESPAN_MONTHS: f64 = 12.0;
pub const MIN_PER_CLASS: usize = 5;

/// Externally supplied project metadata, read from `key: value` lines.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProjectMeta {
    pub stars: Option<u64>,
    pub license: Option<String>,
}

impl ProjectMeta {
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let mut meta = ProjectMeta::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = |message: String| Error::Parse {
                path: path.to_path_buf(),
                line: i + 1,
                message,
            };
            let (key, value) = line
                .split_once(':')
                .ok_or_else(|| parse_err(format!("expected `key: value`, got {line:?}")))?;
            let value = value.trim();
            match key.trim().to_ascii_lowercase().as_str() {
                "stars" => {
                    meta.stars = Some(value.parse().map_err(|_| {
                        parse_err(format!("stars must be an integer, got {value:?}"))
                    })?)
                }
                "license" => meta.license = Some(value.to_string()),
                other => log::debug!("{}: ignoring metadata key {other}", path.display()),
            }
        }
        Ok(meta)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }

    pub fn has_license(&self) -> bool {
        self.license.as_deref().is_some_and(|l| {
            let l = l.trim().to_ascii_lowercase();
            !l.is_empty() && l != "none" && l != "noassertion"
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectSummary {
    pub commit_count: usize,
    pub defective_ratio: f64,
    pub release_count: usize,
    pub lifespan_months: f64,
    pub has_license: bool,
    pub star_count: u64,
    pub defective_count: usize,
    pub clean_count: usize,
}

pub fn summarize(
    commits: &[CommitRecord],
    releases: &[ReleaseInfo],
    meta: &ProjectMeta,
) -> ProjectSummary {
    let defective_count = commits.iter().filter(|c| c.is_defective()).count();
    let commit_count = commits.len();
    let span = match (
        commits.iter().map(|c| c.timestamp).min(),
        commits.iter().map(|c| c.timestamp).max(),
    ) {
        (Some(lo), Some(hi)) => (hi - lo) as f64,
        _ => 0.0,
    };
    ProjectSummary {
        commit_count,
        defective_ratio: if commit_count == 0 {
            0.0
        } else {
            defective_count as f64 / commit_count as f64
        },
        release_count: releases.len(),
        lifespan_months: span / (30.0 * SECONDS_PER_DAY),
        has_license: meta.has_license(),
        star_count: meta.stars.unwrap_or(0),
        defective_count,
        clean_count: commit_count - defective_count,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RejectReason {
    Stars,
    DefectiveRatio,
    Releases,
    Lifespan,
    License,
    MinDefective,
    MinClean,
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RejectReason::Stars => "fewer than 1000 stars",
            RejectReason::DefectiveRatio => "less than 1% defective commits",
            RejectReason::Releases => "fewer than two releases",
            RejectReason::Lifespan => "less than one year of activity",
            RejectReason::License => "no license",
            RejectReason::MinDefective => "fewer than 5 defective commits",
            RejectReason::MinClean => "fewer than 5 clean commits",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Curation {
    Accept,
    Reject(Vec<RejectReason>),
}

impl Curation {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Curation::Accept)
    }
}

/// Apply every curation filter and report all violations.
pub fn filter_project(summary: &ProjectSummary) -> Curation {
    let checks = [
        (summary.star_count < MIN_STARS, RejectReason::Stars),
        (
            summary.defective_ratio < MIN_DEFECTIVE_RATIO,
            RejectReason::DefectiveRatio,
        ),
        (summary.release_count < MIN_RELEASES, RejectReason::Releases),
        (
            summary.lifespan_months < MIN_LIFESPAN_MONTHS,
            RejectReason::Lifespan,
        ),
        (!summary.has_license, RejectReason::License),
        (
            summary.defective_count < MIN_PER_CLASS,
            RejectReason::MinDefective,
        ),
        (summary.clean_count < MIN_PER_CLASS, RejectReason::MinClean),
    ];
    let reasons: Vec<RejectReason> = checks
        .into_iter()
        .filter_map(|(violated, reason)| violated.then_some(reason))
        .collect();
    if reasons.is_empty() {
        Curation::Accept
    } else {
        Curation::Reject(reasons)
    }
}
