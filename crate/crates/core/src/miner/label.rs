//! Keyword fix detection and blame tracing to bug-inducing commits.

use std::collections::{BTreeSet, HashMap};
use std::path::Path;

use regex::Regex;

use super::git;
use super::{CommitRecord, Label};
use crate::Result;

pub const DEFAULT_KEYWORDS: &[&str] = &[
    "bug", "fix", "fixes", "fixed", "defect", "patch", "error", "crash", "fail", "wrong",
];

/// Case-insensitive, whole-word keyword matcher for commit messages.
#[derive(Debug, Clone)]
pub struct KeywordSet {
    words: Vec<String>,
    pattern: Option<Regex>,
}

impl KeywordSet {
    pub fn new<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let words: Vec<String> = words
            .into_iter()
            .map(|w| w.as_ref().trim().to_lowercase())
            .filter(|w| !w.is_empty())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let pattern = (!words.is_empty()).then(|| {
            let alternation: Vec<String> = words.iter().map(|w| regex::escape(w)).collect();
            Regex::new(&format!(r"(?i)\b(?:{})\b", alternation.join("|")))
                .expect("escaped keywords form a valid regex")
        });
        Self { words, pattern }
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn matches(&self, message: &str) -> bool {
        self.pattern.as_ref().is_some_and(|p| p.is_match(message))
    }
}

impl Default for KeywordSet {
    fn default() -> Self {
        Self::new(DEFAULT_KEYWORDS)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct LabelReport {
    pub fix_commits: usize,
    pub defective: usize,
    /// (fix commit, bug-inducing commit) pairs found by blame.
    pub traces: Vec<(String, String)>,
    /// Blame hits pointing outside the mined history.
    pub dropped_traces: usize,
}

/// Line ranges removed or modified by a change, in the parent's version.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct DeletedRanges {
    pub path: String,
    /// (first line, count), 1-based.
    pub ranges: Vec<(u64, u64)>,
}

/// Parse `git diff -U0` output into the old-side ranges of each file.
pub(crate) fn parse_deleted_ranges(diff: &str) -> Vec<DeletedRanges> {
    let mut out: Vec<DeletedRanges> = Vec::new();
    let mut current: Option<DeletedRanges> = None;
    for line in diff.lines() {
        if line.starts_with("diff --git ") {
            out.extend(current.take().filter(|c| !c.ranges.is_empty()));
        } else if let Some(old) = line.strip_prefix("--- ") {
            current = old
                .strip_prefix("a/")
                .or_else(|| old.strip_prefix("\"a/").map(|p| p.trim_end_matches('"')))
                .map(|p| DeletedRanges {
                    path: git::unquote(p),
                    ranges: Vec::new(),
                });
        } else if let Some(hunk) = line.strip_prefix("@@ -") {
            let Some(cur) = current.as_mut() else {
                continue;
            };
            let old = hunk.split_whitespace().next().unwrap_or("");
            let (start, count) = match old.split_once(',') {
                Some((s, c)) => (s.parse().unwrap_or(0), c.parse().unwrap_or(0)),
                None => (old.parse().unwrap_or(0), 1),
            };
            if count > 0 && start > 0 {
                cur.ranges.push((start, count));
            }
        }
    }
    out.extend(current.filter(|c| !c.ranges.is_empty()));
    out
}

/// Commit hashes named in `git blame --porcelain` output.
pub(crate) fn parse_blame_hashes(porcelain: &str) -> BTreeSet<String> {
    porcelain
        .lines()
        .filter(|l| !l.starts_with('\t'))
        .filter_map(|l| l.split_whitespace().next())
        .filter(|tok| {
            (tok.len() == 40 || tok.len() == 64) && tok.bytes().all(|b| b.is_ascii_hexdigit())
        })
        .map(str::to_string)
        .collect()
}

/// Mark fix commits by keyword, then blame the lines each fix removes or
/// modifies back to the commits that introduced them and label those
/// defective. Everything else is clean.
pub fn label_commits(
    repo: &Path,
    commits: &mut [CommitRecord],
    keywords: &KeywordSet,
) -> Result<LabelReport> {
    let index: HashMap<String, usize> = commits
        .iter()
        .enumerate()
        .map(|(i, c)| (c.hash.clone(), i))
        .collect();
    let mut report = LabelReport::default();
    let mut defective = vec![false; commits.len()];

    for commit in commits.iter_mut() {
        commit.fix = keywords.matches(&commit.message);
    }

    for commit in commits.iter().filter(|c| c.fix) {
        report.fix_commits += 1;
        let Some(parent) = commit.parent.as_deref() else {
            continue;
        };
        let diff = git::run(
            repo,
            &[
                "diff",
                "-U0",
                "--no-renames",
                "--no-color",
                "--no-ext-diff",
                parent,
                &commit.hash,
            ],
        )?;
        let mut induced = BTreeSet::new();
        for file in parse_deleted_ranges(&diff) {
            let mut args: Vec<String> = vec!["blame".into(), "--porcelain".into()];
            for (start, count) in &file.ranges {
                args.push("-L".into());
                args.push(format!("{start},+{count}"));
            }
            args.extend([parent.to_string(), "--".into(), file.path.clone()]);
            let args: Vec<&str> = args.iter().map(String::as_str).collect();
            match git::run(repo, &args) {
                Ok(out) => induced.extend(parse_blame_hashes(&out)),
                Err(e) => {
                    log::warn!("blame of {} in {parent} failed: {e}", file.path);
                    report.dropped_traces += 1;
                }
            }
        }
        for hash in induced {
            match index.get(&hash) {
                Some(&i) => {
                    defective[i] = true;
                    report.traces.push((commit.hash.clone(), hash));
                }
                None => {
                    log::info!(
                        "trace from {} to {hash} leaves mined history, dropped",
                        commit.hash
                    );
                    report.dropped_traces += 1;
                }
            }
        }
    }

    for (commit, d) in commits.iter_mut().zip(defective) {
        commit.label = Label::from_bool(d);
    }
    report.defective = commits.iter().filter(|c| c.is_defective()).count();
    Ok(report)
}
