use std::collections::{BTreeSet, HashMap, HashSet};

use super::git::RawCommit;
use super::{CommitRecord, Label, SECONDS_PER_DAY};

const SECONDS_PER_YEAR: f64 = 365.25 * SECONDS_PER_DAY;

/// Shannon entropy (base 2) of the distribution of modified lines across
/// files. Zero when nothing measurable changed.
pub fn entropy_of(modified_lines: &[u64]) -> f64 {
    let total: u64 = modified_lines.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let total = total as f64;
    let h: f64 = modified_lines
        .iter()
        .filter(|&&n| n > 0)
        .map(|&n| {
            let p = n as f64 / total;
            -p * p.log2()
        })
        .sum();
    h.max(0.0)
}

fn subsystem(path: &str) -> &str {
    match path.split_once('/') {
        Some((root, _)) => root,
        None => "",
    }
}

fn directory(path: &str) -> &str {
    match path.rsplit_once('/') {
        Some((dir, _)) => dir,
        None => "",
    }
}

#[derive(Default)]
struct FileHistory {
    lines: i64,
    authors: BTreeSet<String>,
    last_change: Option<i64>,
    commits: Vec<usize>,
}

struct AuthorCommit {
    timestamp: i64,
    subsystems: BTreeSet<String>,
}

/// Compute change metrics for commits in chronological order. Commits with no
/// file changes are dropped with a warning. Labels are left `Clean`.
pub fn compute_features(raw: &[RawCommit]) -> Vec<CommitRecord> {
    let mut files: HashMap<&str, FileHistory> = HashMap::new();
    let mut authors: HashMap<&str, Vec<AuthorCommit>> = HashMap::new();
    let mut out = Vec::with_capacity(raw.len());

    for commit in raw {
        if commit.files.is_empty() {
            log::warn!("commit {} changes no files, skipped", commit.hash);
            continue;
        }
        let idx = out.len();
        let t = commit.timestamp;

        let subsystems: BTreeSet<String> = commit
            .files
            .iter()
            .map(|f| subsystem(&f.path).to_string())
            .collect();
        let directories: BTreeSet<&str> = commit.files.iter().map(|f| directory(&f.path)).collect();
        let paths: BTreeSet<&str> = commit.files.iter().map(|f| f.path.as_str()).collect();

        let modified: Vec<u64> = commit.files.iter().map(|f| f.added + f.deleted).collect();
        let la: u64 = commit.files.iter().map(|f| f.added).sum();
        let ld: u64 = commit.files.iter().map(|f| f.deleted).sum();

        let mut lt_sum = 0.0;
        let mut age_sum = 0.0;
        let mut aged = 0usize;
        let mut devs: BTreeSet<&str> = BTreeSet::new();
        let mut prior: HashSet<usize> = HashSet::new();
        for path in &paths {
            if let Some(h) = files.get(path) {
                lt_sum += h.lines.max(0) as f64;
                if let Some(last) = h.last_change {
                    age_sum += ((t - last) as f64 / SECONDS_PER_DAY).max(0.0);
                    aged += 1;
                }
                devs.extend(h.authors.iter().map(String::as_str));
                prior.extend(h.commits.iter().copied());
            }
        }
        let nf = paths.len();
        let lt = lt_sum / nf as f64;
        let age = if aged == 0 {
            0.0
        } else {
            age_sum / aged as f64
        };

        let history = authors.get(commit.author.as_str());
        let exp = history.map_or(0, Vec::len);
        let rexp = history.map_or(0.0, |h| {
            h.iter()
                .map(|c| 1.0 / (1.0 + ((t - c.timestamp) as f64 / SECONDS_PER_YEAR).max(0.0)))
                .sum()
        });
        let sexp = history.map_or(0, |h| {
            h.iter()
                .filter(|c| !c.subsystems.is_disjoint(&subsystems))
                .count()
        });

        out.push(CommitRecord {
            hash: commit.hash.clone(),
            author: commit.author.clone(),
            timestamp: t,
            ns: subsystems.len() as u64,
            nd: directories.len() as u64,
            nf: nf as u64,
            entropy: entropy_of(&modified),
            la,
            ld,
            lt,
            fix: false,
            ndev: devs.len() as u64,
            age,
            nuc: prior.len() as u64,
            exp: exp as u64,
            rexp,
            sexp: sexp as u64,
            label: Label::Clean,
            release: None,
            message: commit.message.clone(),
            parent: commit.parents.first().cloned(),
        });

        for change in &commit.files {
            let h = files.entry(change.path.as_str()).or_default();
            h.lines += change.added as i64 - change.deleted as i64;
            h.authors.insert(commit.author.clone());
            h.last_change = Some(t);
            h.commits.push(idx);
        }
        authors
            .entry(commit.author.as_str())
            .or_default()
            .push(AuthorCommit {
                timestamp: t,
                subsystems,
            });
    }
    out
}
