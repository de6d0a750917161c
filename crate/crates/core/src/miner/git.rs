use std::path::Path;
use std::process::Command;

use crate::{Error, Result};

/// A commit as read from `git log`, before feature extraction.
#[derive(Debug, Clone, PartialEq)]
pub struct RawCommit {
    pub hash: String,
    pub parents: Vec<String>,
    pub author: String,
    pub timestamp: i64,
    pub message: String,
    pub files: Vec<FileChange>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FileChange {
    pub path: String,
    pub added: u64,
    pub deleted: u64,
    pub binary: bool,
}

const RECORD_SEP: char = '\x1e';
const FIELD_SEP: char = '\x1f';
const HEADER_END: char = '\x1d';

pub(crate) fn run(repo: &Path, args: &[&str]) -> Result<String> {
    let output = Command::new("git")
        .arg("-C")
        .arg(repo)
        .args(["-c", "core.quotepath=off", "-c", "log.showSignature=false"])
        .args(args)
        .env("LC_ALL", "C")
        .output()
        .map_err(|e| Error::Git {
            repo: repo.to_path_buf(),
            message: format!("cannot spawn git: {e}"),
        })?;
    if !output.status.success() {
        return Err(Error::Git {
            repo: repo.to_path_buf(),
            message: format!(
                "`git {}` exited with {}: {}",
                args.join(" "),
                output.status,
                String::from_utf8_lossy(&output.stderr).trim()
            ),
        });
    }
    Ok(String::from_utf8_lossy(&output.stdout).into_owned())
}

/// Non-merge commits, oldest first.
pub(crate) fn log(repo: &Path) -> Result<Vec<RawCommit>> {
    let out = run(
        repo,
        &[
            "log",
            "--reverse",
            "--date-order",
            "--no-merges",
            "--no-renames",
            "--numstat",
            "--format=%x1e%H%x1f%P%x1f%ae%x1f%at%x1f%B%x1d",
            "HEAD",
        ],
    )?;
    parse_log(&out).map_err(|message| Error::Git {
        repo: repo.to_path_buf(),
        message,
    })
}

pub(crate) fn merge_count(repo: &Path) -> Result<usize> {
    let out = run(repo, &["rev-list", "--count", "--merges", "HEAD"])?;
    out.trim().parse().map_err(|_| Error::Git {
        repo: repo.to_path_buf(),
        message: format!("unexpected rev-list output {out:?}"),
    })
}

/// Parse the output of `git log --numstat` produced with the record and field
/// separators used by [`log`].
pub fn parse_log(out: &str) -> std::result::Result<Vec<RawCommit>, String> {
    let mut commits = Vec::new();
    for record in out.split(RECORD_SEP).filter(|r| !r.trim().is_empty()) {
        let (header, stats) = record
            .split_once(HEADER_END)
            .ok_or_else(|| format!("malformed log record {record:?}"))?;
        let fields: Vec<&str> = header.splitn(5, FIELD_SEP).collect();
        let [hash, parents, author, time, message] = fields[..] else {
            return Err(format!("expected 5 header fields, got {}", fields.len()));
        };
        let timestamp = time
            .trim()
            .parse()
            .map_err(|_| format!("bad timestamp {time:?} in {hash}"))?;
        let files = stats
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(parse_numstat)
            .collect::<std::result::Result<Vec<_>, _>>()?;
        commits.push(RawCommit {
            hash: hash.trim().to_string(),
            parents: parents.split_whitespace().map(str::to_string).collect(),
            author: author.trim().to_lowercase(),
            timestamp,
            message: message.trim_end().to_string(),
            files,
        });
    }
    Ok(commits)
}

fn parse_numstat(line: &str) -> std::result::Result<FileChange, String> {
    let mut parts = line.splitn(3, '\t');
    let (Some(added), Some(deleted), Some(path)) = (parts.next(), parts.next(), parts.next())
    else {
        return Err(format!("malformed numstat line {line:?}"));
    };
    let path = unquote(path);
    if added == "-" && deleted == "-" {
        return Ok(FileChange {
            path,
            added: 0,
            deleted: 0,
            binary: true,
        });
    }
    let parse = |s: &str| {
        s.parse::<u64>()
            .map_err(|_| format!("bad numstat count in {line:?}"))
    };
    Ok(FileChange {
        path,
        added: parse(added)?,
        deleted: parse(deleted)?,
        binary: false,
    })
}

/// Strip the C-style quoting git applies to unusual path names.
pub(crate) fn unquote(path: &str) -> String {
    let Some(inner) = path.strip_prefix('"').and_then(|p| p.strip_suffix('"')) else {
        return path.to_string();
    };
    let mut out = String::with_capacity(inner.len());
    let mut chars = inner.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            Some(other) => out.push(other),
            None => {}
        }
    }
    out
}
