use std::path::Path;

use super::{git, CommitRecord, ReleaseInfo};
use crate::Result;

/// Tags in time order. The release time is the author time of the tagged
/// commit; tags sharing a time collapse into one release (first name wins).
pub fn extract_releases(repo: &Path) -> Result<Vec<ReleaseInfo>> {
    let out = git::run(
        repo,
        &[
            "for-each-ref",
            "--format=%(refname:short)%1f%(authordate:unix)%1f%(*authordate:unix)",
            "refs/tags",
        ],
    )?;
    let mut tags: Vec<(i64, String)> = out
        .lines()
        .filter_map(|line| {
            let mut f = line.split('\x1f');
            let name = f.next()?.to_string();
            let direct = f.next().unwrap_or("").trim();
            let peeled = f.next().unwrap_or("").trim();
            let time = if peeled.is_empty() { direct } else { peeled };
            match time.parse() {
                Ok(t) => Some((t, name)),
                Err(_) => {
                    log::warn!("tag {name} does not point at a commit, ignored");
                    None
                }
            }
        })
        .collect();
    tags.sort();
    tags.dedup_by_key(|(t, _)| *t);
    Ok(tags
        .into_iter()
        .enumerate()
        .map(|(index, (tag_time, tag_name))| ReleaseInfo {
            index,
            tag_name,
            tag_time,
            first_commit_time: None,
            last_commit_time: None,
            commit_count: 0,
        })
        .collect())
}

/// Give each commit the index of the first release whose tag time is at or
/// after the commit. Commits after the last tag stay unassigned. Fills in the
/// per-release commit span.
pub fn assign_releases(commits: &mut [CommitRecord], releases: &mut [ReleaseInfo]) {
    for r in releases.iter_mut() {
        r.first_commit_time = None;
        r.last_commit_time = None;
        r.commit_count = 0;
    }
    for commit in commits.iter_mut() {
        let idx = releases.partition_point(|r| r.tag_time < commit.timestamp);
        commit.release = releases.get_mut(idx).map(|r| {
            r.first_commit_time = Some(
                r.first_commit_time
                    .map_or(commit.timestamp, |t| t.min(commit.timestamp)),
            );
            r.last_commit_time = Some(
                r.last_commit_time
                    .map_or(commit.timestamp, |t| t.max(commit.timestamp)),
            );
            r.commit_count += 1;
            r.index
        });
    }
}

/// Rebuild release spans from commits that already carry release indices
/// (e.g. loaded from a commits CSV). Indices with no commits are kept, empty.
pub fn releases_from_commits(commits: &[CommitRecord]) -> Vec<ReleaseInfo> {
    let Some(max) = commits.iter().filter_map(|c| c.release).max() else {
        return Vec::new();
    };
    let mut releases: Vec<ReleaseInfo> = (0..=max)
        .map(|index| ReleaseInfo {
            index,
            tag_name: format!("release-{index}"),
            tag_time: i64::MIN,
            first_commit_time: None,
            last_commit_time: None,
            commit_count: 0,
        })
        .collect();
    for c in commits {
        if let Some(r) = c.release.and_then(|i| releases.get_mut(i)) {
            r.first_commit_time = Some(
                r.first_commit_time
                    .map_or(c.timestamp, |t| t.min(c.timestamp)),
            );
            r.last_commit_time = Some(
                r.last_commit_time
                    .map_or(c.timestamp, |t| t.max(c.timestamp)),
            );
            r.commit_count += 1;
        }
    }
    let mut floor = i64::MIN;
    for r in &mut releases {
        r.tag_time = r.last_commit_time.unwrap_or(floor).max(floor);
        floor = r.tag_time;
    }
    releases
}
