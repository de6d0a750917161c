//! Ranking of results and the win tables.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::CellResult;
use crate::learners::LearnerKind;
use crate::metrics::Measure;
use crate::sampling::Policy;
use crate::stats::{count_wins, scott_knott, RankTable, SkConfig, TreatmentGroup, WinCount};
use crate::{seed, Error, Result};

/// Ranking of the treatments of one policy set over their shared releases.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub policies: Vec<Policy>,
    /// (project, release) pairs where every policy was applicable for every
    /// learner.
    pub releases: Vec<(String, usize)>,
    pub treatments: Vec<(Policy, LearnerKind)>,
    /// Empty when `releases` is empty.
    pub tables: BTreeMap<Measure, RankTable>,
    pub wins: Vec<WinCount>,
}

pub fn treatment_name(policy: Policy, learner: LearnerKind) -> String {
    format!("{policy}/{learner}")
}

fn learners_in(results: &[CellResult]) -> BTreeSet<LearnerKind> {
    results.iter().map(|c| c.learner).collect()
}

/// Releases on which every policy in `policies` is applicable for every
/// learner present in `results`.
pub fn comparison_releases(results: &[CellResult], policies: &[Policy]) -> Vec<(String, usize)> {
    let learners = learners_in(results);
    let applicable: BTreeSet<(&str, usize, Policy, LearnerKind)> = results
        .iter()
        .filter(|c| c.is_applicable())
        .map(|c| (c.project.as_str(), c.release, c.policy, c.learner))
        .collect();
    let all: BTreeSet<(&str, usize)> = results
        .iter()
        .map(|c| (c.project.as_str(), c.release))
        .collect();
    all.into_iter()
        .filter(|&(p, r)| {
            policies.iter().all(|&pol| {
                learners
                    .iter()
                    .all(|&l| applicable.contains(&(p, r, pol, l)))
            })
        })
        .map(|(p, r)| (p.to_string(), r))
        .collect()
}

/// Scott-Knott tables and win counts for each comparison. AUC leaves out
/// releases whose test set holds a single class.
pub fn rank_results(
    results: &[CellResult],
    comparisons: &[Vec<Policy>],
    config: &SkConfig,
    base_seed: u64,
) -> Result<Vec<Comparison>> {
    let learners = learners_in(results);
    let index: BTreeMap<(&str, usize, Policy, LearnerKind), &CellResult> = results
        .iter()
        .map(|c| ((c.project.as_str(), c.release, c.policy, c.learner), c))
        .collect();
    let mut out = Vec::new();
    for (ci, policies) in comparisons.iter().enumerate() {
        let releases = comparison_releases(results, policies);
        let treatments: Vec<(Policy, LearnerKind)> = policies
            .iter()
            .flat_map(|&p| learners.iter().map(move |&l| (p, l)))
            .collect();
        let mut tables = BTreeMap::new();
        let mut wins = Vec::new();
        if !releases.is_empty() {
            for (mi, m) in Measure::ALL.into_iter().enumerate() {
                let groups: Vec<TreatmentGroup> = treatments
                    .iter()
                    .map(|&(p, l)| {
                        let values = releases
                            .iter()
                            .filter_map(|(proj, r)| index.get(&(proj.as_str(), *r, p, l)))
                            .filter_map(|c| c.report())
                            .filter(|rep| m != Measure::Auc || !rep.is_degenerate())
                            .map(|rep| m.value(rep))
                            .collect();
                        TreatmentGroup::new(treatment_name(p, l), values)
                    })
                    .filter(|g| !g.values.is_empty())
                    .collect();
                let s = seed::derive(base_seed, &[ci as u64, mi as u64]);
                tables.insert(m, scott_knott(&groups, m.polarity(), config, s)?);
            }
            wins = count_wins(&tables)?;
        }
        out.push(Comparison {
            policies: policies.clone(),
            releases,
            treatments,
            tables,
            wins,
        });
    }
    Ok(out)
}

fn title(c: &Comparison) -> String {
    c.policies
        .iter()
        .map(|p| p.name())
        .collect::<Vec<_>>()
        .join(", ")
}

/// Markdown win tables: one per comparison, columns Policy, Classifier, Wins
/// and the median of each measure, rank-1 medians in bold.
pub fn render_markdown(comparisons: &[Comparison]) -> String {
    let mut s = String::from("# Win tables\n");
    for c in comparisons {
        let _ = write!(
            s,
            "\n## {}\n\nReleases compared: {}\n\n",
            title(c),
            c.releases.len()
        );
        if c.releases.is_empty() {
            s.push_str(
                "> **Warning:** no release is applicable to every policy in this comparison; no ranks were computed.\n\n",
            );
        }
        s.push_str("| Policy | Classifier | Wins |");
        for m in Measure::ALL {
            let _ = write!(s, " {} |", m.header());
        }
        s.push_str("\n|---|---|---:|");
        s.push_str(&"---:|".repeat(Measure::ALL.len()));
        s.push('\n');
        for w in &c.wins {
            let (policy, learner) = w.treatment.split_once('/').unwrap_or((&w.treatment, ""));
            let _ = write!(s, "| {policy} | {learner} | {} |", w.wins);
            for m in Measure::ALL {
                let table = &c.tables[&m];
                match (table.medians.get(&w.treatment), table.rank(&w.treatment)) {
                    (Some(med), Some(1)) => {
                        let _ = write!(s, " **{med:.3}** |");
                    }
                    (Some(med), _) => {
                        let _ = write!(s, " {med:.3} |");
                    }
                    _ => s.push_str(" n/a |"),
                }
            }
            s.push('\n');
        }
    }
    s
}

/// Long-form ranks: `comparison,measure,policy,learner,rank,median`.
pub fn render_ranks_csv(comparisons: &[Comparison]) -> String {
    let mut s = String::from("comparison,measure,policy,learner,rank,median\n");
    for c in comparisons {
        let name = c
            .policies
            .iter()
            .map(|p| p.name())
            .collect::<Vec<_>>()
            .join("+");
        for (m, table) in &c.tables {
            for t in &table.order {
                let (policy, learner) = t.split_once('/').unwrap_or((t, ""));
                let _ = writeln!(
                    s,
                    "{name},{},{policy},{learner},{},{:.6}",
                    m.name(),
                    table.ranks[t],
                    table.medians[t]
                );
            }
        }
    }
    s
}

/// Write `tables.md` and `ranks.csv` into `dir`.
pub fn emit_tables(comparisons: &[Comparison], dir: &Path) -> Result<(PathBuf, PathBuf)> {
    let md = dir.join("tables.md");
    let csv = dir.join("ranks.csv");
    std::fs::write(&md, render_markdown(comparisons)).map_err(|e| Error::io(&md, e))?;
    std::fs::write(&csv, render_ranks_csv(comparisons)).map_err(|e| Error::io(&csv, e))?;
    Ok((md, csv))
}
