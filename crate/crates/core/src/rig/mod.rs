//! Experiment orchestration: every policy x learner on every release of every
//! project, then ranking, tables and plots.

mod config;
mod plot;
mod report;
mod results;

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

pub use config::{default_comparisons, parse_comparisons, ESampling, ExperimentConfig};
pub use plot::{lifecycle_svg, monthly_counts, plot_lifecycle, MonthCount};
pub use report::{
    comparison_releases, emit_tables, rank_results, render_markdown, render_ranks_csv, Comparison,
};
pub use results::{read_results_csv, write_results_csv, RESULTS_CSV_HEADER};

use crate::learners::{self, LearnerKind, LearnerParams};
use crate::metrics::{evaluate, MetricReport, Prediction, PredictionSet};
use crate::miner::{
    filter_project, read_commits_csv, releases_from_commits, summarize, CommitRecord, Curation,
    ProjectMeta, ReleaseInfo,
};
use crate::preprocess::{cfs_select, engineer_features, smote_balance, Dataset};
use crate::sampling::{
    leakage_violations, select_window, test_commits, Policy, PolicySpec, SkipReason,
};
use crate::{seed, Error, Result};

/// One (project, release, policy, learner) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellResult {
    pub project: String,
    pub release: usize,
    pub policy: Policy,
    pub learner: LearnerKind,
    pub outcome: std::result::Result<MetricReport, SkipReason>,
    /// E drew from an under-populated pool.
    pub e_fallback: bool,
}

impl CellResult {
    pub fn is_applicable(&self) -> bool {
        self.outcome.is_ok()
    }

    pub fn report(&self) -> Option<&MetricReport> {
        self.outcome.as_ref().ok()
    }

    /// Entries for the `flags` column.
    pub fn flags(&self) -> Vec<String> {
        match &self.outcome {
            Err(reason) => vec![format!("na:{}", reason.code())],
            Ok(r) => {
                let mut f = Vec::new();
                if r.no_positives {
                    f.push("no_positives".to_string());
                }
                if r.no_negatives {
                    f.push("no_negatives".to_string());
                }
                if self.e_fallback {
                    f.push("e_fallback".to_string());
                }
                f
            }
        }
    }

    fn sort_key(&self) -> (&str, usize, Policy, LearnerKind) {
        (&self.project, self.release, self.policy, self.learner)
    }
}

/// A project's commits, ready for an experiment.
#[derive(Debug, Clone)]
pub struct Project {
    pub name: String,
    pub commits: Vec<CommitRecord>,
    pub releases: Vec<ReleaseInfo>,
}

impl Project {
    pub fn new(name: impl Into<String>, mut commits: Vec<CommitRecord>) -> Self {
        commits.sort_by_key(|c| c.timestamp);
        let releases = releases_from_commits(&commits);
        Self {
            name: name.into(),
            commits,
            releases,
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let commits = read_commits_csv(file, path)?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        Ok(Self::new(name, commits))
    }

    /// Releases that get tested: index 1 onward, with at least one commit.
    pub fn tested_releases(&self) -> impl Iterator<Item = &ReleaseInfo> {
        self.releases
            .iter()
            .filter(|r| r.index >= 1 && r.commit_count > 0)
    }
}

/// The CFS selection made for one training set.
#[derive(Debug, Clone, PartialEq)]
pub struct CfsRecord {
    pub project: String,
    pub release: usize,
    pub policy: Policy,
    pub selected: Vec<String>,
    pub merit: f64,
}

/// Everything a run produced besides the tables.
#[derive(Debug, Clone, Default)]
pub struct RunReport {
    pub results: Vec<CellResult>,
    /// Not-applicable cells per reason code.
    pub skips: BTreeMap<String, usize>,
    /// Training commits not strictly earlier than the test release, summed
    /// over every applicable (release, policy).
    pub leakage_violations: usize,
    /// Training windows checked by the leakage audit.
    pub audited_windows: usize,
    pub cfs: Vec<CfsRecord>,
    /// Projects dropped by curation, with reasons.
    pub rejected: Vec<(String, Vec<String>)>,
}

struct JobOutput {
    cells: Vec<CellResult>,
    leakage: Option<usize>,
    cfs: Option<CfsRecord>,
}

fn na_cells(
    project: &str,
    release: usize,
    policy: Policy,
    learners: &[LearnerKind],
    why: SkipReason,
) -> Vec<CellResult> {
    learners
        .iter()
        .map(|&learner| CellResult {
            project: project.to_string(),
            release,
            policy,
            learner,
            outcome: Err(why.clone()),
            e_fallback: false,
        })
        .collect()
}

fn fit_and_score(
    kind: LearnerKind,
    params: &LearnerParams,
    train: &Dataset,
    test: &Dataset,
    seed: u64,
) -> Result<MetricReport> {
    let model = learners::train(kind, params, train, seed)?;
    let probs = model.predict_dataset(test)?;
    let preds = PredictionSet::new(
        probs
            .into_iter()
            .zip(&test.rows)
            .map(|(proba, row)| Prediction {
                proba,
                defective: row.label.is_defective(),
                hash: row.hash.clone(),
            })
            .collect(),
    )?;
    evaluate(&preds, learners::DEFAULT_THRESHOLD)
}

/// Selected feature names and their merit.
type CfsPick = (Vec<String>, f64);

fn prepare(
    cfg: &ExperimentConfig,
    policy: Policy,
    train: Dataset,
    smote_seed: u64,
) -> Result<(Dataset, Option<CfsPick>)> {
    let smote = cfg.smote.contains(&policy);
    let balance = |d: Dataset| {
        if smote {
            smote_balance(&d, cfg.smote_k, smote_seed)
        } else {
            Ok(d)
        }
    };
    if !cfg.cfs {
        return Ok((balance(train)?, None));
    }
    if cfg.cfs_before_smote {
        let sel = cfs_select(&train)?;
        let reduced = train.select_columns(&sel.selected)?;
        Ok((balance(reduced)?, Some((sel.selected, sel.merit))))
    } else {
        let balanced = balance(train)?;
        let sel = cfs_select(&balanced)?;
        Ok((
            balanced.select_columns(&sel.selected)?,
            Some((sel.selected, sel.merit)),
        ))
    }
}

fn run_job(
    cfg: &ExperimentConfig,
    project: &Project,
    release: &ReleaseInfo,
    policy: Policy,
) -> JobOutput {
    let name = project.name.as_str();
    let learners = &cfg.learners;
    let na = |why| JobOutput {
        cells: na_cells(name, release.index, policy, learners, why),
        leakage: None,
        cfs: None,
    };
    let project_key = seed::hash_str(name);
    let policy_key = policy as u64;
    let e_seed = match cfg.e_sampling {
        ESampling::PerRelease => {
            seed::derive(cfg.seed, &[project_key, release.index as u64, policy_key])
        }
        ESampling::PerProject => seed::derive(cfg.seed, &[project_key, policy_key]),
    };
    let window = match select_window(&PolicySpec::from(policy), &project.commits, release, e_seed) {
        Ok(w) => w,
        Err(why) => return na(why),
    };
    let test = test_commits(&project.commits, release);
    if test.is_empty() {
        return na(SkipReason::EmptyRelease);
    }
    let leakage = leakage_violations(&window, &test);
    let test_set = engineer_features(test.iter().copied());
    let (d, c) = test_set.class_counts();
    if (d == 0 || c == 0) && !cfg.score_degenerate {
        return JobOutput {
            leakage: Some(leakage),
            ..na(SkipReason::DegenerateTest)
        };
    }

    let smote_seed = seed::derive(
        cfg.seed,
        &[project_key, release.index as u64, policy_key, 0x5307e],
    );
    let (train, cfs) = match prepare(
        cfg,
        policy,
        engineer_features(window.commits.iter().copied()),
        smote_seed,
    ) {
        Ok(x) => x,
        Err(e) => {
            return JobOutput {
                leakage: Some(leakage),
                ..na(SkipReason::Failed(e.to_string()))
            }
        }
    };
    let test_set = match test_set.select_columns(&train.feature_names) {
        Ok(t) => t,
        Err(e) => {
            return JobOutput {
                leakage: Some(leakage),
                ..na(SkipReason::Failed(e.to_string()))
            }
        }
    };

    let params = LearnerParams {
        execution: cfg.execution,
        ..cfg.learner_params.clone()
    };
    let cells = learners
        .iter()
        .map(|&learner| {
            let s = seed::derive(
                cfg.seed,
                &[
                    project_key,
                    release.index as u64,
                    policy_key,
                    learner as u64,
                ],
            );
            let outcome = fit_and_score(learner, &params, &train, &test_set, s)
                .map_err(|e| SkipReason::Failed(e.to_string()));
            CellResult {
                project: name.to_string(),
                release: release.index,
                policy,
                learner,
                outcome,
                e_fallback: window.e_fallback,
            }
        })
        .collect();
    JobOutput {
        cells,
        leakage: Some(leakage),
        cfs: cfs.map(|(selected, merit)| CfsRecord {
            project: name.to_string(),
            release: release.index,
            policy,
            selected,
            merit,
        }),
    }
}

/// Run every cell of the experiment over already-loaded projects. Results
/// come back sorted by (project, release, policy, learner) regardless of
/// execution mode.
pub fn run_projects(cfg: &ExperimentConfig, projects: &[Project]) -> RunReport {
    let jobs: Vec<(&Project, &ReleaseInfo, Policy)> = projects
        .iter()
        .flat_map(|p| {
            p.tested_releases()
                .flat_map(move |r| cfg.policies.iter().map(move |&pol| (p, r, pol)))
        })
        .collect();
    let outputs = cfg
        .execution
        .map(&jobs, |&(p, r, pol)| run_job(cfg, p, r, pol));

    let mut report = RunReport::default();
    for out in outputs {
        if let Some(v) = out.leakage {
            report.leakage_violations += v;
            report.audited_windows += 1;
        }
        report.cfs.extend(out.cfs);
        report.results.extend(out.cells);
    }
    report
        .results
        .sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    report
        .cfs
        .sort_by(|a, b| (&a.project, a.release, a.policy).cmp(&(&b.project, b.release, b.policy)));
    for cell in &report.results {
        if let Err(why) = &cell.outcome {
            *report.skips.entry(why.code().to_string()).or_default() += 1;
        }
    }
    report
}

fn meta_path(csv: &Path) -> PathBuf {
    csv.with_extension("meta")
}

/// Load the configured projects, apply curation when enabled, and run.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunReport> {
    cfg.validate()?;
    let mut projects = Vec::new();
    let mut rejected = Vec::new();
    for path in &cfg.projects {
        let project = Project::load(path)?;
        if cfg.curate {
            let meta_file = meta_path(path);
            if !meta_file.exists() {
                return Err(Error::Config(format!(
                    "curation is on but {} is missing (set curate = false for fixtures)",
                    meta_file.display()
                )));
            }
            let meta = ProjectMeta::load(&meta_file)?;
            let summary = summarize(&project.commits, &project.releases, &meta);
            if let Curation::Reject(reasons) = filter_project(&summary) {
                log::warn!("{} rejected by curation", project.name);
                rejected.push((
                    project.name.clone(),
                    reasons.iter().map(|r| r.to_string()).collect(),
                ));
                continue;
            }
        }
        projects.push(project);
    }
    let mut report = run_projects(cfg, &projects);
    report.rejected = rejected;
    Ok(report)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

/// Plain-text run summary: skip tally, leakage audit and curation outcome.
pub fn render_summary(report: &RunReport) -> String {
    let mut s = String::new();
    let applicable = report.results.iter().filter(|c| c.is_applicable()).count();
    s.push_str(&format!(
        "cells: {}\napplicable: {applicable}\n",
        report.results.len()
    ));
    for (code, n) in &report.skips {
        s.push_str(&format!("skipped {code}: {n}\n"));
    }
    s.push_str(&format!(
        "leakage audit: {} violations over {} training windows\n",
        report.leakage_violations, report.audited_windows
    ));
    for (name, reasons) in &report.rejected {
        s.push_str(&format!("rejected {name}: {}\n", reasons.join("; ")));
    }
    s
}

/// Paths written by [`execute`].
#[derive(Debug, Clone)]
pub struct Outputs {
    pub results_csv: PathBuf,
    pub tables_md: PathBuf,
    pub ranks_csv: PathBuf,
    pub summary: PathBuf,
    pub plots: Vec<PathBuf>,
}

/// Run the experiment and write results, rank tables, plots and summary into
/// the output directory.
pub fn execute(cfg: &ExperimentConfig) -> Result<(RunReport, Outputs)> {
    let report = run_experiment(cfg)?;
    let out = &cfg.output;
    std::fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;

    let results_csv = out.join("results.csv");
    write_results_csv(create(&results_csv)?, &report.results)?;

    let comparisons = rank_results(&report.results, &cfg.comparisons, &cfg.stats, cfg.seed)?;
    let (tables_md, ranks_csv) = emit_tables(&comparisons, out)?;

    let mut plots = Vec::new();
    for path in &cfg.projects {
        let project = Project::load(path)?;
        let svg = out.join(format!("{}-lifecycle.svg", project.name));
        plot_lifecycle(&project.commits, &svg)?;
        plots.push(svg);
    }

    if cfg.debug_dump {
        let path = out.join("cfs.jsonl");
        let mut w = create(&path)?;
        for r in &report.cfs {
            let line = serde_json::json!({
                "project": r.project,
                "release": r.release,
                "policy": r.policy.name(),
                "selected": r.selected,
                "merit": r.merit,
            });
            writeln!(w, "{line}").map_err(|e| Error::io(&path, e))?;
        }
        w.flush().map_err(|e| Error::io(&path, e))?;
    }

    let summary = out.join("summary.txt");
    std::fs::write(&summary, render_summary(&report)).map_err(|e| Error::io(&summary, e))?;
    Ok((
        report,
        Outputs {
            results_csv,
            tables_md,
            ranks_csv,
            summary,
            plots,
        },
    ))
}
