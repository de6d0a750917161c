use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};

use jitdp::miner::{self, KeywordSet, MineOptions, ProjectMeta};
use jitdp::rig::{self, ExperimentConfig};
use jitdp::stats::SkConfig;
use jitdp::synth::{self, SynthSpec};

#[derive(Parser)]
#[command(
    name = "jitdp",
    version,
    about = "Just-in-time defect prediction experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mine a git repository into a labeled commits CSV.
    Mine {
        repo: PathBuf,
        /// Project metadata (`stars: N`, `license: X`) for the curation filters.
        #[arg(long)]
        meta: Option<PathBuf>,
        /// Output CSV (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Fix keywords, comma separated. Replaces the default set.
        #[arg(long, value_delimiter = ',')]
        keywords: Option<Vec<String>>,
        /// Ignore commits authored after this UNIX time.
        #[arg(long)]
        cutoff: Option<i64>,
    },
    /// Run an experiment described by a key = value config file.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Rank an existing results CSV and print the win tables.
    Rank {
        #[arg(long)]
        results: PathBuf,
        /// Policy sets to compare, e.g. `ALL+M6+M3+E;RR+E`.
        #[arg(long)]
        comparisons: Option<String>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        bootstrap_iters: usize,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long, default_value_t = 0.6)]
        a12_threshold: f64,
    },
    /// Draw the monthly clean/defective life-cycle plot of a commits CSV.
    Plot {
        #[arg(long)]
        commits: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write a synthetic commits CSV.
    Synth {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1000)]
        commits: usize,
        #[arg(long, default_value_t = 10)]
        releases: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn open(path: &Path) -> anyhow::Result<File> {
    File::open(path).with_context(|| format!("cannot open {}", path.display()))
}

fn create(path: &Path) -> anyhow::Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).with_context(|| {
        format!("cannot create {}", path.display())
    })?))
}

fn mine(
    repo: &Path,
    meta: Option<&Path>,
    out: Option<&Path>,
    keywords: Option<Vec<String>>,
    cutoff: Option<i64>,
) -> anyhow::Result<()> {
    let options = MineOptions {
        cutoff,
        keywords: keywords.map(KeywordSet::new).unwrap_or_default(),
    };
    let mined = miner::mine_project(repo, &options)?;
    log::info!(
        "{} commits, {} fix commits, {} defective, {} dropped traces, {} merges skipped",
        mined.commits.len(),
        mined.labels.fix_commits,
        mined.labels.defective,
        mined.labels.dropped_traces,
        mined.merges_skipped
    );
    match out {
        Some(path) => {
            let mut w = create(path)?;
            miner::write_commits_csv(&mut w, &mined.commits)?;
            w.flush()?;
        }
        None => miner::write_commits_csv(io::stdout().lock(), &mined.commits)?,
    }
    if let Some(meta_path) = meta {
        let meta = ProjectMeta::load(meta_path)?;
        let summary = miner::summarize(&mined.commits, &mined.releases, &meta);
        match miner::filter_project(&summary) {
            miner::Curation::Accept => eprintln!("curation: accepted"),
            miner::Curation::Reject(reasons) => {
                let text: Vec<String> = reasons.iter().map(|r| r.to_string()).collect();
                eprintln!("curation: rejected ({})", text.join("; "));
            }
        }
    }
    Ok(())
}

fn run(config: &Path) -> anyhow::Result<()> {
    let cfg = ExperimentConfig::load(config)?;
    let (report, outputs) = rig::execute(&cfg)?;
    eprint!("{}", rig::render_summary(&report));
    println!("{}", outputs.results_csv.display());
    println!("{}", outputs.tables_md.display());
    Ok(())
}

fn rank(
    results: &Path,
    comparisons: Option<&str>,
    seed: u64,
    stats: SkConfig,
) -> anyhow::Result<()> {
    stats.validate()?;
    let cells = rig::read_results_csv(open(results)?, results)?;
    let mut policies: Vec<_> = cells.iter().map(|c| c.policy).collect();
    policies.sort();
    policies.dedup();
    let comparisons = match comparisons {
        Some(text) => rig::parse_comparisons(text)?,
        None => rig::default_comparisons(&policies),
    };
    let ranked = rig::rank_results(&cells, &comparisons, &stats, seed)?;
    print!("{}", rig::render_markdown(&ranked));
    Ok(())
}

fn plot(commits: &Path, out: &Path) -> anyhow::Result<()> {
    let records = miner::read_commits_csv(open(commits)?, commits)?;
    rig::plot_lifecycle(&records, out)?;
    Ok(())
}

fn synth(out: &Path, commits: usize, releases: usize, seed: u64) -> anyhow::Result<()> {
    anyhow::ensure!(
        commits >= releases && releases >= 1,
        "need at least one commit per release"
    );
    let spec = SynthSpec {
        commits,
        releases,
        seed,
        ..SynthSpec::default()
    };
    let (records, _) = synth::generate(&spec);
    let mut w = create(out)?;
    miner::write_commits_csv(&mut w, &records)?;
    w.flush()?;
    Ok(())
}

fn dispatch(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Mine {
            repo,
            meta,
            out,
            keywords,
            cutoff,
        } => mine(&repo, meta.as_deref(), out.as_deref(), keywords, cutoff),
        Command::Run { config } => run(&config),
        Command::Rank {
            results,
            comparisons,
            seed,
            bootstrap_iters,
            alpha,
            a12_threshold,
        } => {
            let stats = SkConfig {
                alpha,
                bootstrap_iters,
                a12_threshold,
                ..SkConfig::default()
            };
            rank(&results, comparisons.as_deref(), seed, stats)
        }
        Command::Plot { commits, out } => plot(&commits, &out),
        Command::Synth {
            out,
            commits,
            releases,
            seed,
        } => synth(&out, commits, releases, seed),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            let config_error = err.chain().any(|e| {
                e.downcast_ref::<jitdp::Error>()
                    .is_some_and(jitdp::Error::is_config)
            });
            ExitCode::from(if config_error { 2 } else { 1 })
        }
    }
}
