//! Life-cycle plot: monthly clean and defective commit counts.

use std::fmt::Write as _;
use std::path::Path;

use crate::miner::{CommitRecord, SECONDS_PER_DAY};
use crate::sampling::E_POOL_SIZE;
use crate::{Error, Result};

const MONTH: i64 = 30 * SECONDS_PER_DAY as i64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonthCount {
    /// 30-day bucket index from the first commit.
    pub month: usize,
    pub clean: usize,
    pub defective: usize,
}

/// Counts per 30-day bucket, starting at the earliest commit. Buckets with no
/// commits are included.
pub fn monthly_counts(commits: &[CommitRecord]) -> Vec<MonthCount> {
    let Some(start) = commits.iter().map(|c| c.timestamp).min() else {
        return Vec::new();
    };
    let mut months: Vec<MonthCount> = Vec::new();
    for c in commits {
        let m = ((c.timestamp - start) / MONTH) as usize;
        if months.len() <= m {
            months.extend((months.len()..=m).map(|month| MonthCount {
                month,
                clean: 0,
                defective: 0,
            }));
        }
        if c.is_defective() {
            months[m].defective += 1;
        } else {
            months[m].clean += 1;
        }
    }
    months
}

/// Render the stacked monthly bars as SVG. Each bar group carries
/// `data-month`, `data-clean` and `data-defective` attributes; a vertical
/// line marks the month of the 150th commit when the project has one.
pub fn lifecycle_svg(commits: &[CommitRecord]) -> String {
    let counts = monthly_counts(commits);
    let (w, h, pad) = (800.0_f64, 300.0_f64, 40.0_f64);
    let peak = counts
        .iter()
        .map(|m| m.clean + m.defective)
        .max()
        .unwrap_or(0)
        .max(1) as f64;
    let bar = (w - 2.0 * pad) / counts.len().max(1) as f64;
    let y_of = |n: f64| h - pad - n / peak * (h - 2.0 * pad);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(s, r#"<title>Clean:Defective commits per month</title>"#);
    let _ = writeln!(
        s,
        r##"<line x1="{pad}" y1="{0}" x2="{1}" y2="{0}" stroke="#000"/>"##,
        h - pad,
        w - pad
    );
    for m in &counts {
        let x = pad + m.month as f64 * bar;
        let clean_top = y_of(m.clean as f64);
        let total_top = y_of((m.clean + m.defective) as f64);
        let _ = writeln!(
            s,
            r##"<g class="month" data-month="{}" data-clean="{}" data-defective="{}"><rect class="clean" x="{x:.2}" y="{clean_top:.2}" width="{bw:.2}" height="{ch:.2}" fill="#4c78a8"/><rect class="defective" x="{x:.2}" y="{total_top:.2}" width="{bw:.2}" height="{dh:.2}" fill="#e45756"/></g>"##,
            m.month,
            m.clean,
            m.defective,
            bw = bar * 0.9,
            ch = h - pad - clean_top,
            dh = clean_top - total_top,
        );
    }
    let mut sorted: Vec<i64> = commits.iter().map(|c| c.timestamp).collect();
    sorted.sort_unstable();
    if let (Some(&first), Some(&t)) = (sorted.first(), sorted.get(E_POOL_SIZE - 1)) {
        let x = pad + (t - first) as f64 / MONTH as f64 * bar;
        let _ = writeln!(
            s,
            r##"<line class="e-pool" x1="{x:.2}" y1="{pad}" x2="{x:.2}" y2="{}" stroke="#2ca02c" stroke-width="2" data-commit="{E_POOL_SIZE}" data-time="{t}"/>"##,
            h - pad
        );
    }
    s.push_str("</svg>\n");
    s
}

pub fn plot_lifecycle(commits: &[CommitRecord], out: &Path) -> Result<()> {
    std::fs::write(out, lifecycle_svg(commits)).map_err(|e| Error::io(out, e))
}
