//! Correlation-based feature selection.
//!
//! A subset `S` of `k` features scores
//! `merit(S) = k * r_cf / sqrt(k + k(k-1) * r_ff)`, with `r_cf` the mean
//! absolute feature-class correlation and `r_ff` the mean absolute pairwise
//! feature correlation. Best-first search over subsets stops after
//! [`MAX_STALE_EXPANSIONS`] expansions in a row fail to improve the best merit.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use super::Dataset;
use crate::{Error, Result};

pub const MAX_STALE_EXPANSIONS: usize = 5;

const TIE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct CfsResult {
    pub selected: Vec<String>,
    /// Column indices of `selected` in the input dataset, ascending.
    pub indices: Vec<usize>,
    pub merit: f64,
    pub k: usize,
    pub r_cf: f64,
    pub r_ff: f64,
}

/// Absolute Pearson correlation; zero when either side is constant.
fn abs_pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return 0.0;
    }
    (sxy / (sxx * syy).sqrt()).abs().min(1.0)
}

struct Correlations {
    class: Vec<f64>,
    pairwise: Vec<Vec<f64>>,
}

impl Correlations {
    fn compute(data: &Dataset) -> Self {
        let columns: Vec<Vec<f64>> = (0..data.width())
            .map(|j| data.column(j).collect())
            .collect();
        let labels = data.labels01();
        let class = columns.iter().map(|c| abs_pearson(c, &labels)).collect();
        let p = columns.len();
        let mut pairwise = vec![vec![0.0; p]; p];
        for i in 0..p {
            pairwise[i][i] = 1.0;
            for j in (i + 1)..p {
                let r = abs_pearson(&columns[i], &columns[j]);
                pairwise[i][j] = r;
                pairwise[j][i] = r;
            }
        }
        Self { class, pairwise }
    }

    /// (merit, mean r_cf, mean r_ff)
    fn merit(&self, subset: &[usize]) -> (f64, f64, f64) {
        let k = subset.len();
        if k == 0 {
            return (0.0, 0.0, 0.0);
        }
        let kf = k as f64;
        let r_cf = subset.iter().map(|&i| self.class[i]).sum::<f64>() / kf;
        let mut pair_sum = 0.0;
        for (a, &i) in subset.iter().enumerate() {
            for &j in &subset[a + 1..] {
                pair_sum += self.pairwise[i][j];
            }
        }
        let pairs = kf * (kf - 1.0) / 2.0;
        let r_ff = if pairs > 0.0 { pair_sum / pairs } else { 0.0 };
        let merit = kf * r_cf / (kf + kf * (kf - 1.0) * r_ff).sqrt();
        (merit, r_cf, r_ff)
    }
}

#[derive(Debug, Clone)]
struct Node {
    subset: Vec<usize>,
    merit: f64,
}

/// Higher merit first; within `TIE_EPS`, smaller subsets, then
/// lexicographically smaller column lists.
fn preference(a: &Node, b: &Node) -> Ordering {
    if (a.merit - b.merit).abs() > TIE_EPS {
        return b.merit.partial_cmp(&a.merit).unwrap_or(Ordering::Equal);
    }
    a.subset
        .len()
        .cmp(&b.subset.len())
        .then_with(|| a.subset.cmp(&b.subset))
}

/// Best-first CFS over the columns of `train`.
pub fn cfs_select(train: &Dataset) -> Result<CfsResult> {
    if train.len() < 2 {
        return Err(Error::InvalidInput("CFS needs at least two rows".into()));
    }
    if !train.has_both_classes() {
        return Err(Error::SingleClass);
    }
    if train.width() == 0 {
        return Err(Error::InvalidInput("CFS needs at least one feature".into()));
    }
    let corr = Correlations::compute(train);
    let p = train.width();

    let mut visited: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut open: Vec<Node> = vec![Node {
        subset: Vec::new(),
        merit: 0.0,
    }];
    visited.insert(Vec::new());
    let mut best = open[0].clone();
    let mut stale = 0;

    while !open.is_empty() {
        let pos = (0..open.len())
            .min_by(|&a, &b| preference(&open[a], &open[b]))
            .expect("open is non-empty");
        let node = open.swap_remove(pos);
        let mut improved = false;
        for f in 0..p {
            if node.subset.contains(&f) {
                continue;
            }
            let mut subset = node.subset.clone();
            subset.push(f);
            subset.sort_unstable();
            if !visited.insert(subset.clone()) {
                continue;
            }
            let child = Node {
                merit: corr.merit(&subset).0,
                subset,
            };
            if preference(&child, &best) == Ordering::Less {
                best = child.clone();
                improved = true;
            }
            open.push(child);
        }
        if improved {
            stale = 0;
        } else {
            stale += 1;
            if stale >= MAX_STALE_EXPANSIONS {
                break;
            }
        }
    }

    if best.subset.is_empty() {
        // Every feature is uncorrelated with the class; keep the first best one.
        let top = (0..p)
            .max_by(|&a, &b| {
                corr.class[a]
                    .partial_cmp(&corr.class[b])
                    .unwrap_or(Ordering::Equal)
                    .then(b.cmp(&a))
            })
            .expect("at least one feature");
        best.subset = vec![top];
    }

    let (merit, r_cf, r_ff) = corr.merit(&best.subset);
    Ok(CfsResult {
        selected: best
            .subset
            .iter()
            .map(|&i| train.feature_names[i].clone())
            .collect(),
        k: best.subset.len(),
        indices: best.subset,
        merit,
        r_cf,
        r_ff,
    })
}
