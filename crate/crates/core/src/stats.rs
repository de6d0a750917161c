//! Scott-Knott ranking with a bootstrap + A12 split test, and win counting.
//!
//! Treatments are sorted by median (best first). The sorted list is cut where
//! the expected squared deviation of part means from the whole,
//! `E = ms/ls * (m.mean - l.mean)^2 + ns/ls * (n.mean - l.mean)^2`,
//! is largest. The cut is kept only when the two parts differ under the
//! bootstrap test and the A12 effect size reaches the threshold; each part is
//! then divided again. Otherwise the whole sublist shares one rank.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;

use crate::exec::Execution;
use crate::metrics::{Measure, Polarity};
use crate::{seed, Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TreatmentGroup {
    pub name: String,
    pub values: Vec<f64>,
}

impl TreatmentGroup {
    pub fn new(name: impl Into<String>, values: Vec<f64>) -> Self {
        Self {
            name: name.into(),
            values,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkConfig {
    pub alpha: f64,
    pub bootstrap_iters: usize,
    pub a12_threshold: f64,
    pub execution: Execution,
}

impl Default for SkConfig {
    fn default() -> Self {
        Self {
            alpha: 0.05,
            bootstrap_iters: 1000,
            a12_threshold: 0.6,
            execution: Execution::default(),
        }
    }
}

impl SkConfig {
    pub fn validate(&self) -> Result<()> {
        if self.bootstrap_iters < 1 {
            return Err(Error::Config("bootstrap_iters must be at least 1".into()));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Config(format!(
                "alpha must be in (0, 1), got {}",
                self.alpha
            )));
        }
        if !(0.5..=1.0).contains(&self.a12_threshold) {
            return Err(Error::Config(format!(
                "a12_threshold must be in [0.5, 1], got {}",
                self.a12_threshold
            )));
        }
        Ok(())
    }
}

/// Scott-Knott result for one measure.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RankTable {
    /// Rank per treatment, 1 = best, contiguous.
    pub ranks: BTreeMap<String, usize>,
    pub medians: BTreeMap<String, f64>,
    /// Treatments best first.
    pub order: Vec<String>,
}

impl RankTable {
    pub fn rank(&self, name: &str) -> Option<usize> {
        self.ranks.get(name).copied()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

pub fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// Vargha-Delaney A12: probability that a value drawn from `xs` exceeds one
/// drawn from `ys`, ties counting one half.
pub fn a12(xs: &[f64], ys: &[f64]) -> f64 {
    let mut sorted = ys.to_vec();
    sorted.sort_by(f64::total_cmp);
    // Twice the (greater + half equal) count, kept integral.
    let twice: u128 = xs
        .iter()
        .map(|x| {
            let less = sorted.partition_point(|y| y < x);
            let not_greater = sorted.partition_point(|y| y <= x);
            (2 * less + (not_greater - less)) as u128
        })
        .sum();
    twice as f64 / (2 * xs.len() as u128 * ys.len() as u128) as f64
}

/// Two-sided bootstrap test for a difference in means.
///
/// Both samples are shifted onto the pooled mean to form the null, resampled
/// with replacement `iters` times, and the observed `|mean(xs) - mean(ys)|` is
/// significant when it exceeds the `1 - alpha` quantile of the resampled
/// differences. Samples of fewer than two values are never significant.
/// Iteration `b` draws from a stream seeded by `(seed, b)`.
pub fn bootstrap_significance(
    xs: &[f64],
    ys: &[f64],
    iters: usize,
    alpha: f64,
    seed: u64,
    execution: Execution,
) -> bool {
    if xs.len() < 2 || ys.len() < 2 || iters == 0 {
        return false;
    }
    let (mx, my) = (mean(xs), mean(ys));
    let observed = (mx - my).abs();
    if observed == 0.0 {
        return false;
    }
    let pooled = (xs.iter().sum::<f64>() + ys.iter().sum::<f64>()) / (xs.len() + ys.len()) as f64;
    let x0: Vec<f64> = xs.iter().map(|v| v - mx + pooled).collect();
    let y0: Vec<f64> = ys.iter().map(|v| v - my + pooled).collect();
    let resample_mean = |rng: &mut seed::Rng, v: &[f64]| {
        (0..v.len())
            .map(|_| v[rng.random_range(0..v.len())])
            .sum::<f64>()
            / v.len() as f64
    };
    let mut null: Vec<f64> = execution.map_range(iters, |b| {
        let mut rng = seed::rng(seed::derive(seed, &[b as u64]));
        let a = resample_mean(&mut rng, &x0);
        let c = resample_mean(&mut rng, &y0);
        (a - c).abs()
    });
    null.sort_by(f64::total_cmp);
    let k = ((1.0 - alpha) * iters as f64).ceil() as usize;
    let q = null[k.clamp(1, iters) - 1];
    observed > q
}

/// Seed used for the significance test of the sublist `lo..hi` (positions in
/// the median-sorted order).
pub fn split_seed(seed: u64, lo: usize, hi: usize) -> u64 {
    seed::derive(seed, &[0x5c07, lo as u64, hi as u64])
}

/// Treatments after orientation (larger = better) and best-first sorting.
struct Sorted<'a> {
    names: Vec<&'a str>,
    values: Vec<Vec<f64>>,
}

fn orient_and_sort<'a>(groups: &'a [TreatmentGroup], polarity: Polarity) -> Sorted<'a> {
    let mut items: Vec<(&str, Vec<f64>, f64)> = groups
        .iter()
        .map(|g| {
            let v: Vec<f64> = match polarity {
                Polarity::Maximize => g.values.clone(),
                Polarity::Minimize => g.values.iter().map(|x| -x).collect(),
            };
            let m = median(&v);
            (g.name.as_str(), v, m)
        })
        .collect();
    items.sort_by(|a, b| b.2.total_cmp(&a.2).then_with(|| a.0.cmp(b.0)));
    let (names, values) = items.into_iter().map(|(n, v, _)| (n, v)).unzip();
    Sorted { names, values }
}

/// Cut position (exclusive end of the left part) maximizing E(delta) over
/// `lo..hi`. A later cut replaces the incumbent only when it is larger by more
/// than `1e-12` relative.
fn best_cut(values: &[Vec<f64>], lo: usize, hi: usize) -> usize {
    let total_n: usize = values[lo..hi].iter().map(Vec::len).sum();
    let total_sum: f64 = values[lo..hi].iter().flatten().sum();
    let mu = total_sum / total_n as f64;
    let mut left_n = 0usize;
    let mut left_sum = 0.0;
    let mut best: Option<(f64, usize)> = None;
    for cut in (lo + 1)..hi {
        left_n += values[cut - 1].len();
        left_sum += values[cut - 1].iter().sum::<f64>();
        let right_n = total_n - left_n;
        let right_sum: f64 = values[cut..hi].iter().flatten().sum();
        let (lm, rm) = (left_sum / left_n as f64, right_sum / right_n as f64);
        let e = left_n as f64 / total_n as f64 * (lm - mu).powi(2)
            + right_n as f64 / total_n as f64 * (rm - mu).powi(2);
        if best.is_none_or(|(b, _)| e > b + 1e-12 * b.abs().max(1.0)) {
            best = Some((e, cut));
        }
    }
    best.map_or(lo + 1, |(_, c)| c)
}

fn divide(
    sorted: &Sorted<'_>,
    lo: usize,
    hi: usize,
    config: &SkConfig,
    seed: u64,
    clusters: &mut Vec<(usize, usize)>,
) {
    if hi - lo < 2 {
        clusters.push((lo, hi));
        return;
    }
    let cut = best_cut(&sorted.values, lo, hi);
    let left: Vec<f64> = sorted.values[lo..cut].iter().flatten().copied().collect();
    let right: Vec<f64> = sorted.values[cut..hi].iter().flatten().copied().collect();
    let significant = bootstrap_significance(
        &left,
        &right,
        config.bootstrap_iters,
        config.alpha,
        split_seed(seed, lo, hi),
        config.execution,
    );
    let effect = a12(&left, &right);
    let effect = effect.max(1.0 - effect);
    if significant && effect >= config.a12_threshold {
        divide(sorted, lo, cut, config, seed, clusters);
        divide(sorted, cut, hi, config, seed, clusters);
    } else {
        clusters.push((lo, hi));
    }
}

/// Rank treatment groups for one measure.
pub fn scott_knott(
    groups: &[TreatmentGroup],
    polarity: Polarity,
    config: &SkConfig,
    seed: u64,
) -> Result<RankTable> {
    config.validate()?;
    let mut names = BTreeSet::new();
    for g in groups {
        if g.values.is_empty() {
            return Err(Error::InvalidInput(format!(
                "treatment {} has no values",
                g.name
            )));
        }
        if g.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "treatment {} has non-finite values",
                g.name
            )));
        }
        if !names.insert(g.name.as_str()) {
            return Err(Error::InvalidInput(format!(
                "duplicate treatment name {}",
                g.name
            )));
        }
    }
    if groups.is_empty() {
        return Ok(RankTable::default());
    }
    let sorted = orient_and_sort(groups, polarity);
    let mut clusters = Vec::new();
    divide(&sorted, 0, sorted.names.len(), config, seed, &mut clusters);

    let mut table = RankTable::default();
    for (rank, (lo, hi)) in clusters.into_iter().enumerate() {
        for name in &sorted.names[lo..hi] {
            table.ranks.insert(name.to_string(), rank + 1);
            table.order.push(name.to_string());
        }
    }
    for g in groups {
        table.medians.insert(g.name.clone(), median(&g.values));
    }
    Ok(table)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WinCount {
    pub treatment: String,
    pub wins: usize,
}

/// Number of measures in which each treatment holds rank 1, sorted by wins
/// (descending) then name. Every measure must have a table, possibly empty.
pub fn count_wins(tables: &BTreeMap<Measure, RankTable>) -> Result<Vec<WinCount>> {
    if let Some(missing) = Measure::ALL.iter().find(|m| !tables.contains_key(m)) {
        return Err(Error::InvalidInput(format!("no rank table for {missing}")));
    }
    let mut wins: BTreeMap<&str, usize> = BTreeMap::new();
    for table in tables.values() {
        for (name, &rank) in &table.ranks {
            *wins.entry(name.as_str()).or_default() += usize::from(rank == 1);
        }
    }
    let mut out: Vec<WinCount> = wins
        .into_iter()
        .map(|(t, wins)| WinCount {
            treatment: t.to_string(),
            wins,
        })
        .collect();
    out.sort_by(|a, b| {
        b.wins
            .cmp(&a.wins)
            .then_with(|| a.treatment.cmp(&b.treatment))
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SkConfig {
        SkConfig::default()
    }

    #[test]
    fn a12_examples() {
        assert_eq!(a12(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]), 0.5);
        assert_eq!(a12(&[5.0, 6.0], &[1.0, 2.0]), 1.0);
        assert_eq!(a12(&[1.0, 2.0], &[1.0, 3.0]), 0.375);
    }

    #[test]
    fn bootstrap_examples() {
        let x = [0.1, 0.4, 0.3, 0.2, 0.5];
        assert!(!bootstrap_significance(
            &x,
            &x,
            1000,
            0.05,
            1,
            Execution::Sequential
        ));
        let lo: Vec<f64> = (0..10).map(|i| f64::from(i) * 0.1).collect();
        let hi: Vec<f64> = (0..10).map(|i| 5.0 + f64::from(i) * 0.1).collect();
        assert!(bootstrap_significance(
            &lo,
            &hi,
            1000,
            0.05,
            1,
            Execution::Sequential
        ));
        assert!(!bootstrap_significance(
            &[0.0],
            &[9.0],
            1000,
            0.05,
            1,
            Execution::Sequential
        ));
    }

    #[test]
    fn bootstrap_same_in_both_modes() {
        let x = [0.1, 0.5, 0.3, 0.2, 0.5, 0.9];
        let y = [0.3, 0.6, 0.7, 0.4, 0.8, 0.6];
        for s in 0..20 {
            assert_eq!(
                bootstrap_significance(&x, &y, 200, 0.05, s, Execution::Parallel),
                bootstrap_significance(&x, &y, 200, 0.05, s, Execution::Sequential)
            );
        }
    }

    #[test]
    fn identical_groups_share_a_rank() {
        let groups: Vec<TreatmentGroup> = (0..4)
            .map(|i| TreatmentGroup::new(format!("g{i}"), vec![0.3, 0.5, 0.7, 0.4]))
            .collect();
        let t = scott_knott(&groups, Polarity::Maximize, &cfg(), 0).unwrap();
        assert!(t.ranks.values().all(|&r| r == 1));
    }

    #[test]
    fn zeros_and_ones_split() {
        let groups = vec![
            TreatmentGroup::new("zeros", vec![0.0; 4]),
            TreatmentGroup::new("ones", vec![1.0; 4]),
        ];
        let t = scott_knott(&groups, Polarity::Maximize, &cfg(), 0).unwrap();
        assert_eq!(t.rank("ones"), Some(1));
        assert_eq!(t.rank("zeros"), Some(2));
        let t = scott_knott(&groups, Polarity::Minimize, &cfg(), 0).unwrap();
        assert_eq!(t.rank("zeros"), Some(1));
    }

    #[test]
    fn three_tiers() {
        let groups = vec![
            TreatmentGroup::new("mid", vec![0.50, 0.52, 0.48, 0.51, 0.49, 0.50]),
            TreatmentGroup::new("top", vec![0.90, 0.92, 0.88, 0.91, 0.89, 0.90]),
            TreatmentGroup::new("top2", vec![0.91, 0.90, 0.89, 0.92, 0.88, 0.90]),
            TreatmentGroup::new("low", vec![0.10, 0.12, 0.08, 0.11, 0.09, 0.10]),
        ];
        let t = scott_knott(&groups, Polarity::Maximize, &cfg(), 3).unwrap();
        assert_eq!(t.rank("top"), Some(1));
        assert_eq!(t.rank("top2"), Some(1));
        assert_eq!(t.rank("mid"), Some(2));
        assert_eq!(t.rank("low"), Some(3));
    }

    #[test]
    fn rejects_bad_groups_and_config() {
        let bad = vec![TreatmentGroup::new("a", vec![])];
        assert!(scott_knott(&bad, Polarity::Maximize, &cfg(), 0).is_err());
        let nan = vec![TreatmentGroup::new("a", vec![f64::NAN])];
        assert!(scott_knott(&nan, Polarity::Maximize, &cfg(), 0).is_err());
        let ok = vec![TreatmentGroup::new("a", vec![1.0])];
        let zero_iters = SkConfig {
            bootstrap_iters: 0,
            ..cfg()
        };
        assert!(matches!(
            scott_knott(&ok, Polarity::Maximize, &zero_iters, 0),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn wins() {
        let mut tables = BTreeMap::new();
        for m in Measure::ALL {
            let mut t = RankTable::default();
            t.ranks.insert("always".into(), 1);
            t.ranks.insert("never".into(), 2);
            t.ranks
                .insert("sometimes".into(), if m == Measure::Auc { 1 } else { 3 });
            tables.insert(m, t);
        }
        let w = count_wins(&tables).unwrap();
        assert_eq!(
            w,
            vec![
                WinCount {
                    treatment: "always".into(),
                    wins: 7
                },
                WinCount {
                    treatment: "sometimes".into(),
                    wins: 1
                },
                WinCount {
                    treatment: "never".into(),
                    wins: 0
                },
            ]
        );
        tables.remove(&Measure::Gm);
        assert!(count_wins(&tables).is_err());
    }
}
