//! SMOTE oversampling of the minority class.

use rand::Rng;

use super::{Dataset, Row};
use crate::miner::Label;
use crate::{seed, Error, Result};

pub const DEFAULT_SMOTE_K: usize = 5;

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Indices (into `points`) of the `k` nearest neighbours of `points[i]`,
/// excluding itself. Distance ties keep the earlier point.
fn nearest(points: &[&[f64]], i: usize, k: usize) -> Vec<usize> {
    let mut others: Vec<(f64, usize)> = points
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(j, p)| (squared_distance(points[i], p), j))
        .collect();
    others.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    others.into_iter().take(k).map(|(_, j)| j).collect()
}

/// Oversample the minority class until both classes have equal counts.
///
/// Synthetic rows are `x + u * (neighbour - x)` with `x` a random minority
/// row, `neighbour` one of its `k` nearest minority neighbours (Euclidean)
/// and `u ~ U[0, 1]`. Original rows come first, unchanged. `k` shrinks to
/// `minority - 1` (at least 1) on small minorities.
pub fn smote_balance(train: &Dataset, k: usize, seed: u64) -> Result<Dataset> {
    let (defective, clean) = train.class_counts();
    if defective == 0 || clean == 0 {
        return Err(Error::SingleClass);
    }
    if defective == clean {
        return Ok(train.clone());
    }
    let minority_label = Label::from_bool(defective < clean);
    let needed = defective.abs_diff(clean);

    let minority: Vec<&[f64]> = train
        .rows
        .iter()
        .filter(|r| r.label == minority_label)
        .map(|r| r.features.as_slice())
        .collect();
    let k = k.min(minority.len().saturating_sub(1)).max(1);
    let neighbours: Vec<Vec<usize>> = (0..minority.len())
        .map(|i| {
            let n = nearest(&minority, i, k);
            if n.is_empty() {
                vec![i]
            } else {
                n
            }
        })
        .collect();

    let mut rng = seed::rng(seed);
    let mut out = train.clone();
    out.rows.reserve(needed);
    for s in 0..needed {
        let base = rng.random_range(0..minority.len());
        let nb = neighbours[base][rng.random_range(0..neighbours[base].len())];
        let u: f64 = rng.random();
        let features = minority[base]
            .iter()
            .zip(minority[nb])
            .map(|(x, n)| x + u * (n - x))
            .collect();
        out.rows.push(Row {
            features,
            label: minority_label,
            hash: format!("smote-{s}"),
        });
    }
    Ok(out)
}
