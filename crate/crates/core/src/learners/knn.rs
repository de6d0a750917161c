use crate::preprocess::Dataset;

/// k-nearest neighbours on raw (engineered) features. The probability is the
/// defective share among the `k` closest training rows; distance ties keep
/// training order.
#[derive(Debug, Clone)]
pub struct Knn {
    k: usize,
    points: Vec<Vec<f64>>,
    defective: Vec<bool>,
}

impl Knn {
    pub fn fit(data: &Dataset, k: usize) -> Self {
        Self {
            k: k.clamp(1, data.len().max(1)),
            points: data.rows.iter().map(|r| r.features.clone()).collect(),
            defective: data.rows.iter().map(|r| r.label.is_defective()).collect(),
        }
    }

    pub fn proba(&self, x: &[f64]) -> f64 {
        let mut dist: Vec<(f64, usize)> = self
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| (p.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum(), i))
            .collect();
        let k = self.k.min(dist.len());
        dist.select_nth_unstable_by(k - 1, |a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let hits = dist[..k].iter().filter(|(_, i)| self.defective[*i]).count();
        hits as f64 / k as f64
    }
}
