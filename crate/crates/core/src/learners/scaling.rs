use crate::preprocess::Dataset;

/// Per-column z-scoring fitted on training data. Constant columns get unit
/// scale so they map to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Standardizer {
    mean: Vec<f64>,
    scale: Vec<f64>,
}

impl Standardizer {
    pub fn fit(data: &Dataset) -> Self {
        let n = data.len().max(1) as f64;
        let (mean, scale) = (0..data.width())
            .map(|j| {
                let m = data.column(j).sum::<f64>() / n;
                let var = data.column(j).map(|x| (x - m) * (x - m)).sum::<f64>() / n;
                let s = var.sqrt();
                (m, if s > 1e-12 { s } else { 1.0 })
            })
            .unzip();
        Self { mean, scale }
    }

    pub fn transform(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(self.mean.iter().zip(&self.scale))
            .map(|(v, (m, s))| (v - m) / s)
            .collect()
    }
}
