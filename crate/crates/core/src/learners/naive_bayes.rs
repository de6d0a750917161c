use std::f64::consts::PI;

use super::sigmoid;
use crate::preprocess::Dataset;

/// Gaussian naive Bayes with variance smoothing of `1e-9` times the largest
/// feature variance.
#[derive(Debug, Clone)]
pub struct GaussianNb {
    /// Index 0 = clean, 1 = defective.
    log_prior: [f64; 2],
    mean: [Vec<f64>; 2],
    var: [Vec<f64>; 2],
}

const VAR_SMOOTHING: f64 = 1e-9;

impl GaussianNb {
    pub fn fit(data: &Dataset) -> Self {
        let p = data.width();
        let n = data.len() as f64;
        let overall_max_var = (0..p)
            .map(|j| {
                let m = data.column(j).sum::<f64>() / n;
                data.column(j).map(|x| (x - m) * (x - m)).sum::<f64>() / n
            })
            .fold(0.0f64, f64::max);
        let epsilon = (VAR_SMOOTHING * overall_max_var).max(1e-12);

        let mut counts = [0.0f64; 2];
        let mut mean = [vec![0.0; p], vec![0.0; p]];
        for row in &data.rows {
            let c = usize::from(row.label.is_defective());
            counts[c] += 1.0;
            for (m, x) in mean[c].iter_mut().zip(&row.features) {
                *m += x;
            }
        }
        for c in 0..2 {
            mean[c].iter_mut().for_each(|m| *m /= counts[c]);
        }
        let mut var = [vec![0.0; p], vec![0.0; p]];
        for row in &data.rows {
            let c = usize::from(row.label.is_defective());
            for j in 0..p {
                let d = row.features[j] - mean[c][j];
                var[c][j] += d * d;
            }
        }
        for c in 0..2 {
            var[c]
                .iter_mut()
                .for_each(|v| *v = *v / counts[c] + epsilon);
        }
        Self {
            log_prior: [(counts[0] / n).ln(), (counts[1] / n).ln()],
            mean,
            var,
        }
    }

    fn joint_log_likelihood(&self, c: usize, x: &[f64]) -> f64 {
        self.log_prior[c]
            + x.iter()
                .zip(self.mean[c].iter().zip(&self.var[c]))
                .map(|(v, (m, s2))| -0.5 * (2.0 * PI * s2).ln() - (v - m) * (v - m) / (2.0 * s2))
                .sum::<f64>()
    }

    /// Posterior probabilities `(clean, defective)`; they sum to one.
    pub fn posterior(&self, x: &[f64]) -> (f64, f64) {
        let d = sigmoid(self.joint_log_likelihood(1, x) - self.joint_log_likelihood(0, x));
        (1.0 - d, d)
    }

    pub fn proba(&self, x: &[f64]) -> f64 {
        self.posterior(x).1
    }
}
