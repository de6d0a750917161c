use super::{sigmoid, Standardizer};
use crate::preprocess::Dataset;

/// Mean logistic loss and its gradient. `params` holds one weight per column
/// followed by the intercept; `y` is 0/1.
pub fn logistic_loss_and_gradient(params: &[f64], x: &[Vec<f64>], y: &[f64]) -> (f64, Vec<f64>) {
    let p = params.len() - 1;
    let n = x.len() as f64;
    let mut loss = 0.0;
    let mut grad = vec![0.0; p + 1];
    for (row, &target) in x.iter().zip(y) {
        let z = row.iter().zip(params).map(|(a, w)| a * w).sum::<f64>() + params[p];
        // log(1 + e^z) without overflow
        let softplus = if z > 0.0 {
            z + (-z).exp().ln_1p()
        } else {
            z.exp().ln_1p()
        };
        loss += softplus - target * z;
        let err = sigmoid(z) - target;
        for (g, a) in grad.iter_mut().zip(row) {
            *g += err * a;
        }
        grad[p] += err;
    }
    grad.iter_mut().for_each(|g| *g /= n);
    (loss / n, grad)
}

/// Logistic regression trained by full-batch gradient descent on standardized
/// features.
#[derive(Debug, Clone)]
pub struct LogisticRegression {
    scaler: Standardizer,
    params: Vec<f64>,
}

impl LogisticRegression {
    pub fn fit(data: &Dataset, iterations: usize, step: f64) -> Self {
        let scaler = Standardizer::fit(data);
        let x: Vec<Vec<f64>> = data
            .rows
            .iter()
            .map(|r| scaler.transform(&r.features))
            .collect();
        let y = data.labels01();
        let mut params = vec![0.0; data.width() + 1];
        for _ in 0..iterations {
            let (_, grad) = logistic_loss_and_gradient(&params, &x, &y);
            for (w, g) in params.iter_mut().zip(&grad) {
                *w -= step * g;
            }
        }
        Self { scaler, params }
    }

    /// Weights in standardized space, intercept last.
    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn proba(&self, x: &[f64]) -> f64 {
        let z = self.scaler.transform(x);
        let p = self.params.len() - 1;
        sigmoid(z.iter().zip(&self.params).map(|(a, w)| a * w).sum::<f64>() + self.params[p])
    }
}
