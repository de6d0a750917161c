//! Linear SVM trained by subgradient descent on the hinge loss, with
//! probabilities from a Platt sigmoid fitted to the training margins.

use super::Standardizer;
use crate::preprocess::Dataset;

#[derive(Debug, Clone)]
pub struct LinearSvm {
    scaler: Standardizer,
    weights: Vec<f64>,
    bias: f64,
    /// Platt parameters: P(defective | f) = 1 / (1 + exp(a f + b)).
    platt: (f64, f64),
}

fn objective(w: &[f64], b: f64, x: &[Vec<f64>], y: &[f64], lambda: f64) -> f64 {
    let hinge: f64 = x
        .iter()
        .zip(y)
        .map(|(row, &t)| (1.0 - t * (dot(w, row) + b)).max(0.0))
        .sum();
    0.5 * lambda * dot(w, w) + hinge / x.len() as f64
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl LinearSvm {
    /// Minimizes `0.5 |w|^2 + C * sum(hinge)`, scaled by `1 / (C n)`, with step
    /// `step / sqrt(t)`. The best iterate seen is kept.
    pub fn fit(data: &Dataset, c: f64, iterations: usize, step: f64) -> Self {
        let scaler = Standardizer::fit(data);
        let x: Vec<Vec<f64>> = data
            .rows
            .iter()
            .map(|r| scaler.transform(&r.features))
            .collect();
        let y: Vec<f64> = data
            .rows
            .iter()
            .map(|r| if r.label.is_defective() { 1.0 } else { -1.0 })
            .collect();
        let n = x.len() as f64;
        let p = data.width();
        let lambda = 1.0 / (c * n);

        let mut w = vec![0.0; p];
        let mut b = 0.0;
        let mut best = (objective(&w, b, &x, &y, lambda), w.clone(), b);
        for t in 1..=iterations {
            let mut gw: Vec<f64> = w.iter().map(|v| lambda * v).collect();
            let mut gb = 0.0;
            for (row, &target) in x.iter().zip(&y) {
                if target * (dot(&w, row) + b) < 1.0 {
                    for (g, v) in gw.iter_mut().zip(row) {
                        *g -= target * v / n;
                    }
                    gb -= target / n;
                }
            }
            let eta = step / (t as f64).sqrt();
            for (v, g) in w.iter_mut().zip(&gw) {
                *v -= eta * g;
            }
            b -= eta * gb;
            let obj = objective(&w, b, &x, &y, lambda);
            if obj < best.0 {
                best = (obj, w.clone(), b);
            }
        }
        let (_, weights, bias) = best;
        let margins: Vec<f64> = x.iter().map(|row| dot(&weights, row) + bias).collect();
        let positives: Vec<bool> = y.iter().map(|&t| t > 0.0).collect();
        let platt = platt_scale(&margins, &positives);
        Self {
            scaler,
            weights,
            bias,
            platt,
        }
    }

    pub fn margin(&self, x: &[f64]) -> f64 {
        dot(&self.weights, &self.scaler.transform(x)) + self.bias
    }

    pub fn proba(&self, x: &[f64]) -> f64 {
        let (a, b) = self.platt;
        super::sigmoid(-(a * self.margin(x) + b))
    }
}

/// Fit Platt's sigmoid `1 / (1 + exp(a f + b))` to decision values by Newton's
/// method with backtracking, using the regularized targets
/// `(N+ + 1) / (N+ + 2)` and `1 / (N- + 2)`. Returns `(a, b)`.
pub fn platt_scale(decision: &[f64], positive: &[bool]) -> (f64, f64) {
    let prior1 = positive.iter().filter(|&&p| p).count() as f64;
    let prior0 = positive.len() as f64 - prior1;
    let hi = (prior1 + 1.0) / (prior1 + 2.0);
    let lo = 1.0 / (prior0 + 2.0);
    let targets: Vec<f64> = positive.iter().map(|&p| if p { hi } else { lo }).collect();

    let nll = |a: f64, b: f64| -> f64 {
        decision
            .iter()
            .zip(&targets)
            .map(|(&f, &t)| {
                let z = f * a + b;
                if z >= 0.0 {
                    t * z + (-z).exp().ln_1p()
                } else {
                    (t - 1.0) * z + z.exp().ln_1p()
                }
            })
            .sum()
    };

    let mut a = 0.0;
    let mut b = ((prior0 + 1.0) / (prior1 + 1.0)).ln();
    let mut fval = nll(a, b);
    for _ in 0..100 {
        let (mut h11, mut h22, mut h21, mut g1, mut g2) = (1e-12, 1e-12, 0.0, 0.0, 0.0);
        for (&f, &t) in decision.iter().zip(&targets) {
            let z = f * a + b;
            let (p, q) = if z >= 0.0 {
                let e = (-z).exp();
                (e / (1.0 + e), 1.0 / (1.0 + e))
            } else {
                let e = z.exp();
                (1.0 / (1.0 + e), e / (1.0 + e))
            };
            let d2 = p * q;
            h11 += f * f * d2;
            h22 += d2;
            h21 += f * d2;
            let d1 = t - p;
            g1 += f * d1;
            g2 += d1;
        }
        if g1.abs() < 1e-5 && g2.abs() < 1e-5 {
            break;
        }
        let det = h11 * h22 - h21 * h21;
        let da = -(h22 * g1 - h21 * g2) / det;
        let db = -(-h21 * g1 + h11 * g2) / det;
        let gd = g1 * da + g2 * db;
        let mut stepsize = 1.0;
        while stepsize >= 1e-10 {
            let (na, nb) = (a + stepsize * da, b + stepsize * db);
            let nf = nll(na, nb);
            if nf < fval + 1e-4 * stepsize * gd {
                a = na;
                b = nb;
                fval = nf;
                break;
            }
            stepsize /= 2.0;
        }
        if stepsize < 1e-10 {
            break;
        }
    }
    (a, b)
}
