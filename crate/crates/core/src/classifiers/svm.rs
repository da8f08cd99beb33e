use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::standardize::Standardizer;

/// Linear SVM trained with Pegasos-style stochastic subgradient descent on
/// the hinge loss. The bias is an extra constant feature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearSvm {
    pub standardizer: Standardizer,
    pub weights: Vec<f64>,
    pub bias: f64,
}

impl LinearSvm {
    pub fn fit(rows: &[Vec<f64>], labels: &[u8], lambda: f64, epochs: usize, seed: u64) -> Self {
        let standardizer = Standardizer::fit(rows);
        let xs: Vec<Vec<f64>> = rows
            .iter()
            .map(|r| {
                let mut x = standardizer.transform(r);
                x.push(1.0);
                x
            })
            .collect();
        let ys: Vec<f64> = labels.iter().map(|&l| if l == 1 { 1.0 } else { -1.0 }).collect();
        let d = xs[0].len();
        let mut w = vec![0.0; d];
        let radius = 1.0 / lambda.sqrt();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut order: Vec<usize> = (0..xs.len()).collect();
        let mut t = 0u64;
        for _ in 0..epochs {
            order.shuffle(&mut rng);
            for &i in &order {
                t += 1;
                let eta = 1.0 / (lambda * t as f64);
                let margin = ys[i] * dot(&w, &xs[i]);
                let shrink = 1.0 - eta * lambda;
                w.iter_mut().for_each(|v| *v *= shrink);
                if margin < 1.0 {
                    for (wj, xj) in w.iter_mut().zip(&xs[i]) {
                        *wj += eta * ys[i] * xj;
                    }
                }
                let norm = dot(&w, &w).sqrt();
                if norm > radius {
                    let s = radius / norm;
                    w.iter_mut().for_each(|v| *v *= s);
                }
            }
        }
        let bias = w.pop().unwrap_or(0.0);
        Self {
            standardizer,
            weights: w,
            bias,
        }
    }

    pub fn margin(&self, row: &[f64]) -> f64 {
        dot(&self.weights, &self.standardizer.transform(row)) + self.bias
    }

    /// Logistic squashing of the margin.
    pub fn score(&self, row: &[f64]) -> f64 {
        let m = self.margin(row);
        if m >= 0.0 {
            1.0 / (1.0 + (-m).exp())
        } else {
            let e = m.exp();
            e / (1.0 + e)
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
