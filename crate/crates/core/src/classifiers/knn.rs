use serde::{Deserialize, Serialize};

use super::standardize::Standardizer;

/// k-nearest neighbours on standardized features with Euclidean distance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Knn {
    pub k: usize,
    pub standardizer: Standardizer,
    pub rows: Vec<Vec<f64>>,
    pub labels: Vec<u8>,
}

impl Knn {
    pub fn fit(rows: &[Vec<f64>], labels: &[u8], k: usize) -> Self {
        let standardizer = Standardizer::fit(rows);
        Self {
            k: k.clamp(1, rows.len()),
            rows: rows.iter().map(|r| standardizer.transform(r)).collect(),
            labels: labels.to_vec(),
            standardizer,
        }
    }

    /// Indices of the k nearest training rows; equal distances are broken by
    /// the lower row index.
    pub fn neighbours(&self, row: &[f64]) -> Vec<usize> {
        let q = self.standardizer.transform(row);
        let mut dist: Vec<(f64, usize)> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| (r.iter().zip(&q).map(|(a, b)| (a - b) * (a - b)).sum(), i))
            .collect();
        dist.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        dist.into_iter().take(self.k).map(|(_, i)| i).collect()
    }

    /// Share of the k neighbours labelled bot.
    pub fn score(&self, row: &[f64]) -> f64 {
        let bots = self
            .neighbours(row)
            .into_iter()
            .filter(|&i| self.labels[i] == 1)
            .count();
        bots as f64 / self.k as f64
    }
}
