use serde::{Deserialize, Serialize};

/// Gaussian naive Bayes with a variance floor of
/// `var_smoothing * (largest feature variance)` added to every class variance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianNb {
    /// Indexed by class, `[human, bot]`.
    pub priors: [f64; 2],
    pub means: [Vec<f64>; 2],
    pub variances: [Vec<f64>; 2],
    pub epsilon: f64,
}

fn mean_var(rows: &[&Vec<f64>], d: usize) -> (Vec<f64>, Vec<f64>) {
    let n = rows.len() as f64;
    let mut mean = vec![0.0; d];
    for r in rows {
        for (m, v) in mean.iter_mut().zip(r.iter()) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n);
    let mut var = vec![0.0; d];
    for r in rows {
        for ((s, v), m) in var.iter_mut().zip(r.iter()).zip(&mean) {
            *s += (v - m) * (v - m);
        }
    }
    var.iter_mut().for_each(|s| *s /= n);
    (mean, var)
}

impl GaussianNb {
    pub fn fit(rows: &[Vec<f64>], labels: &[u8], var_smoothing: f64) -> Self {
        let d = rows[0].len();
        let all: Vec<&Vec<f64>> = rows.iter().collect();
        let (_, overall) = mean_var(&all, d);
        let max_var = overall.iter().copied().fold(0.0, f64::max);
        let mut epsilon = var_smoothing * max_var;
        if epsilon <= 0.0 {
            // every feature is constant; any positive floor keeps densities finite
            epsilon = var_smoothing.max(f64::MIN_POSITIVE);
        }
        let split = |class: u8| -> Vec<&Vec<f64>> {
            rows.iter()
                .zip(labels)
                .filter(|(_, &l)| l == class)
                .map(|(r, _)| r)
                .collect()
        };
        let (c0, c1) = (split(0), split(1));
        let (m0, v0) = mean_var(&c0, d);
        let (m1, v1) = mean_var(&c1, d);
        let n = rows.len() as f64;
        Self {
            priors: [c0.len() as f64 / n, c1.len() as f64 / n],
            means: [m0, m1],
            variances: [
                v0.into_iter().map(|v| v + epsilon).collect(),
                v1.into_iter().map(|v| v + epsilon).collect(),
            ],
            epsilon,
        }
    }

    fn log_joint(&self, class: usize, row: &[f64]) -> f64 {
        let mut ll = self.priors[class].ln();
        for ((x, m), v) in row.iter().zip(&self.means[class]).zip(&self.variances[class]) {
            ll -= 0.5 * ((2.0 * std::f64::consts::PI * v).ln() + (x - m) * (x - m) / v);
        }
        ll
    }

    /// Posterior probability of the bot class.
    pub fn score(&self, row: &[f64]) -> f64 {
        let diff = self.log_joint(0, row) - self.log_joint(1, row);
        // logistic(-diff), evaluated without overflow
        if diff > 0.0 {
            let e = (-diff).exp();
            e / (1.0 + e)
        } else {
            1.0 / (1.0 + diff.exp())
        }
    }
}
