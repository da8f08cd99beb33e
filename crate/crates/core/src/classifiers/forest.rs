//! CART trees with Gini splitting, bagged into a random forest.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ForestParams;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum Node {
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf {
        /// Training samples reaching the leaf, `[human, bot]`.
        counts: [usize; 2],
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    /// Node 0 is the root.
    pub nodes: Vec<Node>,
    /// Unnormalized Gini decrease per feature, weighted by node share.
    pub impurity_decrease: Vec<f64>,
}

impl Tree {
    /// Class voted by the leaf `row` lands in; ties go to bot.
    pub fn vote(&self, row: &[f64]) -> u8 {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => at = if row[*feature] <= *threshold { *left } else { *right },
                Node::Leaf { counts } => return u8::from(counts[1] >= counts[0]),
            }
        }
    }

    pub fn n_splits(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, Node::Split { .. })).count()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Forest {
    pub n_features: usize,
    pub trees: Vec<Tree>,
}

pub(crate) fn gini(counts: [usize; 2]) -> f64 {
    let n = (counts[0] + counts[1]) as f64;
    if n == 0.0 {
        return 0.0;
    }
    let p0 = counts[0] as f64 / n;
    let p1 = counts[1] as f64 / n;
    1.0 - p0 * p0 - p1 * p1
}

fn class_counts(labels: &[u8], samples: &[usize]) -> [usize; 2] {
    let bots = samples.iter().filter(|&&i| labels[i] == 1).count();
    [samples.len() - bots, bots]
}

struct BestSplit {
    feature: usize,
    threshold: f64,
    child_impurity: f64,
    left: Vec<usize>,
    right: Vec<usize>,
}

struct TreeBuilder<'a> {
    rows: &'a [Vec<f64>],
    labels: &'a [u8],
    params: &'a ForestParams,
    max_features: usize,
    total: f64,
    nodes: Vec<Node>,
    decrease: Vec<f64>,
}

impl<'a> TreeBuilder<'a> {
    fn grow(&mut self, samples: Vec<usize>, depth: usize, rng: &mut ChaCha8Rng) -> usize {
        let counts = class_counts(self.labels, &samples);
        let id = self.nodes.len();
        self.nodes.push(Node::Leaf { counts });
        let pure = counts[0] == 0 || counts[1] == 0;
        let too_small = samples.len() < self.params.min_samples_split.max(2);
        let too_deep = self.params.max_depth.is_some_and(|m| depth >= m);
        if pure || too_small || too_deep {
            return id;
        }
        let parent = gini(counts);
        let Some(best) = self.best_split(&samples, rng) else {
            return id;
        };
        let weight = samples.len() as f64 / self.total;
        self.decrease[best.feature] += weight * (parent - best.child_impurity);
        drop(samples);
        let left = self.grow(best.left, depth + 1, rng);
        let right = self.grow(best.right, depth + 1, rng);
        self.nodes[id] = Node::Split {
            feature: best.feature,
            threshold: best.threshold,
            left,
            right,
        };
        id
    }

    /// Visits features in random order until `max_features` non-constant
    /// ones have been scanned, keeping the split with the lowest weighted
    /// child impurity (first found wins ties).
    fn best_split(&self, samples: &[usize], rng: &mut ChaCha8Rng) -> Option<BestSplit> {
        let d = self.rows[0].len();
        let mut order: Vec<usize> = (0..d).collect();
        order.shuffle(rng);
        let n = samples.len() as f64;
        let mut visited = 0;
        let mut best: Option<(usize, f64, f64)> = None;
        let mut sorted: Vec<(f64, u8, usize)> = Vec::with_capacity(samples.len());
        for &f in &order {
            if visited == self.max_features {
                break;
            }
            sorted.clear();
            sorted.extend(samples.iter().map(|&i| (self.rows[i][f], self.labels[i], i)));
            sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
            if sorted[0].0 == sorted[sorted.len() - 1].0 {
                continue;
            }
            visited += 1;
            let total = class_counts(self.labels, samples);
            let mut left = [0usize; 2];
            for i in 1..sorted.len() {
                left[sorted[i - 1].1 as usize] += 1;
                if sorted[i - 1].0 == sorted[i].0 {
                    continue;
                }
                let right = [total[0] - left[0], total[1] - left[1]];
                let nl = i as f64;
                let impurity = (nl / n) * gini(left) + ((n - nl) / n) * gini(right);
                if best.is_none_or(|(_, _, b)| impurity < b) {
                    let (lo, hi) = (sorted[i - 1].0, sorted[i].0);
                    let mut threshold = lo + (hi - lo) / 2.0;
                    if threshold >= hi {
                        threshold = lo;
                    }
                    best = Some((f, threshold, impurity));
                }
            }
        }
        let (feature, threshold, child_impurity) = best?;
        let (left, right) = samples.iter().partition(|&&i| self.rows[i][feature] <= threshold);
        Some(BestSplit {
            feature,
            threshold,
            child_impurity,
            left,
            right,
        })
    }
}

pub(crate) fn train_tree(
    rows: &[Vec<f64>],
    labels: &[u8],
    params: &ForestParams,
    max_features: usize,
    seed: u64,
) -> Tree {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rows.len();
    let samples: Vec<usize> = if params.bootstrap {
        (0..n).map(|_| rng.random_range(0..n)).collect()
    } else {
        (0..n).collect()
    };
    let mut builder = TreeBuilder {
        rows,
        labels,
        params,
        max_features,
        total: samples.len() as f64,
        nodes: Vec::new(),
        decrease: vec![0.0; rows[0].len()],
    };
    builder.grow(samples, 0, &mut rng);
    Tree {
        nodes: builder.nodes,
        impurity_decrease: builder.decrease,
    }
}

/// Tree `t` is seeded with `seed + t`, so the forest does not depend on how
/// trees are scheduled across threads.
pub(crate) fn train_forest(rows: &[Vec<f64>], labels: &[u8], params: &ForestParams, seed: u64) -> Forest {
    let d = rows[0].len();
    let max_features = params
        .max_features
        .unwrap_or_else(|| (d as f64).sqrt().ceil() as usize)
        .clamp(1, d);
    let trees = (0..params.n_trees)
        .into_par_iter()
        .map(|t| train_tree(rows, labels, params, max_features, seed.wrapping_add(t as u64)))
        .collect();
    Forest { n_features: d, trees }
}

impl Forest {
    /// Fraction of trees voting bot.
    pub fn score(&self, row: &[f64]) -> f64 {
        if self.trees.is_empty() {
            return 0.5;
        }
        let bots: usize = self.trees.iter().map(|t| t.vote(row) as usize).sum();
        bots as f64 / self.trees.len() as f64
    }

    /// Mean decrease in impurity: per-tree decreases are normalized, averaged
    /// over trees and renormalized. A forest without any split gets uniform
    /// weights.
    pub fn importance(&self) -> Vec<f64> {
        let d = self.n_features;
        let mut total = vec![0.0; d];
        for tree in &self.trees {
            let sum: f64 = tree.impurity_decrease.iter().sum();
            if sum > 0.0 {
                for (acc, v) in total.iter_mut().zip(&tree.impurity_decrease) {
                    *acc += v / sum;
                }
            }
        }
        let sum: f64 = total.iter().sum();
        if sum > 0.0 {
            total.iter_mut().for_each(|v| *v /= sum);
            total
        } else {
            vec![1.0 / d as f64; d]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> ForestParams {
        ForestParams::default()
    }

    #[test]
    fn gini_values() {
        assert_eq!(gini([5, 0]), 0.0);
        assert_eq!(gini([2, 2]), 0.5);
        assert!((gini([1, 3]) - 0.375).abs() < 1e-15);
    }

    #[test]
    fn single_tree_fits_xor_without_bootstrap() {
        let rows = vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0], vec![1.0, 1.0]];
        let labels = vec![0, 1, 1, 0];
        let p = ForestParams {
            bootstrap: false,
            ..params()
        };
        let tree = train_tree(&rows, &labels, &p, 2, 7);
        for (r, l) in rows.iter().zip(&labels) {
            assert_eq!(tree.vote(r), *l);
        }
        // the root split gains nothing on XOR, the second level does all the work
        assert!(tree.impurity_decrease.iter().sum::<f64>() > 0.0);
    }

    #[test]
    fn threshold_between_adjacent_values() {
        let rows = vec![vec![1.0], vec![2.0]];
        let labels = vec![0, 1];
        let p = ForestParams {
            bootstrap: false,
            ..params()
        };
        let tree = train_tree(&rows, &labels, &p, 1, 0);
        match tree.nodes[0] {
            Node::Split { threshold, .. } => assert_eq!(threshold, 1.5),
            ref other => panic!("{other:?}"),
        }
        // adjacent floats cannot have a strict midpoint
        let a = 1.0f64;
        let b = f64::from_bits(a.to_bits() + 1);
        let tree = train_tree(&[vec![a], vec![b]], &labels, &p, 1, 0);
        assert_eq!(tree.vote(&[a]), 0);
        assert_eq!(tree.vote(&[b]), 1);
    }

    #[test]
    fn importance_sums_to_one() {
        let rows: Vec<Vec<f64>> = (0..40).map(|i| vec![i as f64, (i * 7 % 13) as f64, 1.0]).collect();
        let labels: Vec<u8> = (0..40).map(|i| u8::from(i >= 20)).collect();
        let f = train_forest(&rows, &labels, &params(), 3);
        let imp = f.importance();
        assert!((imp.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        assert!(imp.iter().all(|v| *v >= 0.0));
        assert_eq!(imp[2], 0.0);
    }
}
