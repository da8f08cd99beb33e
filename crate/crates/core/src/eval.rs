//! Stratified k-fold cross-validation with accuracy, precision, recall and
//! ROC-AUC.
//!
//! Bot (1) is the positive class. Per-fold metrics are averaged with equal
//! fold weights.

use std::fmt::Write as _;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classifiers::{label_scores, predict_proba, train, ClassifierKind, FeatureMatrix, Params};
use crate::error::{Error, Result};

/// How per-fold values are combined into the reported means.
pub const AGGREGATION: &str = "macro-over-folds";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldAssignment {
    pub k: usize,
    /// Test fold of each row.
    pub folds: Vec<usize>,
}

impl FoldAssignment {
    pub fn test_rows(&self, fold: usize) -> Vec<usize> {
        (0..self.folds.len()).filter(|&i| self.folds[i] == fold).collect()
    }

    pub fn train_rows(&self, fold: usize) -> Vec<usize> {
        (0..self.folds.len()).filter(|&i| self.folds[i] != fold).collect()
    }
}

/// Shuffles the rows of each class with `seed` and deals them round-robin into
/// `k` folds. The second class continues dealing where the first stopped, so
/// fold sizes also differ by at most one.
pub fn stratified_kfold(labels: &[u8], k: usize, seed: u64) -> Result<FoldAssignment> {
    if k < 2 {
        return Err(Error::InvalidData(format!("need at least 2 folds, got {k}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut folds = vec![0; labels.len()];
    let mut next = 0;
    for class in [0u8, 1] {
        let mut members: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        if members.len() < k {
            return Err(Error::ClassTooSmall {
                class,
                count: members.len(),
                k,
            });
        }
        members.shuffle(&mut rng);
        for i in members {
            folds[i] = next;
            next = (next + 1) % k;
        }
    }
    if labels.iter().any(|&l| l > 1) {
        return Err(Error::InvalidData("labels must be 0 or 1".into()));
    }
    Ok(FoldAssignment { k, folds })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfusionMetrics {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub accuracy: f64,
    /// TP / (TP + FP), 0 when nothing was predicted positive.
    pub precision: f64,
    /// TP / (TP + FN), 0 when there are no positives.
    pub recall: f64,
    /// Per-class precision averaged with class-support weights.
    pub precision_weighted: f64,
    /// Per-class recall averaged with class-support weights.
    pub recall_weighted: f64,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn confusion_metrics(predicted: &[u8], actual: &[u8]) -> Result<ConfusionMetrics> {
    if predicted.len() != actual.len() {
        return Err(Error::LengthMismatch(predicted.len(), actual.len()));
    }
    if actual.is_empty() {
        return Err(Error::InvalidData("no predictions to score".into()));
    }
    let (mut tp, mut fp, mut tn, mut fn_) = (0, 0, 0, 0);
    for (&p, &a) in predicted.iter().zip(actual) {
        match (p == 1, a == 1) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, false) => tn += 1,
            (false, true) => fn_ += 1,
        }
    }
    let n = actual.len();
    let pos = tp + fn_;
    let neg = tn + fp;
    let weighted = |bot: f64, human: f64| (bot * pos as f64 + human * neg as f64) / n as f64;
    Ok(ConfusionMetrics {
        tp,
        fp,
        tn,
        fn_,
        accuracy: (tp + tn) as f64 / n as f64,
        precision: ratio(tp, tp + fp),
        recall: ratio(tp, tp + fn_),
        precision_weighted: weighted(ratio(tp, tp + fp), ratio(tn, tn + fn_)),
        recall_weighted: weighted(ratio(tp, pos), ratio(tn, neg)),
    })
}

/// Mann-Whitney AUC: the probability that a random bot outscores a random
/// human, with ties counted as half. Ties share their mean rank.
pub fn roc_auc(scores: &[f64], actual: &[u8]) -> Result<f64> {
    if scores.len() != actual.len() {
        return Err(Error::LengthMismatch(scores.len(), actual.len()));
    }
    let n_pos = actual.iter().filter(|&&a| a == 1).count();
    let n_neg = actual.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::SingleClass);
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let mut rank_sum = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        // ranks i+1 ..= j+1 share their mean
        let mid = (i + j + 2) as f64 / 2.0;
        rank_sum += mid * order[i..=j].iter().filter(|&&r| actual[r] == 1).count() as f64;
        i = j + 1;
    }
    let u = rank_sum - (n_pos * (n_pos + 1)) as f64 / 2.0;
    Ok(u / (n_pos as f64 * n_neg as f64))
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FoldMetrics {
    pub accuracy: Vec<f64>,
    pub precision: Vec<f64>,
    pub recall: Vec<f64>,
    pub auc: Vec<f64>,
    pub precision_weighted: Vec<f64>,
    pub recall_weighted: Vec<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MeanMetrics {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub auc: f64,
    pub precision_weighted: f64,
    pub recall_weighted: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub dataset_tag: String,
    pub classifier: String,
    pub kind: ClassifierKind,
    pub feature_set: Option<String>,
    pub feature_names: Vec<String>,
    pub k: usize,
    pub seed: u64,
    pub aggregation: String,
    pub n_rows: usize,
    pub per_fold: FoldMetrics,
    pub mean: MeanMetrics,
}

impl EvalReport {
    pub fn with_tags(mut self, dataset_tag: impl Into<String>, feature_set: Option<&str>) -> Self {
        self.dataset_tag = dataset_tag.into();
        self.feature_set = feature_set.map(str::to_string);
        self
    }
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Trains on k-1 folds and scores the held-out fold, for every fold. Each
/// fold's model is trained with `seed`; folds may run in parallel but the
/// report is assembled in fold order.
pub fn cross_validate(
    matrix: &FeatureMatrix,
    kind: ClassifierKind,
    params: &Params,
    k: usize,
    seed: u64,
) -> Result<EvalReport> {
    let labels = matrix.labels_required()?;
    let assignment = stratified_kfold(labels, k, seed)?;
    let per_fold: Vec<(ConfusionMetrics, f64)> = (0..k)
        .into_par_iter()
        .map(|fold| -> Result<(ConfusionMetrics, f64)> {
            let train_m = matrix.subset(&assignment.train_rows(fold));
            let test_m = matrix.subset(&assignment.test_rows(fold));
            let model = train(kind, &train_m, params, seed)?;
            let scores = predict_proba(&model, &test_m)?;
            let actual = test_m.labels_required()?;
            Ok((
                confusion_metrics(&label_scores(&scores), actual)?,
                roc_auc(&scores, actual)?,
            ))
        })
        .collect::<Result<_>>()?;

    let mut folds = FoldMetrics::default();
    for (m, auc) in &per_fold {
        folds.accuracy.push(m.accuracy);
        folds.precision.push(m.precision);
        folds.recall.push(m.recall);
        folds.auc.push(*auc);
        folds.precision_weighted.push(m.precision_weighted);
        folds.recall_weighted.push(m.recall_weighted);
    }
    let means = MeanMetrics {
        accuracy: mean(&folds.accuracy),
        precision: mean(&folds.precision),
        recall: mean(&folds.recall),
        auc: mean(&folds.auc),
        precision_weighted: mean(&folds.precision_weighted),
        recall_weighted: mean(&folds.recall_weighted),
    };
    Ok(EvalReport {
        dataset_tag: String::new(),
        classifier: kind.report_label().to_string(),
        kind,
        feature_set: None,
        feature_names: matrix.feature_names.clone(),
        k,
        seed,
        aggregation: AGGREGATION.to_string(),
        n_rows: matrix.n_rows(),
        per_fold: folds,
        mean: means,
    })
}

pub const SUMMARY_HEADER: &str = "dataset_tag,classifier,feature_set,accuracy,precision,recall,auc,seed";

pub fn summary_csv(reports: &[EvalReport]) -> String {
    let mut out = String::from(SUMMARY_HEADER);
    out.push('\n');
    for r in reports {
        let _ = writeln!(
            out,
            "{},{},{},{:.6},{:.6},{:.6},{:.6},{}",
            r.dataset_tag,
            r.classifier,
            r.feature_set.as_deref().unwrap_or(""),
            r.mean.accuracy,
            r.mean.precision,
            r.mean.recall,
            r.mean.auc,
            r.seed
        );
    }
    out
}

pub fn write_summary_csv(reports: &[EvalReport], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, summary_csv(reports)).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_auc(scores: &[f64], actual: &[u8]) -> f64 {
        let mut wins = 0.0;
        let mut pairs = 0.0;
        for i in 0..scores.len() {
            for j in 0..scores.len() {
                if actual[i] == 1 && actual[j] == 0 {
                    pairs += 1.0;
                    if scores[i] > scores[j] {
                        wins += 1.0;
                    } else if scores[i] == scores[j] {
                        wins += 0.5;
                    }
                }
            }
        }
        wins / pairs
    }

    #[test]
    fn kfold_exact_divisibility() {
        let labels = [0, 0, 0, 0, 0, 1, 1, 1, 1, 1];
        let a = stratified_kfold(&labels, 5, 1).unwrap();
        for f in 0..5 {
            let rows = a.test_rows(f);
            assert_eq!(rows.len(), 2);
            assert_eq!(rows.iter().filter(|&&i| labels[i] == 1).count(), 1);
        }
    }

    #[test]
    fn kfold_uneven() {
        let labels = [0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1];
        let a = stratified_kfold(&labels, 5, 3).unwrap();
        let sizes: Vec<usize> = (0..5).map(|f| a.test_rows(f).len()).collect();
        assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
    }

    #[test]
    fn kfold_class_too_small() {
        let labels = [0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1];
        assert!(matches!(
            stratified_kfold(&labels, 11, 0),
            Err(Error::ClassTooSmall { count: 5, k: 11, .. }) | Err(Error::ClassTooSmall { count: 6, k: 11, .. })
        ));
        assert!(stratified_kfold(&labels, 1, 0).is_err());
    }

    #[test]
    fn confusion_examples() {
        let m = confusion_metrics(&[1, 1, 0, 0], &[1, 0, 1, 0]).unwrap();
        assert_eq!((m.tp, m.fp, m.fn_, m.tn), (1, 1, 1, 1));
        assert_eq!((m.accuracy, m.precision, m.recall), (0.5, 0.5, 0.5));

        let same = confusion_metrics(&[1, 0, 1], &[1, 0, 1]).unwrap();
        assert_eq!((same.accuracy, same.precision, same.recall), (1.0, 1.0, 1.0));

        let none = confusion_metrics(&[0, 0, 0], &[1, 0, 1]).unwrap();
        assert_eq!((none.precision, none.recall), (0.0, 0.0));

        assert!(matches!(
            confusion_metrics(&[1], &[1, 0]),
            Err(Error::LengthMismatch(1, 2))
        ));
    }

    #[test]
    fn auc_examples() {
        assert_eq!(roc_auc(&[0.9, 0.8, 0.2, 0.1], &[1, 1, 0, 0]).unwrap(), 1.0);
        assert_eq!(roc_auc(&[0.5, 0.5], &[1, 0]).unwrap(), 0.5);
        assert_eq!(roc_auc(&[0.9, 0.8, 0.3, 0.4], &[1, 0, 0, 1]).unwrap(), 0.75);
        assert!(matches!(roc_auc(&[0.1, 0.2], &[1, 1]), Err(Error::SingleClass)));
    }

    #[test]
    fn summary_line() {
        let r = EvalReport {
            dataset_tag: "Synthetic".into(),
            classifier: "random_forest".into(),
            kind: ClassifierKind::RandomForest,
            feature_set: Some("L".into()),
            feature_names: vec![],
            k: 10,
            seed: 42,
            aggregation: AGGREGATION.into(),
            n_rows: 0,
            per_fold: FoldMetrics::default(),
            mean: MeanMetrics {
                accuracy: 0.86,
                precision: 0.87,
                recall: 0.87,
                auc: 0.875,
                ..Default::default()
            },
        };
        assert_eq!(
            summary_csv(&[r]),
            format!("{SUMMARY_HEADER}\nSynthetic,random_forest,L,0.860000,0.870000,0.870000,0.875000,42\n")
        );
    }

    fn labelled_scores() -> impl Strategy<Value = (Vec<f64>, Vec<u8>)> {
        (2usize..50)
            .prop_flat_map(|n| {
                (
                    prop::collection::vec(prop_oneof![(0u8..5).prop_map(|v| v as f64 / 4.0), 0.0f64..1.0], n),
                    prop::collection::vec(0u8..2, n),
                )
            })
            .prop_filter("both classes", |(_, y)| y.contains(&0) && y.contains(&1))
    }

    proptest! {
        #[test]
        fn auc_matches_pair_count((scores, y) in labelled_scores()) {
            prop_assert!((roc_auc(&scores, &y).unwrap() - brute_auc(&scores, &y)).abs() < 1e-12);
        }

        #[test]
        fn auc_rank_invariance((scores, y) in labelled_scores()) {
            let transformed: Vec<f64> = scores.iter().map(|s| (3.0 * s).exp() - 7.0).collect();
            prop_assert_eq!(roc_auc(&scores, &y).unwrap(), roc_auc(&transformed, &y).unwrap());
        }

        #[test]
        fn auc_complement((scores, y) in labelled_scores()) {
            let flipped: Vec<u8> = y.iter().map(|l| 1 - l).collect();
            let sum = roc_auc(&scores, &y).unwrap() + roc_auc(&scores, &flipped).unwrap();
            prop_assert!((sum - 1.0).abs() < 1e-12);
        }

        #[test]
        fn accuracy_is_exact(p in prop::collection::vec(0u8..2, 1..100), seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut a = p.clone();
            a.shuffle(&mut rng);
            let m = confusion_metrics(&p, &a).unwrap();
            prop_assert_eq!(m.accuracy, (m.tp + m.tn) as f64 / p.len() as f64);
            prop_assert_eq!(m.tp + m.fp + m.tn + m.fn_, p.len());
        }
    }
}
