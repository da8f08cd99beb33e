//! Natively implemented binary classifiers: random forest, k-nearest
//! neighbours, Gaussian naive Bayes and a linear SVM.
//!
//! Bot is the positive class (1), human is 0. Training is a pure function of
//! the matrix, the parameters and the seed.

mod forest;
mod gnb;
mod knn;
mod matrix;
mod standardize;
mod svm;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use forest::{Forest, Node, Tree};
pub use gnb::GaussianNb;
pub use knn::Knn;
pub use matrix::{FeatureMatrix, FeatureSet};
pub use standardize::Standardizer;
pub use svm::LinearSvm;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassifierKind {
    RandomForest,
    Knn,
    GaussianNb,
    LinearSvm,
}

impl ClassifierKind {
    pub const ALL: [ClassifierKind; 4] = [
        ClassifierKind::RandomForest,
        ClassifierKind::Knn,
        ClassifierKind::GaussianNb,
        ClassifierKind::LinearSvm,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ClassifierKind::RandomForest => "random_forest",
            ClassifierKind::Knn => "knn",
            ClassifierKind::GaussianNb => "gaussian_nb",
            ClassifierKind::LinearSvm => "linear_svm",
        }
    }

    /// Name used in reports. The linear SVM stands in for SVC.
    pub fn report_label(self) -> &'static str {
        match self {
            ClassifierKind::LinearSvm => "svc-linear",
            other => other.as_str(),
        }
    }
}

impl fmt::Display for ClassifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClassifierKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "random_forest" | "rf" => Ok(ClassifierKind::RandomForest),
            "knn" => Ok(ClassifierKind::Knn),
            "gaussian_nb" | "gnb" | "naive_bayes" => Ok(ClassifierKind::GaussianNb),
            "linear_svm" | "svm" | "svc" | "svc-linear" => Ok(ClassifierKind::LinearSvm),
            other => Err(format!("unknown classifier {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ForestParams {
    pub n_trees: usize,
    /// Features considered per split; `None` means ⌈√d⌉.
    pub max_features: Option<usize>,
    pub min_samples_split: usize,
    pub max_depth: Option<usize>,
    pub bootstrap: bool,
}

impl Default for ForestParams {
    fn default() -> Self {
        Self {
            n_trees: 100,
            max_features: None,
            min_samples_split: 2,
            max_depth: None,
            bootstrap: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Params {
    pub forest: ForestParams,
    pub knn_k: usize,
    pub gnb_var_smoothing: f64,
    pub svm_lambda: f64,
    pub svm_epochs: usize,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            forest: ForestParams::default(),
            knn_k: 5,
            gnb_var_smoothing: 1e-9,
            svm_lambda: 1e-4,
            svm_epochs: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ModelPayload {
    RandomForest(Forest),
    Knn(Knn),
    GaussianNb(GaussianNb),
    LinearSvm(LinearSvm),
}

impl ModelPayload {
    fn kind(&self) -> ClassifierKind {
        match self {
            ModelPayload::RandomForest(_) => ClassifierKind::RandomForest,
            ModelPayload::Knn(_) => ClassifierKind::Knn,
            ModelPayload::GaussianNb(_) => ClassifierKind::GaussianNb,
            ModelPayload::LinearSvm(_) => ClassifierKind::LinearSvm,
        }
    }
}

/// A fitted classifier together with the feature manifest it was trained on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub kind: ClassifierKind,
    pub feature_names: Vec<String>,
    pub seed: u64,
    pub params: Params,
    pub payload: ModelPayload,
}

impl TrainedModel {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let model: TrainedModel = serde_json::from_str(text)?;
        if model.payload.kind() != model.kind {
            return Err(Error::WrongModelKind {
                expected: model.kind.to_string(),
                actual: model.payload.kind().to_string(),
            });
        }
        Ok(model)
    }

    fn check_manifest(&self, matrix: &FeatureMatrix) -> Result<()> {
        if matrix.feature_names != self.feature_names {
            return Err(Error::FeatureMismatch {
                expected: self.feature_names.clone(),
                actual: matrix.feature_names.clone(),
            });
        }
        Ok(())
    }

    fn score_row(&self, row: &[f64]) -> f64 {
        match &self.payload {
            ModelPayload::RandomForest(f) => f.score(row),
            ModelPayload::Knn(k) => k.score(row),
            ModelPayload::GaussianNb(g) => g.score(row),
            ModelPayload::LinearSvm(s) => s.score(row),
        }
    }
}

pub fn train(kind: ClassifierKind, matrix: &FeatureMatrix, params: &Params, seed: u64) -> Result<TrainedModel> {
    let labels = matrix.validate_for_training()?;
    for class in [0u8, 1] {
        let count = labels.iter().filter(|&&l| l == class).count();
        if count < 2 {
            return Err(Error::InvalidData(format!(
                "class {class} has {count} row(s), at least 2 are required"
            )));
        }
    }
    let rows = &matrix.rows;
    let payload = match kind {
        ClassifierKind::RandomForest => {
            ModelPayload::RandomForest(forest::train_forest(rows, labels, &params.forest, seed))
        }
        ClassifierKind::Knn => ModelPayload::Knn(Knn::fit(rows, labels, params.knn_k)),
        ClassifierKind::GaussianNb => ModelPayload::GaussianNb(GaussianNb::fit(rows, labels, params.gnb_var_smoothing)),
        ClassifierKind::LinearSvm => {
            ModelPayload::LinearSvm(LinearSvm::fit(rows, labels, params.svm_lambda, params.svm_epochs, seed))
        }
    };
    Ok(TrainedModel {
        kind,
        feature_names: matrix.feature_names.clone(),
        seed,
        params: params.clone(),
        payload,
    })
}

/// Bot-probability score in `[0, 1]` for each row.
pub fn predict_proba(model: &TrainedModel, matrix: &FeatureMatrix) -> Result<Vec<f64>> {
    model.check_manifest(matrix)?;
    Ok(matrix.rows.iter().map(|r| model.score_row(r).clamp(0.0, 1.0)).collect())
}

/// Threshold a score at 0.5; a score of exactly 0.5 is labelled bot.
pub fn label_scores(scores: &[f64]) -> Vec<u8> {
    scores.iter().map(|&s| u8::from(s >= 0.5)).collect()
}

pub fn predict(model: &TrainedModel, matrix: &FeatureMatrix) -> Result<Vec<u8>> {
    Ok(label_scores(&predict_proba(model, matrix)?))
}

/// Mean decrease in Gini impurity per feature, summing to 1.
pub fn feature_importance(model: &TrainedModel) -> Result<Vec<f64>> {
    match &model.payload {
        ModelPayload::RandomForest(f) => Ok(f.importance()),
        other => Err(Error::WrongModelKind {
            expected: ClassifierKind::RandomForest.to_string(),
            actual: other.kind().to_string(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn names(d: usize) -> Vec<String> {
        (0..d).map(|j| format!("f{j}")).collect()
    }

    fn separable_1d() -> FeatureMatrix {
        let rows = (0..20).map(|i| vec![i as f64]).collect();
        let labels = (0..20).map(|i| u8::from(i >= 10)).collect();
        FeatureMatrix::from_rows(names(1), rows, Some(labels)).unwrap()
    }

    fn noisy(n: usize, d: usize, seed: u64) -> FeatureMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let labels: Vec<u8> = (0..n).map(|i| (i % 2) as u8).collect();
        let rows = labels
            .iter()
            .map(|&l| {
                (0..d)
                    .map(|j| rng.random::<f64>() + if j == 0 { l as f64 * 0.8 } else { 0.0 })
                    .collect()
            })
            .collect();
        FeatureMatrix::from_rows(names(d), rows, Some(labels)).unwrap()
    }

    #[test]
    fn separable_data_is_fit_by_every_kind() {
        let m = separable_1d();
        for kind in ClassifierKind::ALL {
            let model = train(kind, &m, &Params::default(), 42).unwrap();
            let pred = predict(&model, &m).unwrap();
            assert_eq!(&pred, m.labels.as_ref().unwrap(), "{kind}");
        }
    }

    #[test]
    fn constant_features_predict_majority() {
        let rows = vec![vec![3.0, 3.0]; 10];
        let labels = vec![0, 0, 0, 0, 0, 0, 0, 0, 1, 1];
        let m = FeatureMatrix::from_rows(names(2), rows, Some(labels)).unwrap();
        let model = train(ClassifierKind::RandomForest, &m, &Params::default(), 1).unwrap();
        let q = FeatureMatrix::from_rows(names(2), vec![vec![3.0, 3.0], vec![-100.0, 50.0]], None).unwrap();
        assert_eq!(predict(&model, &q).unwrap(), vec![0, 0]);
        // no split anywhere: uniform importance
        assert_eq!(feature_importance(&model).unwrap(), vec![0.5, 0.5]);
    }

    #[test]
    fn training_is_deterministic_and_round_trips() {
        let m = noisy(60, 3, 5);
        for kind in ClassifierKind::ALL {
            let a = train(kind, &m, &Params::default(), 9).unwrap().to_json().unwrap();
            let b = train(kind, &m, &Params::default(), 9).unwrap().to_json().unwrap();
            assert_eq!(a, b, "{kind}");
            let back = TrainedModel::from_json(&a).unwrap();
            assert_eq!(back.to_json().unwrap(), a, "{kind}");
            assert_eq!(
                predict_proba(&back, &m).unwrap(),
                predict_proba(&train(kind, &m, &Params::default(), 9).unwrap(), &m).unwrap()
            );
        }
    }

    #[test]
    fn parallel_forest_equals_sequential() {
        let m = noisy(80, 4, 11);
        let pool = |n| rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap();
        let one = pool(1).install(|| train(ClassifierKind::RandomForest, &m, &Params::default(), 3).unwrap());
        let four = pool(4).install(|| train(ClassifierKind::RandomForest, &m, &Params::default(), 3).unwrap());
        assert_eq!(one.to_json().unwrap(), four.to_json().unwrap());
    }

    #[test]
    fn knn_self_neighbour() {
        let m = noisy(30, 2, 2);
        let p = Params {
            knn_k: 1,
            ..Params::default()
        };
        let model = train(ClassifierKind::Knn, &m, &p, 0).unwrap();
        let scores = predict_proba(&model, &m).unwrap();
        for (s, l) in scores.iter().zip(m.labels.as_ref().unwrap()) {
            assert_eq!(*s, *l as f64);
        }
    }

    #[test]
    fn knn_distance_ties_use_lower_index() {
        let m = FeatureMatrix::from_rows(
            names(1),
            vec![vec![-1.0], vec![1.0], vec![-1.0], vec![1.0]],
            Some(vec![1, 0, 0, 1]),
        )
        .unwrap();
        let knn = Knn::fit(&m.rows, m.labels.as_ref().unwrap(), 1);
        assert_eq!(knn.neighbours(&[0.0]), vec![0]);
        let knn2 = Knn::fit(&m.rows, m.labels.as_ref().unwrap(), 2);
        assert_eq!(knn2.neighbours(&[0.0]), vec![0, 1]);
    }

    #[test]
    fn gnb_posterior_at_class_mean() {
        // classes centred at 0 and 10 with unit-ish spread
        let rows: Vec<Vec<f64>> = [-1.0, 0.0, 1.0, 9.0, 10.0, 11.0].iter().map(|v| vec![*v]).collect();
        let m = FeatureMatrix::from_rows(names(1), rows, Some(vec![0, 0, 0, 1, 1, 1])).unwrap();
        let model = train(ClassifierKind::GaussianNb, &m, &Params::default(), 0).unwrap();
        let q = FeatureMatrix::from_rows(names(1), vec![vec![0.0], vec![10.0]], None).unwrap();
        let s = predict_proba(&model, &q).unwrap();
        // closed form: equal priors and variances 2/3, so the log-odds at a
        // class mean is 100 / (2 * 2/3) = 75
        let expected = 1.0 / (1.0 + 75f64.exp());
        assert!((s[0] - expected).abs() < 1e-12);
        assert!(s[0] < 0.01 && s[1] > 0.99);
    }

    #[test]
    fn forest_of_identical_trees_is_unanimous() {
        let m = noisy(40, 2, 4);
        let p = Params {
            forest: ForestParams {
                bootstrap: false,
                max_features: Some(2),
                ..ForestParams::default()
            },
            ..Params::default()
        };
        let model = train(ClassifierKind::RandomForest, &m, &p, 0).unwrap();
        for s in predict_proba(&model, &m).unwrap() {
            assert!(s == 0.0 || s == 1.0);
        }
    }

    #[test]
    fn single_informative_feature_dominates_importance() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let labels: Vec<u8> = (0..200).map(|i| (i % 2) as u8).collect();
        let rows = labels
            .iter()
            .map(|&l| {
                let mut r = vec![l as f64 * 2.0 + rng.random::<f64>()];
                r.extend((0..3).map(|_| rng.random::<f64>()));
                r
            })
            .collect();
        let m = FeatureMatrix::from_rows(names(4), rows, Some(labels)).unwrap();
        let model = train(ClassifierKind::RandomForest, &m, &Params::default(), 42).unwrap();
        let imp = feature_importance(&model).unwrap();
        assert!(imp[0] > 0.9, "{imp:?}");
        assert!((imp.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn errors() {
        let m = separable_1d();
        let single = FeatureMatrix::from_rows(names(1), vec![vec![1.0], vec![2.0]], Some(vec![1, 1])).unwrap();
        assert!(train(ClassifierKind::Knn, &single, &Params::default(), 0).is_err());
        let empty = FeatureMatrix::from_rows(names(1), vec![], Some(vec![])).unwrap();
        assert!(train(ClassifierKind::Knn, &empty, &Params::default(), 0).is_err());

        let model = train(ClassifierKind::Knn, &m, &Params::default(), 0).unwrap();
        let other = FeatureMatrix::from_rows(vec!["g".into()], vec![vec![1.0]], None).unwrap();
        assert!(matches!(predict(&model, &other), Err(Error::FeatureMismatch { .. })));
        assert!(matches!(feature_importance(&model), Err(Error::WrongModelKind { .. })));

        let none = FeatureMatrix::from_rows(names(1), vec![], None).unwrap();
        assert!(predict(&model, &none).unwrap().is_empty());
    }

    #[test]
    fn threshold_tie_goes_to_bot() {
        assert_eq!(label_scores(&[0.9, 0.1]), vec![1, 0]);
        assert_eq!(label_scores(&[0.5]), vec![1]);
        assert!(label_scores(&[]).is_empty());
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("svc".parse::<ClassifierKind>().unwrap(), ClassifierKind::LinearSvm);
        assert_eq!(ClassifierKind::LinearSvm.report_label(), "svc-linear");
        assert!("tree".parse::<ClassifierKind>().is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn scores_stay_in_unit_interval(seed in 0u64..1000, kind_ix in 0usize..4) {
            let m = noisy(24, 3, seed);
            let model = train(ClassifierKind::ALL[kind_ix], &m, &Params { forest: ForestParams { n_trees: 15, ..Default::default() }, svm_epochs: 20, ..Params::default() }, seed).unwrap();
            let q = noisy(10, 3, seed + 1);
            for s in predict_proba(&model, &q).unwrap() {
                prop_assert!((0.0..=1.0).contains(&s));
            }
        }

        #[test]
        fn knn_and_svm_ignore_column_rescaling(seed in 0u64..500, col in 0usize..3, scale in 0.01f64..100.0, shift in -50.0f64..50.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let labels: Vec<u8> = (0..30).map(|i| (i % 2) as u8).collect();
            let rows: Vec<Vec<f64>> = labels.iter().map(|&l| (0..3).map(|j| {
                rng.random::<f64>() + if j == 0 { 0.7 * l as f64 } else { 0.0 }
            }).collect()).collect();
            let q: Vec<Vec<f64>> = (0..10).map(|_| (0..3).map(|_| rng.random::<f64>() * 1.5).collect()).collect();
            let tf = |rs: &[Vec<f64>]| rs.iter().map(|r| { let mut r = r.clone(); r[col] = r[col] * scale + shift; r }).collect::<Vec<_>>();
            let m1 = FeatureMatrix::from_rows(names(3), rows.clone(), Some(labels.clone())).unwrap();
            let m2 = FeatureMatrix::from_rows(names(3), tf(&rows), Some(labels)).unwrap();
            let q1 = FeatureMatrix::from_rows(names(3), q.clone(), None).unwrap();
            let q2 = FeatureMatrix::from_rows(names(3), tf(&q), None).unwrap();
            let params = Params { svm_epochs: 30, ..Params::default() };

            let k1 = train(ClassifierKind::Knn, &m1, &params, seed).unwrap();
            let k2 = train(ClassifierKind::Knn, &m2, &params, seed).unwrap();
            prop_assert_eq!(predict_proba(&k1, &q1).unwrap(), predict_proba(&k2, &q2).unwrap());

            let margins = |m: &FeatureMatrix, q: &FeatureMatrix| match train(ClassifierKind::LinearSvm, m, &params, seed).unwrap().payload {
                ModelPayload::LinearSvm(svm) => q.rows.iter().map(|r| svm.margin(r)).collect::<Vec<_>>(),
                _ => unreachable!(),
            };
            for (a, b) in margins(&m1, &q1).iter().zip(margins(&m2, &q2)) {
                prop_assert!((a - b).abs() <= 1e-6 * (1.0 + a.abs()), "{} vs {}", a, b);
            }
        }
    }
}
