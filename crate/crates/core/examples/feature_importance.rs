// Mean-decrease-in-impurity importances of a random forest trained on the
// lexical features.
//
//     cargo run --release --example feature_importance

use botlex::classifiers::{feature_importance, train, ClassifierKind, FeatureSet, Params};
use botlex::dataset::{generate_synthetic_corpus, SynthParams};
use botlex::lexicon::Lexicons;
use botlex::pipeline::feature_matrix;

pub fn run_example() {
    let params = SynthParams {
        n_accounts_per_class: 40,
        tweets_per_account: 60,
        ..Default::default()
    };
    let corpus = generate_synthetic_corpus(&params).unwrap();
    let matrix = feature_matrix(&corpus, &Lexicons::bundled(), FeatureSet::L, None).unwrap();
    let model = train(ClassifierKind::RandomForest, &matrix, &Params::default(), 42).unwrap();
    let importance = feature_importance(&model).unwrap();
    let mut ranked: Vec<(&String, f64)> = matrix.feature_names.iter().zip(importance).collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1));
    for (i, (name, v)) in ranked.iter().enumerate() {
        println!("{}. {name:<24}{v:.4}", i + 1);
    }
    assert!((ranked.iter().map(|r| r.1).sum::<f64>() - 1.0).abs() < 1e-9);
}

#[allow(dead_code)]
fn main() {
    run_example();
}
