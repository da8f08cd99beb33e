// Stratified 10-fold cross-validation of every classifier on the lexical
// feature set, printed as the summary CSV.
//
//     cargo run --release --example cross_validate

use botlex::classifiers::{ClassifierKind, FeatureSet, Params};
use botlex::dataset::{generate_synthetic_corpus, SynthParams};
use botlex::eval::{cross_validate, summary_csv};
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
    let reports: Vec<_> = ClassifierKind::ALL
        .into_iter()
        .map(|kind| {
            cross_validate(&matrix, kind, &Params::default(), 10, 42)
                .unwrap()
                .with_tags("Synthetic_L", Some("L"))
        })
        .collect();
    print!("{}", summary_csv(&reports));
    let forest = &reports[0];
    println!("random forest per-fold AUC: {:?}", forest.per_fold.auc);
    assert!(forest.mean.auc > 0.9);
}

#[allow(dead_code)]
fn main() {
    run_example();
}
