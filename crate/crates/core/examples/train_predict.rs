// Train each classifier on a synthetic corpus, save the model as JSON, reload
// it and score held-out accounts.
//
//     cargo run --example train_predict

use botlex::classifiers::{predict, train, ClassifierKind, FeatureSet, Params, TrainedModel};
use botlex::dataset::{generate_synthetic_corpus, SynthParams};
use botlex::lexicon::Lexicons;
use botlex::pipeline::feature_matrix;

pub fn run_example() {
    let lex = Lexicons::bundled();
    let corpus = |seed| {
        let p = SynthParams {
            n_accounts_per_class: 20,
            tweets_per_account: 40,
            seed,
            ..Default::default()
        };
        feature_matrix(&generate_synthetic_corpus(&p).unwrap(), &lex, FeatureSet::L, None).unwrap()
    };
    let train_m = corpus(1);
    let test_m = corpus(2);
    for kind in ClassifierKind::ALL {
        let model = train(kind, &train_m, &Params::default(), 42).unwrap();
        let json = model.to_json().unwrap();
        let reloaded = TrainedModel::from_json(&json).unwrap();
        let predicted = predict(&reloaded, &test_m).unwrap();
        let actual = test_m.labels.as_ref().unwrap();
        let correct = predicted.iter().zip(actual).filter(|(p, a)| p == a).count();
        println!(
            "{:<14} held-out accuracy {:.3} (model json {} bytes)",
            kind.report_label(),
            correct as f64 / actual.len() as f64,
            json.len()
        );
        assert_eq!(predict(&model, &test_m).unwrap(), predicted);
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
