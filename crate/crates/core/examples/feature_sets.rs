// Compare the profile (F), lexical (L) and combined (FL) feature sets on one
// synthetic corpus where profiles carry only a weak signal.
//
//     cargo run --release --example feature_sets

use botlex::classifiers::{ClassifierKind, FeatureSet, Params};
use botlex::dataset::{generate_synthetic_corpus, SynthParams};
use botlex::eval::cross_validate;
use botlex::lexicon::Lexicons;
use botlex::pipeline::feature_matrix;

pub fn run_example() {
    let params = SynthParams {
        n_accounts_per_class: 40,
        tweets_per_account: 60,
        ..Default::default()
    };
    let corpus = generate_synthetic_corpus(&params).unwrap();
    let full = feature_matrix(&corpus, &Lexicons::bundled(), FeatureSet::FL, None).unwrap();
    for set in [FeatureSet::F, FeatureSet::L, FeatureSet::FL] {
        let m = full.select_set(set).unwrap();
        let r = cross_validate(&m, ClassifierKind::RandomForest, &Params::default(), 10, 42).unwrap();
        println!(
            "{:<3} {:>2} features  accuracy {:.3}  auc {:.3}",
            set.as_str(),
            m.n_features(),
            r.mean.accuracy,
            r.mean.auc
        );
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
