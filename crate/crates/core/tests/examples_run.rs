// Every example is compiled into this test binary and run once.

macro_rules! example {
    ($name:ident) => {
        mod $name {
            include!(concat!("../examples/", stringify!($name), ".rs"));
        }
    };
}

example!(tokenize);
example!(lexical_features);
example!(profile_features);
example!(annotate);
example!(synth_corpus);
example!(train_predict);
example!(cross_validate);
example!(feature_importance);
example!(feature_sets);

#[test]
fn tokenize_example() {
    tokenize::run_example();
}

#[test]
fn lexical_features_example() {
    lexical_features::run_example();
}

#[test]
fn profile_features_example() {
    profile_features::run_example();
}

#[test]
fn annotate_example() {
    annotate::run_example();
}

#[test]
fn synth_corpus_example() {
    synth_corpus::run_example();
}

#[test]
fn train_predict_example() {
    train_predict::run_example();
}

#[test]
fn cross_validate_example() {
    cross_validate::run_example();
}

#[test]
fn feature_importance_example() {
    feature_importance::run_example();
}

#[test]
fn feature_sets_example() {
    feature_sets::run_example();
}
