// Generate a small synthetic corpus, save it as JSONL and load it back.
//
//     cargo run --example synth_corpus

use botlex::dataset::{generate_synthetic_corpus, load_corpus, write_corpus, Label, Strictness, SynthParams};

pub fn run_example() {
    let params = SynthParams {
        n_accounts_per_class: 10,
        tweets_per_account: 30,
        seed: 7,
        ..Default::default()
    };
    let corpus = generate_synthetic_corpus(&params).unwrap();
    let bots = corpus.iter().filter(|a| a.label == Some(Label::Bot)).count();
    println!("{} accounts ({bots} bots)", corpus.len());
    for tweet in corpus[0]
        .tweets
        .iter()
        .take(2)
        .chain(corpus[bots].tweets.iter().take(2))
    {
        println!("  {}", tweet.text);
    }

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("corpus.jsonl");
    write_corpus(&corpus, &path).unwrap();
    let loaded = load_corpus(&path, Strictness::Strict).unwrap();
    assert_eq!(loaded.records, corpus);
    assert_eq!(generate_synthetic_corpus(&params).unwrap(), corpus);
}

#[allow(dead_code)]
fn main() {
    run_example();
}
