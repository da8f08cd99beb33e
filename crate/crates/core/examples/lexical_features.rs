// Per-tweet lexical measurements and their per-account averages.
//
//     cargo run --example lexical_features

use botlex::dataset::{AccountRecord, Tweet};
use botlex::features::{account_features, tweet_features};
use botlex::lexicon::Lexicons;

pub fn run_example() {
    let lex = Lexicons::bundled();
    for text in ["the cat sat on the mat", "don't stop :-)", "the the", ""] {
        match tweet_features(text, &lex) {
            Some(f) => println!(
                "{text:?}: N={} V={} ttr={:.4} diversity={:.4} contractions={} emoticons={}",
                f.total_tokens, f.unique_tokens, f.ttr, f.lexical_diversity, f.contraction_count, f.emoticon_count
            ),
            None => println!("{text:?}: no tokens, skipped"),
        }
    }

    let account = AccountRecord {
        account_id: "alice".into(),
        tweets: ["", "hi there :)", "we're off to the beach, can't wait"]
            .into_iter()
            .map(Tweet::new)
            .collect(),
        ..Default::default()
    };
    let v = account_features(&account, &lex).unwrap();
    println!(
        "{}: avg_ttr={:.4} avg_lexical_diversity={:.4} avg_contraction={:.4} avg_emoticons={:.4} over {} tweets",
        v.account_id, v.avg_ttr, v.avg_lexical_diversity, v.avg_contraction, v.avg_emoticons, v.tweets_used
    );
    assert_eq!(v.tweets_used, 2);
    assert_eq!(v.avg_contraction, 1.0);
}

#[allow(dead_code)]
fn main() {
    run_example();
}
