// Screening heuristics: generated-looking names, URL/hashtag-heavy timelines
// and bursts of tweets within a minute. Reports flags, never labels.
//
//     cargo run --example annotate

use botlex::annotate::{annotate, max_tweet_rate, screen_name_autogen, AnnotatorConfig};
use botlex::dataset::{AccountRecord, Tweet};
use botlex::lexicon::Lexicons;
use chrono::{Duration, TimeZone, Utc};

pub fn run_example() {
    let cfg = AnnotatorConfig::default();
    for name in ["37Hkyjdytyhjgh", "2jo120", "alice_smith"] {
        println!("{name:<16} autogen={}", screen_name_autogen(name, &cfg).unwrap());
    }

    let t0 = Utc.with_ymd_and_hms(2019, 5, 1, 12, 0, 0).unwrap();
    let burst: Vec<_> = (0..20).map(|i| t0 + Duration::seconds(i * 3)).collect();
    println!("20 tweets in one minute -> max rate {}", max_tweet_rate(&burst));

    let account = AccountRecord {
        account_id: "spam01".into(),
        screen_name: Some("2jo120".into()),
        tweets: burst
            .iter()
            .map(|&t| Tweet {
                text: "#deal #sale https://t.co/abc now".into(),
                created_at: Some(t),
                ..Default::default()
            })
            .collect(),
        ..Default::default()
    };
    let report = annotate(&account, &Lexicons::bundled(), &cfg).unwrap();
    println!("{}", serde_json::to_string_pretty(&report).unwrap());
    assert_eq!(report.flags_fired, 3);
}

#[allow(dead_code)]
fn main() {
    run_example();
}
