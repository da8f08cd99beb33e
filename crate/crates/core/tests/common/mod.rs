#![allow(dead_code)]

use std::path::PathBuf;

use botlex::features::tweet_features;
use botlex::lexer::tokenize;
use botlex::lexicon::Lexicons;
use serde_json::Value;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

/// Compares the library against the oracle output, returning one message per
/// disagreement.
pub fn golden_mismatches() -> Vec<String> {
    let lex = Lexicons::bundled();
    let expected = std::fs::read_to_string(fixture("golden_expected.jsonl")).unwrap();
    let mut problems = Vec::new();
    let mut n = 0;
    for line in expected.lines().filter(|l| !l.trim().is_empty()) {
        n += 1;
        let row: Value = serde_json::from_str(line).unwrap();
        let text = row["text"].as_str().unwrap();
        let tokens: Vec<(String, String)> = tokenize(text, &lex)
            .into_iter()
            .map(|t| (t.kind.as_str().to_string(), t.text))
            .collect();
        let want: Vec<(String, String)> = row["tokens"]
            .as_array()
            .unwrap()
            .iter()
            .map(|p| (p[0].as_str().unwrap().to_string(), p[1].as_str().unwrap().to_string()))
            .collect();
        if tokens != want {
            problems.push(format!("{text:?}: tokens {tokens:?}, oracle {want:?}"));
            continue;
        }
        let got = tweet_features(text, &lex);
        let f = &row["features"];
        match got {
            None if f.is_null() => {}
            None => problems.push(format!("{text:?}: skipped, oracle has features")),
            Some(_) if f.is_null() => problems.push(format!("{text:?}: oracle skips it")),
            Some(g) => {
                let counts = [
                    ("total_tokens", g.total_tokens),
                    ("unique_tokens", g.unique_tokens),
                    ("contraction_count", g.contraction_count),
                    ("emoticon_count", g.emoticon_count),
                ];
                for (name, v) in counts {
                    if f[name].as_u64() != Some(v as u64) {
                        problems.push(format!("{text:?}: {name} {v}, oracle {}", f[name]));
                    }
                }
                for (name, v) in [("ttr", g.ttr), ("lexical_diversity", g.lexical_diversity)] {
                    let want = f[name].as_f64().unwrap();
                    if (v - want).abs() > 1e-12 {
                        problems.push(format!("{text:?}: {name} {v}, oracle {want}"));
                    }
                }
            }
        }
    }
    if n != 50 {
        problems.push(format!("fixture has {n} tweets, expected 50"));
    }
    problems
}
