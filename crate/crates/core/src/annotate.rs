//! Automated screening flags for candidate bot accounts.
//!
//! Three checks are run: an auto-generated looking screen name, tweets
//! dominated by URLs/hashtags, and bursts of tweets inside one minute. The
//! annotator only reports flags. It never assigns a label.

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::dataset::AccountRecord;
use crate::error::{Error, Result};
use crate::lexer::{tokenize, TokenKind};
use crate::lexicon::Lexicons;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnotatorConfig {
    /// Screen names with at least this share of digits look generated.
    pub digit_fraction: f64,
    /// Consonant run length (y counts as a consonant) that looks generated.
    pub consonant_run: usize,
    /// Number of alternating letter/digit segments that looks generated.
    pub alternation_segments: usize,
    /// URL+hashtag token share must exceed this to flag.
    pub url_hashtag_threshold: f64,
    /// Tweets inside one 60 s window needed to flag.
    pub rate_threshold: usize,
}

impl Default for AnnotatorConfig {
    fn default() -> Self {
        Self {
            digit_fraction: 0.4,
            consonant_run: 5,
            alternation_segments: 4,
            url_hashtag_threshold: 0.70,
            rate_threshold: 15,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnotationReport {
    pub account_id: String,
    pub autogen_name: bool,
    pub url_hashtag_fraction: f64,
    pub url_hashtag_flag: bool,
    pub max_rate_per_minute: usize,
    pub rate_flag: bool,
    pub flags_fired: usize,
}

pub fn screen_name_autogen(name: &str, config: &AnnotatorConfig) -> Result<bool> {
    if name.is_empty() {
        return Err(Error::EmptyScreenName);
    }
    let chars: Vec<char> = name.chars().collect();
    let digits = chars.iter().filter(|c| c.is_ascii_digit()).count();
    if digits as f64 / chars.len() as f64 >= config.digit_fraction {
        return Ok(true);
    }
    Ok(longest_consonant_run(&chars) >= config.consonant_run
        || longest_alternation(&chars) >= config.alternation_segments)
}

fn is_consonant(c: char) -> bool {
    c.is_ascii_alphabetic() && !matches!(c.to_ascii_lowercase(), 'a' | 'e' | 'i' | 'o' | 'u')
}

fn longest_consonant_run(chars: &[char]) -> usize {
    let mut best = 0;
    let mut run = 0;
    for &c in chars {
        run = if is_consonant(c) { run + 1 } else { 0 };
        best = best.max(run);
    }
    best
}

/// Longest chain of adjacent letter and digit runs, e.g. `a1b2` is 4.
fn longest_alternation(chars: &[char]) -> usize {
    #[derive(PartialEq, Clone, Copy)]
    enum Class {
        Letter,
        Digit,
        Other,
    }
    let class = |c: char| {
        if c.is_ascii_digit() {
            Class::Digit
        } else if c.is_alphabetic() {
            Class::Letter
        } else {
            Class::Other
        }
    };
    let mut best = 0;
    let mut segments = 0;
    let mut prev = Class::Other;
    for &c in chars {
        let cur = class(c);
        if cur == Class::Other {
            segments = 0;
        } else if cur != prev {
            segments += 1;
        }
        prev = cur;
        best = best.max(segments);
    }
    best
}

/// Share of URL and HASHTAG tokens over all tokens of all tweets.
pub fn url_hashtag_fraction(account: &AccountRecord, lexicons: &Lexicons) -> Result<f64> {
    let mut total = 0usize;
    let mut hits = 0usize;
    for tweet in &account.tweets {
        for tok in tokenize(&tweet.text, lexicons) {
            total += 1;
            if matches!(tok.kind, TokenKind::Url | TokenKind::Hashtag) {
                hits += 1;
            }
        }
    }
    if total == 0 {
        return Err(Error::EmptyTokens);
    }
    Ok(hits as f64 / total as f64)
}

/// Largest number of timestamps inside any half-open window `[t, t + 60 s)`.
pub fn max_tweet_rate(timestamps: &[DateTime<Utc>]) -> usize {
    let mut ts: Vec<i64> = timestamps.iter().map(|t| t.timestamp_millis()).collect();
    ts.sort_unstable();
    let mut best = 0;
    let mut hi = 0;
    for lo in 0..ts.len() {
        hi = hi.max(lo);
        while hi < ts.len() && ts[hi] < ts[lo] + 60_000 {
            hi += 1;
        }
        best = best.max(hi - lo);
    }
    best
}

/// Runs all three screening checks. An account without a screen name does not
/// fire the name rule; an account without any tokens has a URL/hashtag share
/// of 0.
pub fn annotate(account: &AccountRecord, lexicons: &Lexicons, config: &AnnotatorConfig) -> Result<AnnotationReport> {
    let autogen_name = match &account.screen_name {
        Some(name) => screen_name_autogen(name, config)?,
        None => false,
    };
    let fraction = match url_hashtag_fraction(account, lexicons) {
        Ok(f) => f,
        Err(Error::EmptyTokens) => 0.0,
        Err(e) => return Err(e),
    };
    let stamps: Vec<DateTime<Utc>> = account.tweets.iter().filter_map(|t| t.created_at).collect();
    let rate = max_tweet_rate(&stamps);
    let url_hashtag_flag = fraction > config.url_hashtag_threshold;
    let rate_flag = rate >= config.rate_threshold;
    Ok(AnnotationReport {
        account_id: account.account_id.clone(),
        autogen_name,
        url_hashtag_fraction: fraction,
        url_hashtag_flag,
        max_rate_per_minute: rate,
        rate_flag,
        flags_fired: [autogen_name, url_hashtag_flag, rate_flag]
            .iter()
            .filter(|&&f| f)
            .count(),
    })
}
