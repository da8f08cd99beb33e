//! Per-tweet lexical-richness measurements and their per-account averages.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::dataset::AccountRecord;
use crate::error::{Error, Result};
use crate::lexer::{tokenize, Token, TokenKind};
use crate::lexicon::Lexicons;

/// Column names of the lexical (L) feature set, in CSV order.
pub const LEXICAL_FEATURES: [&str; 4] = ["avg_ttr", "avg_lexical_diversity", "avg_contraction", "avg_emoticons"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TweetFeatures {
    pub total_tokens: usize,
    pub unique_tokens: usize,
    pub ttr: f64,
    pub lexical_diversity: f64,
    pub contraction_count: usize,
    pub emoticon_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccountFeatureVector {
    pub account_id: String,
    pub avg_ttr: f64,
    pub avg_lexical_diversity: f64,
    pub avg_contraction: f64,
    pub avg_emoticons: f64,
    pub tweets_used: usize,
    /// Mean of contraction_count / total_tokens per tweet.
    pub contraction_per_token: f64,
    /// Mean of emoticon_count / total_tokens per tweet.
    pub emoticons_per_token: f64,
}

impl AccountFeatureVector {
    /// Values in [`LEXICAL_FEATURES`] order.
    pub fn lexical_values(&self) -> [f64; 4] {
        [
            self.avg_ttr,
            self.avg_lexical_diversity,
            self.avg_contraction,
            self.avg_emoticons,
        ]
    }
}

/// Distinct vocabulary types over total tokens, counting every token kind.
pub fn ttr(tokens: &[Token]) -> Result<f64> {
    if tokens.is_empty() {
        return Err(Error::EmptyTokens);
    }
    Ok(unique_types(tokens) as f64 / tokens.len() as f64)
}

fn unique_types(tokens: &[Token]) -> usize {
    tokens.iter().map(Token::type_key).collect::<HashSet<_>>().len()
}

/// Share of tokens that are neither URLs, mentions nor stopwords.
pub fn lexical_diversity(tokens: &[Token], lexicons: &Lexicons) -> Result<f64> {
    if tokens.is_empty() {
        return Err(Error::EmptyTokens);
    }
    let content = tokens
        .iter()
        .filter(|t| {
            !matches!(t.kind, TokenKind::Url | TokenKind::Mention) && !lexicons.is_stopword(&t.text.to_lowercase())
        })
        .count();
    Ok(content as f64 / tokens.len() as f64)
}

pub fn contraction_count(tokens: &[Token]) -> usize {
    tokens.iter().filter(|t| t.kind == TokenKind::Contraction).count()
}

pub fn emoticon_count(tokens: &[Token]) -> usize {
    tokens.iter().filter(|t| t.kind == TokenKind::Emoticon).count()
}

/// Returns `None` for tweets with no tokens; those are skipped when averaging.
pub fn tweet_features(text: &str, lexicons: &Lexicons) -> Option<TweetFeatures> {
    let tokens = tokenize(text, lexicons);
    features_of_tokens(&tokens, lexicons)
}

pub fn features_of_tokens(tokens: &[Token], lexicons: &Lexicons) -> Option<TweetFeatures> {
    if tokens.is_empty() {
        return None;
    }
    let unique_tokens = unique_types(tokens);
    Some(TweetFeatures {
        total_tokens: tokens.len(),
        unique_tokens,
        ttr: unique_tokens as f64 / tokens.len() as f64,
        lexical_diversity: lexical_diversity(tokens, lexicons).ok()?,
        contraction_count: contraction_count(tokens),
        emoticon_count: emoticon_count(tokens),
    })
}

pub fn account_features(account: &AccountRecord, lexicons: &Lexicons) -> Result<AccountFeatureVector> {
    let per_tweet: Vec<TweetFeatures> = account
        .tweets
        .iter()
        .filter_map(|t| tweet_features(&t.text, lexicons))
        .collect();
    if per_tweet.is_empty() {
        return Err(Error::UnusableAccount(account.account_id.clone()));
    }
    let mean = |f: &dyn Fn(&TweetFeatures) -> f64| order_free_mean(per_tweet.iter().map(f));
    Ok(AccountFeatureVector {
        account_id: account.account_id.clone(),
        avg_ttr: mean(&|t| t.ttr),
        avg_lexical_diversity: mean(&|t| t.lexical_diversity),
        avg_contraction: mean(&|t| t.contraction_count as f64),
        avg_emoticons: mean(&|t| t.emoticon_count as f64),
        tweets_used: per_tweet.len(),
        contraction_per_token: mean(&|t| t.contraction_count as f64 / t.total_tokens as f64),
        emoticons_per_token: mean(&|t| t.emoticon_count as f64 / t.total_tokens as f64),
    })
}

/// Mean that does not depend on the order of `values`: they are summed in
/// sorted order so reordering tweets cannot change the result by even an ulp.
fn order_free_mean(values: impl Iterator<Item = f64>) -> f64 {
    let mut v: Vec<f64> = values.collect();
    v.sort_by(f64::total_cmp);
    v.iter().sum::<f64>() / v.len() as f64
}
