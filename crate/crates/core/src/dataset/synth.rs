//! Seeded synthetic corpora with configurable class asymmetries.
//!
//! Tweets are token sequences joined by single spaces, so the lexer recovers
//! the generated tokens exactly. Every random draw comes from one ChaCha8
//! stream seeded by [`SynthParams::seed`].

use chrono::{DateTime, Duration, TimeZone, Utc};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution, Exp, LogNormal, Normal, Poisson, Zipf};
use serde::{Deserialize, Serialize};

use super::{AccountRecord, Label, Tweet};
use crate::error::{Error, Result};
use crate::lexer::{tokenize, TokenKind};
use crate::lexicon::Lexicons;
use crate::profile::ProfileMetadata;

/// Account-metadata distributions. Counts are log-normal with a shared
/// log-scale spread.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileParams {
    pub age_days_mean: f64,
    pub age_days_std: f64,
    pub log_followers: f64,
    pub log_friends: f64,
    pub log_favourites: f64,
    pub log_listed: f64,
    pub log_statuses: f64,
    pub log_likes_per_tweet: f64,
    pub log_retweets_per_tweet: f64,
    pub log_spread: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassParams {
    pub vocab_size: usize,
    pub zipf_exponent: f64,
    pub tweet_len_mean: f64,
    pub tweet_len_std: f64,
    /// Probability that a tweet carries one emoticon.
    pub emoticon_rate: f64,
    /// Per-token probability of a contraction.
    pub contraction_rate: f64,
    /// Per-token probability of a URL or hashtag.
    pub url_hashtag_rate: f64,
    /// Per-token probability of a stopword.
    pub stopword_rate: f64,
    /// Mean gap between consecutive tweets, seconds.
    pub mean_interarrival_secs: f64,
    /// Probability that an account posts one burst of 20 tweets 2 s apart.
    pub burst_prob: f64,
    pub profile: ProfileParams,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthParams {
    pub human: ClassParams,
    pub bot: ClassParams,
    pub n_accounts_per_class: usize,
    pub tweets_per_account: usize,
    /// Per-account rates are drawn from Beta distributions with the class
    /// rate as mean and this concentration; larger values mean less spread
    /// between accounts of one class.
    pub account_concentration: f64,
    pub with_profiles: bool,
    pub seed: u64,
}

impl Default for SynthParams {
    fn default() -> Self {
        Self {
            human: ClassParams {
                vocab_size: 3000,
                zipf_exponent: 1.0,
                tweet_len_mean: 14.0,
                tweet_len_std: 5.0,
                emoticon_rate: 0.1,
                contraction_rate: 0.15,
                url_hashtag_rate: 0.05,
                stopword_rate: 0.3,
                mean_interarrival_secs: 3.0 * 3600.0,
                burst_prob: 0.0,
                profile: ProfileParams {
                    age_days_mean: 1500.0,
                    age_days_std: 700.0,
                    log_followers: 5.5,
                    log_friends: 5.5,
                    log_favourites: 7.0,
                    log_listed: 1.5,
                    log_statuses: 8.0,
                    log_likes_per_tweet: 1.0,
                    log_retweets_per_tweet: 0.5,
                    log_spread: 1.2,
                },
            },
            bot: ClassParams {
                vocab_size: 1000,
                zipf_exponent: 1.0,
                tweet_len_mean: 12.0,
                tweet_len_std: 5.0,
                emoticon_rate: 0.5,
                contraction_rate: 0.02,
                url_hashtag_rate: 0.08,
                stopword_rate: 0.3,
                mean_interarrival_secs: 3600.0,
                burst_prob: 0.3,
                profile: ProfileParams {
                    age_days_mean: 1300.0,
                    age_days_std: 700.0,
                    log_followers: 5.2,
                    log_friends: 5.7,
                    log_favourites: 6.7,
                    log_listed: 1.3,
                    log_statuses: 8.3,
                    log_likes_per_tweet: 0.8,
                    log_retweets_per_tweet: 0.6,
                    log_spread: 1.2,
                },
            },
            n_accounts_per_class: 100,
            tweets_per_account: 200,
            account_concentration: 30.0,
            with_profiles: true,
            seed: 42,
        }
    }
}

impl SynthParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        for (name, c) in [("human", &self.human), ("bot", &self.bot)] {
            for (field, v) in [
                ("emoticon_rate", c.emoticon_rate),
                ("contraction_rate", c.contraction_rate),
                ("url_hashtag_rate", c.url_hashtag_rate),
                ("stopword_rate", c.stopword_rate),
                ("burst_prob", c.burst_prob),
            ] {
                if !(0.0..=1.0).contains(&v) {
                    return bad(format!("{name}.{field} = {v} is outside [0, 1]"));
                }
            }
            if c.contraction_rate + c.url_hashtag_rate + c.stopword_rate > 1.0 {
                return bad(format!("{name}: per-token rates sum above 1"));
            }
            if c.vocab_size == 0 {
                return bad(format!("{name}.vocab_size must be positive"));
            }
            if !positive(c.zipf_exponent) {
                return bad(format!("{name}.zipf_exponent must be positive"));
            }
            if !(c.tweet_len_mean.is_finite() && c.tweet_len_mean >= 1.0) || !non_negative(c.tweet_len_std) {
                return bad(format!("{name}: tweet length needs mean >= 1 and std >= 0"));
            }
            if !positive(c.mean_interarrival_secs) {
                return bad(format!("{name}.mean_interarrival_secs must be positive"));
            }
            let p = &c.profile;
            if !positive(p.age_days_mean) || !non_negative(p.age_days_std) || !non_negative(p.log_spread) {
                return bad(format!("{name}.profile: ages and spreads must be positive"));
            }
        }
        if self.tweets_per_account == 0 {
            return bad("tweets_per_account must be positive".into());
        }
        if !positive(self.account_concentration) {
            return bad("account_concentration must be positive".into());
        }
        Ok(())
    }
}

fn positive(v: f64) -> bool {
    v.is_finite() && v > 0.0
}

fn non_negative(v: f64) -> bool {
    v.is_finite() && v >= 0.0
}

/// Timestamps end here, so corpora never depend on the wall clock.
pub fn reference_time() -> DateTime<Utc> {
    Utc.with_ymd_and_hms(2019, 6, 1, 0, 0, 0).unwrap()
}

const SYLLABLE_ONSETS: &[u8] = b"bcdfghjklmnprstvwz";
const SYLLABLE_VOWELS: &[u8] = b"aeiou";

/// Deterministic letter-only pseudo-word for `i`, at least two syllables.
fn pseudo_word(mut i: usize) -> String {
    let base = SYLLABLE_ONSETS.len() * SYLLABLE_VOWELS.len();
    let mut out = String::new();
    let mut syllables = 0;
    while i > 0 || syllables < 2 {
        let s = i % base;
        out.push(SYLLABLE_ONSETS[s / SYLLABLE_VOWELS.len()] as char);
        out.push(SYLLABLE_VOWELS[s % SYLLABLE_VOWELS.len()] as char);
        i /= base;
        syllables += 1;
    }
    out
}

fn single_token(text: &str, kind: TokenKind, lexicons: &Lexicons) -> bool {
    matches!(tokenize(text, lexicons).as_slice(), [t] if t.kind == kind && t.text == text)
}

struct Pools {
    words: Vec<String>,
    stopwords: Vec<String>,
    contractions: Vec<String>,
    emoticons: Vec<String>,
}

impl Pools {
    fn new(max_vocab: usize, lexicons: &Lexicons) -> Result<Self> {
        let sorted = |set: &std::collections::HashSet<String>, kind| {
            let mut v: Vec<String> = set
                .iter()
                .filter(|s| single_token(s, kind, lexicons))
                .cloned()
                .collect();
            v.sort();
            v
        };
        let pools = Pools {
            words: (0..)
                .map(pseudo_word)
                .filter(|w| {
                    !lexicons.is_stopword(w)
                        && !lexicons.is_contraction(w)
                        && single_token(w, TokenKind::Word, lexicons)
                })
                .take(max_vocab)
                .collect(),
            stopwords: sorted(lexicons.stopwords(), TokenKind::Word),
            contractions: sorted(lexicons.contractions(), TokenKind::Contraction),
            emoticons: sorted(lexicons.emoticons(), TokenKind::Emoticon),
        };
        for (name, pool) in [
            ("stopwords", &pools.stopwords),
            ("contractions", &pools.contractions),
            ("emoticons", &pools.emoticons),
        ] {
            if pool.is_empty() {
                return Err(Error::InvalidParams(format!("lexicon offers no usable {name}")));
            }
        }
        Ok(pools)
    }
}

/// Beta draw with the given mean; degenerate means are returned as is.
fn account_rate(mean: f64, concentration: f64, rng: &mut ChaCha8Rng) -> f64 {
    if mean <= 0.0 || mean >= 1.0 {
        return mean;
    }
    Beta::new(mean * concentration, (1.0 - mean) * concentration)
        .map(|b| b.sample(rng))
        .unwrap_or(mean)
}

fn random_slug(rng: &mut ChaCha8Rng, len: usize) -> String {
    const ALNUM: &[u8] = b"abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
    (0..len).map(|_| *ALNUM.choose(rng).unwrap() as char).collect()
}

struct AccountRates {
    emoticon: f64,
    contraction: f64,
    url_hashtag: f64,
}

fn tweet_text(c: &ClassParams, rates: &AccountRates, pools: &Pools, zipf: &Zipf<f64>, rng: &mut ChaCha8Rng) -> String {
    let len = Normal::new(c.tweet_len_mean, c.tweet_len_std)
        .map(|n| n.sample(rng))
        .unwrap_or(c.tweet_len_mean)
        .round()
        .max(1.0) as usize;
    let word = |rng: &mut ChaCha8Rng| pools.words[zipf.sample(rng) as usize - 1].clone();
    let mut tokens: Vec<String> = Vec::with_capacity(len + 1);
    for _ in 0..len {
        let u: f64 = rng.random();
        let tok = if u < rates.contraction {
            pools.contractions.choose(rng).unwrap().clone()
        } else if u < rates.contraction + rates.url_hashtag {
            if rng.random_bool(0.5) {
                format!("https://t.co/{}", random_slug(rng, 10))
            } else {
                format!("#{}", word(rng))
            }
        } else if u < rates.contraction + rates.url_hashtag + c.stopword_rate {
            pools.stopwords.choose(rng).unwrap().clone()
        } else {
            word(rng)
        };
        tokens.push(tok);
    }
    if rng.random_bool(rates.emoticon) {
        let at = rng.random_range(0..=tokens.len());
        tokens.insert(at, pools.emoticons.choose(rng).unwrap().clone());
    }
    tokens.join(" ")
}

fn timestamps(c: &ClassParams, n: usize, rng: &mut ChaCha8Rng) -> Vec<DateTime<Utc>> {
    let gap = Exp::new(1.0 / c.mean_interarrival_secs).expect("validated interarrival");
    let burst_start = rng
        .random_bool(c.burst_prob)
        .then(|| rng.random_range(0..n.saturating_sub(19).max(1)));
    let mut t = reference_time() - Duration::seconds(rng.random_range(0..86_400));
    let mut out = Vec::with_capacity(n);
    // walk backwards from the newest tweet
    for i in 0..n {
        out.push(t);
        let secs = match burst_start {
            Some(b) if i >= b && i < b + 19 => 2.0,
            _ => gap.sample(rng).max(1.0),
        };
        t -= Duration::milliseconds((secs * 1000.0) as i64);
    }
    out.reverse();
    out
}

fn screen_name(label: Label, i: usize, rng: &mut ChaCha8Rng) -> String {
    let stem = pseudo_word(rng.random_range(0..5000));
    match label {
        Label::Human => format!("{stem}_{}", pseudo_word(i)),
        Label::Bot if rng.random_bool(0.5) => format!("{stem}{}", rng.random_range(10_000..99_999)),
        Label::Bot => format!("{stem}{}", pseudo_word(i)),
    }
}

fn log_normal(mu: f64, sigma: f64, rng: &mut ChaCha8Rng) -> f64 {
    LogNormal::new(mu, sigma).map(|d| d.sample(rng)).unwrap_or(mu.exp())
}

fn profile(p: &ProfileParams, rng: &mut ChaCha8Rng) -> ProfileMetadata {
    let age = Normal::new(p.age_days_mean, p.age_days_std)
        .map(|d| d.sample(rng))
        .unwrap_or(p.age_days_mean)
        .max(30.0);
    let count = |mu: f64, rng: &mut ChaCha8Rng| log_normal(mu, p.log_spread, rng).round() as u64;
    ProfileMetadata {
        created_at: reference_time() - Duration::seconds((age * 86_400.0) as i64),
        followers_count: count(p.log_followers, rng),
        friends_count: count(p.log_friends, rng),
        favourites_count: count(p.log_favourites, rng),
        listed_count: count(p.log_listed, rng),
        statuses_count: count(p.log_statuses, rng),
    }
}

fn poisson(mean: f64, rng: &mut ChaCha8Rng) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    Poisson::new(mean).map(|d| d.sample(rng) as u64).unwrap_or(0)
}

/// Generates `n_accounts_per_class` humans followed by as many bots, using the
/// bundled lexicons.
pub fn generate_synthetic_corpus(params: &SynthParams) -> Result<Vec<AccountRecord>> {
    generate_with_lexicons(params, &Lexicons::bundled())
}

pub fn generate_with_lexicons(params: &SynthParams, lexicons: &Lexicons) -> Result<Vec<AccountRecord>> {
    params.validate()?;
    if params.n_accounts_per_class == 0 {
        return Ok(Vec::new());
    }
    let pools = Pools::new(params.human.vocab_size.max(params.bot.vocab_size), lexicons)?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut out = Vec::with_capacity(2 * params.n_accounts_per_class);
    for (label, c) in [(Label::Human, &params.human), (Label::Bot, &params.bot)] {
        let zipf = Zipf::new(c.vocab_size as f64, c.zipf_exponent).map_err(|e| Error::InvalidParams(e.to_string()))?;
        for i in 0..params.n_accounts_per_class {
            let k = params.account_concentration;
            let rates = AccountRates {
                emoticon: account_rate(c.emoticon_rate, k, &mut rng),
                contraction: account_rate(c.contraction_rate, k, &mut rng),
                url_hashtag: account_rate(c.url_hashtag_rate, k, &mut rng),
            };
            let likes_mean = log_normal(c.profile.log_likes_per_tweet, c.profile.log_spread, &mut rng);
            let retweets_mean = log_normal(c.profile.log_retweets_per_tweet, c.profile.log_spread, &mut rng);
            let stamps = timestamps(c, params.tweets_per_account, &mut rng);
            let tweets = stamps
                .into_iter()
                .map(|created_at| Tweet {
                    text: tweet_text(c, &rates, &pools, &zipf, &mut rng),
                    created_at: Some(created_at),
                    likes: Some(poisson(likes_mean, &mut rng)),
                    retweets: Some(poisson(retweets_mean, &mut rng)),
                    ..Default::default()
                })
                .collect();
            out.push(AccountRecord {
                account_id: format!("{}_{i:04}", label.as_str()),
                label: Some(label),
                screen_name: Some(screen_name(label, i, &mut rng)),
                profile: params.with_profiles.then(|| profile(&c.profile, &mut rng)),
                tweets,
            });
        }
    }
    Ok(out)
}
