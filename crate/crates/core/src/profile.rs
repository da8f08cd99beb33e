//! Account-metadata features (the profile, or F, feature set).
//!
//! Ratios use guarded denominators (`max(x, 1)`) so every output is finite for
//! non-negative counts.

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::dataset::Tweet;
use crate::error::{Error, Result};
use crate::lexer::is_url;

/// Column names of the profile feature set, in CSV order.
pub const PROFILE_FEATURES: [&str; 10] = [
    "age_days",
    "fav_to_tweets",
    "lists",
    "followers_to_friends",
    "likes_per_tweet",
    "retweets_per_tweet",
    "user_replies",
    "user_retweets",
    "tweet_frequency",
    "urls_count",
];

/// Field names of [`ProfileMetadata`], reported when a corpus lacks them.
pub const PROFILE_FIELDS: [&str; 6] = [
    "created_at",
    "followers_count",
    "friends_count",
    "favourites_count",
    "listed_count",
    "statuses_count",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileMetadata {
    pub created_at: DateTime<Utc>,
    pub followers_count: u64,
    pub friends_count: u64,
    pub favourites_count: u64,
    pub listed_count: u64,
    pub statuses_count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileFeatureVector {
    pub age_days: f64,
    pub favourites_to_tweets: f64,
    pub lists_per_user: f64,
    pub followers_to_friends: f64,
    pub likes_per_tweet: f64,
    pub retweets_per_tweet: f64,
    pub user_replies: f64,
    pub user_retweets: f64,
    pub tweet_frequency: f64,
    pub urls_count: f64,
}

impl ProfileFeatureVector {
    /// Values in [`PROFILE_FEATURES`] order.
    pub fn values(&self) -> [f64; 10] {
        [
            self.age_days,
            self.favourites_to_tweets,
            self.lists_per_user,
            self.followers_to_friends,
            self.likes_per_tweet,
            self.retweets_per_tweet,
            self.user_replies,
            self.user_retweets,
            self.tweet_frequency,
            self.urls_count,
        ]
    }
}

pub fn is_retweet(tweet: &Tweet) -> bool {
    tweet.is_retweet.unwrap_or_else(|| tweet.text.starts_with("RT @"))
}

pub fn is_reply(tweet: &Tweet) -> bool {
    tweet.is_reply.unwrap_or_else(|| tweet.text.starts_with('@'))
}

fn url_count(text: &str) -> usize {
    text.split_whitespace().filter(|w| is_url(w)).count()
}

fn mean(values: impl Iterator<Item = f64>, n: usize) -> f64 {
    if n == 0 {
        0.0
    } else {
        values.sum::<f64>() / n as f64
    }
}

pub fn profile_features(meta: &ProfileMetadata, tweets: &[Tweet], now: DateTime<Utc>) -> Result<ProfileFeatureVector> {
    if meta.created_at > now {
        return Err(Error::CreatedInFuture {
            created_at: meta.created_at.to_rfc3339(),
            now: now.to_rfc3339(),
        });
    }
    let age_days = (now - meta.created_at).num_milliseconds() as f64 / 86_400_000.0;
    let n = tweets.len();
    Ok(ProfileFeatureVector {
        age_days,
        favourites_to_tweets: meta.favourites_count as f64 / meta.statuses_count.max(1) as f64,
        lists_per_user: meta.listed_count as f64,
        followers_to_friends: meta.followers_count as f64 / meta.friends_count.max(1) as f64,
        likes_per_tweet: mean(tweets.iter().map(|t| t.likes.unwrap_or(0) as f64), n),
        retweets_per_tweet: mean(tweets.iter().map(|t| t.retweets.unwrap_or(0) as f64), n),
        user_replies: tweets.iter().filter(|t| is_reply(t)).count() as f64,
        user_retweets: tweets.iter().filter(|t| is_retweet(t)).count() as f64,
        tweet_frequency: meta.statuses_count as f64 / age_days.max(1.0),
        urls_count: mean(tweets.iter().map(|t| url_count(&t.text) as f64), n),
    })
}
