//! Social bot detection from the lexical richness of tweets.
//!
//! The crate tokenizes tweets ([`lexer`]) against pinned lexicons
//! ([`lexicon`]), measures type-token ratio, lexical diversity, contraction
//! and emoticon usage per tweet and per account ([`features`]), derives
//! profile-metadata features ([`profile`]), screens accounts with simple
//! annotation heuristics ([`annotate`]) and classifies them with natively
//! implemented models ([`classifiers`]) evaluated by stratified
//! cross-validation ([`eval`]).

pub mod annotate;
pub mod classifiers;
pub mod cli;
pub mod dataset;
pub mod error;
pub mod eval;
pub mod features;
pub mod lexer;
pub mod lexicon;
pub mod pipeline;
pub mod profile;

pub use error::{Error, Result};
