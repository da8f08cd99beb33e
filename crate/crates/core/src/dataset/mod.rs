//! Corpus ingestion, feature-matrix persistence and the synthetic corpus
//! generator.

mod corpus;
pub(crate) mod feature_csv;
pub mod synth;

pub use corpus::{
    load_corpus, load_tweet_csv, parse_corpus, write_corpus, AccountRecord, CorpusLoad, Label, LineError, Strictness,
    Tweet,
};
pub use feature_csv::{read_feature_csv, write_feature_csv, write_matrix_csv, FeatureRow, ID_COLUMN, LABEL_COLUMN};
pub use synth::{generate_synthetic_corpus, ClassParams, ProfileParams, SynthParams};
