use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("empty lexicon: {0}")]
    EmptyLexicon(String),

    #[error("checksum mismatch for {file}: expected {expected}, found {actual}")]
    ChecksumMismatch {
        file: String,
        expected: String,
        actual: String,
    },

    #[error("no checksum recorded for {0}")]
    MissingChecksum(String),

    #[error("empty token list")]
    EmptyTokens,

    #[error("account {0} has no usable tweets")]
    UnusableAccount(String),

    #[error("screen name is empty")]
    EmptyScreenName,

    #[error("account created at {created_at} is after reference time {now}")]
    CreatedInFuture { created_at: String, now: String },

    #[error("invalid training data: {0}")]
    InvalidData(String),

    #[error("feature names do not match the model manifest: expected {expected:?}, got {actual:?}")]
    FeatureMismatch { expected: Vec<String>, actual: Vec<String> },

    #[error("operation requires a {expected} model, got {actual}")]
    WrongModelKind { expected: String, actual: String },

    #[error("class {class} has {count} rows, fewer than the {k} folds requested")]
    ClassTooSmall { class: u8, count: usize, k: usize },

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("AUC is undefined when only one class is present")]
    SingleClass,

    #[error("line {line}: {message}")]
    MalformedLine { line: usize, message: String },

    #[error("duplicate id {0}")]
    DuplicateId(String),

    #[error("missing column(s): {}", .0.join(", "))]
    MissingColumns(Vec<String>),

    #[error("malformed CSV: {0}")]
    Csv(String),

    #[error("invalid synthetic parameters: {0}")]
    InvalidParams(String),

    #[error(
        "missing profile fields ({}) for {} account(s): {}",
        .fields.join(", "),
        .accounts.len(),
        .accounts.join(", ")
    )]
    MissingProfile { fields: Vec<String>, accounts: Vec<String> },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Csv(e.to_string())
    }
}
