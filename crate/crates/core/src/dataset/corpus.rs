use std::collections::HashSet;
use std::fs;
use std::io::Write;
use std::path::Path;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profile::ProfileMetadata;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Human,
    Bot,
}

impl Label {
    /// Class encoding used by the classifiers: bot is the positive class.
    pub fn as_class(self) -> u8 {
        match self {
            Label::Human => 0,
            Label::Bot => 1,
        }
    }

    pub fn from_class(class: u8) -> Self {
        if class == 1 {
            Label::Bot
        } else {
            Label::Human
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Human => "human",
            Label::Bot => "bot",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "human" | "0" => Some(Label::Human),
            "bot" | "1" => Some(Label::Bot),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Tweet {
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub created_at: Option<DateTime<Utc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub likes: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub retweets: Option<u64>,
    /// Structured reply marker; when absent the `@` text prefix is used.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub is_reply: Option<bool>,
    /// Structured retweet marker; when absent the `RT @` text prefix is used.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub is_retweet: Option<bool>,
}

impl Tweet {
    pub fn new(text: impl Into<String>) -> Self {
        Self {
            text: text.into(),
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AccountRecord {
    pub account_id: String,
    #[serde(default)]
    pub label: Option<Label>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub screen_name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<ProfileMetadata>,
    #[serde(default)]
    pub tweets: Vec<Tweet>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strictness {
    /// Any malformed line aborts the load.
    #[default]
    Strict,
    /// Malformed lines are skipped and reported.
    Lenient,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LineError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, Default)]
pub struct CorpusLoad {
    pub records: Vec<AccountRecord>,
    pub errors: Vec<LineError>,
}

pub fn load_corpus(path: impl AsRef<Path>, strictness: Strictness) -> Result<CorpusLoad> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_corpus(&text, strictness)
}

/// Parses JSONL corpus text: one account object per line, blank lines ignored.
/// Duplicate ids are an error in both strictness modes.
pub fn parse_corpus(text: &str, strictness: Strictness) -> Result<CorpusLoad> {
    let mut load = CorpusLoad::default();
    let mut seen = HashSet::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let parsed = serde_json::from_str::<AccountRecord>(line)
            .map_err(|e| e.to_string())
            .and_then(|r| {
                if r.account_id.trim().is_empty() {
                    Err("account_id is empty".to_string())
                } else {
                    Ok(r)
                }
            });
        match parsed {
            Ok(record) => {
                if !seen.insert(record.account_id.clone()) {
                    return Err(Error::DuplicateId(record.account_id));
                }
                load.records.push(record);
            }
            Err(message) => match strictness {
                Strictness::Strict => return Err(Error::MalformedLine { line: line_no, message }),
                Strictness::Lenient => load.errors.push(LineError { line: line_no, message }),
            },
        }
    }
    Ok(load)
}

pub fn write_corpus(records: &[AccountRecord], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut out = Vec::new();
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.push(b'\n');
    }
    let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(&out).map_err(|e| Error::io(path, e))
}

#[derive(Debug, Deserialize)]
struct TweetCsvRow {
    account_id: String,
    #[serde(default)]
    label: Option<String>,
    text: String,
    #[serde(default)]
    created_at: Option<String>,
}

/// Imports a simple per-tweet CSV (`account_id,label,text[,created_at]`),
/// grouping rows into accounts in order of first appearance.
pub fn load_tweet_csv(path: impl AsRef<Path>) -> Result<Vec<AccountRecord>> {
    let path = path.as_ref();
    let mut reader = csv::Reader::from_path(path)?;
    let mut records: Vec<AccountRecord> = Vec::new();
    let mut index = std::collections::HashMap::new();
    for (i, row) in reader.deserialize::<TweetCsvRow>().enumerate() {
        let line = i + 2;
        let row = row.map_err(|e| Error::MalformedLine {
            line,
            message: e.to_string(),
        })?;
        if row.account_id.trim().is_empty() {
            return Err(Error::MalformedLine {
                line,
                message: "account_id is empty".into(),
            });
        }
        let label = match row.label.as_deref().map(str::trim) {
            None | Some("") => None,
            Some(s) => Some(Label::parse(s).ok_or_else(|| Error::MalformedLine {
                line,
                message: format!("unknown label {s:?}"),
            })?),
        };
        let created_at = match row.created_at.as_deref().map(str::trim) {
            None | Some("") => None,
            Some(s) => Some(
                DateTime::parse_from_rfc3339(s)
                    .map_err(|e| Error::MalformedLine {
                        line,
                        message: format!("created_at: {e}"),
                    })?
                    .with_timezone(&Utc),
            ),
        };
        let slot = *index.entry(row.account_id.clone()).or_insert_with(|| {
            records.push(AccountRecord {
                account_id: row.account_id.clone(),
                label,
                ..Default::default()
            });
            records.len() - 1
        });
        let record = &mut records[slot];
        if record.label.is_none() {
            record.label = label;
        }
        record.tweets.push(Tweet {
            text: row.text,
            created_at,
            ..Default::default()
        });
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO: &str = concat!(
        r#"{"account_id":"a1","label":"human","screen_name":"alice","tweets":[{"text":"hi there","created_at":"2019-01-01T10:00:00Z","likes":3,"retweets":1}]}"#,
        "\n",
        r#"{"account_id":"b1","label":null,"profile":{"created_at":"2015-03-01T00:00:00Z","followers_count":10,"friends_count":5,"favourites_count":1,"listed_count":0,"statuses_count":40},"tweets":[]}"#,
        "\n"
    );

    #[test]
    fn loads_valid_lines() {
        let load = parse_corpus(TWO, Strictness::Strict).unwrap();
        assert_eq!(load.records.len(), 2);
        assert_eq!(load.records[0].label, Some(Label::Human));
        assert_eq!(load.records[0].tweets[0].likes, Some(3));
        assert_eq!(load.records[1].label, None);
        assert_eq!(load.records[1].profile.as_ref().unwrap().statuses_count, 40);
    }

    #[test]
    fn missing_id_strict_vs_lenient() {
        let text = format!("{TWO}{{\"label\":\"bot\",\"tweets\":[]}}\n");
        match parse_corpus(&text, Strictness::Strict) {
            Err(Error::MalformedLine { line, message }) => {
                assert_eq!(line, 3);
                assert!(message.contains("account_id"), "{message}");
            }
            other => panic!("{other:?}"),
        }
        let load = parse_corpus(&text, Strictness::Lenient).unwrap();
        assert_eq!(load.records.len(), 2);
        assert_eq!(load.errors.len(), 1);
        assert_eq!(load.errors[0].line, 3);
    }

    #[test]
    fn duplicate_id() {
        let line = r#"{"account_id":"x","tweets":[]}"#;
        let err = parse_corpus(&format!("{line}\n{line}\n"), Strictness::Lenient).unwrap_err();
        assert!(err.to_string().contains("duplicate id"));
    }

    #[test]
    fn write_then_load_preserves_order() {
        let records = parse_corpus(TWO, Strictness::Strict).unwrap().records;
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.jsonl");
        write_corpus(&records, &path).unwrap();
        assert_eq!(load_corpus(&path, Strictness::Strict).unwrap().records, records);
    }

    #[test]
    fn tweet_csv_groups_by_account() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        fs::write(
            &path,
            "account_id,label,text,created_at\nu1,bot,hello,2019-01-01T00:00:00Z\nu2,human,yo,\nu1,bot,again,\n",
        )
        .unwrap();
        let records = load_tweet_csv(&path).unwrap();
        assert_eq!(records.len(), 2);
        assert_eq!(records[0].account_id, "u1");
        assert_eq!(records[0].tweets.len(), 2);
        assert!(records[0].tweets[0].created_at.is_some());
        assert_eq!(records[1].label, Some(Label::Human));
    }
}
