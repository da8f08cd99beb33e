//! Pinned word lists: stopwords, contractions and emoticons.
//!
//! Every lexicon file is UTF-8 with one entry per line. Blank lines and lines
//! starting with `#` are skipped. A manifest (`MANIFEST.tsv`, one
//! `filename<TAB>sha256-hex` line per file) pins the exact bytes of each file
//! and is checked on every load.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const STOPWORDS_FILE: &str = "stopwords.txt";
pub const CONTRACTIONS_FILE: &str = "contractions.txt";
pub const EMOTICONS_FILE: &str = "emoticons.txt";
pub const MANIFEST_FILE: &str = "MANIFEST.tsv";

/// Environment variable that points at an alternative lexicon directory.
pub const LEXICON_DIR_ENV: &str = "BOTLEX_LEXICON_DIR";

const BUNDLED_STOPWORDS: &str = include_str!("../lexicons/stopwords.txt");
const BUNDLED_CONTRACTIONS: &str = include_str!("../lexicons/contractions.txt");
const BUNDLED_EMOTICONS: &str = include_str!("../lexicons/emoticons.txt");
const BUNDLED_MANIFEST: &str = include_str!("../lexicons/MANIFEST.tsv");

/// Which emoticon entries count during matching.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmoticonPolicy {
    /// ASCII emoticons and Unicode face emoji.
    #[default]
    All,
    /// Only ASCII character compositions such as `:-)`.
    AsciiOnly,
}

/// Parsed `filename -> sha256` manifest.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ChecksumManifest {
    entries: BTreeMap<String, String>,
}

impl ChecksumManifest {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (name, digest) = line.split_once('\t').ok_or_else(|| Error::MalformedLine {
                line: i + 1,
                message: "expected filename<TAB>sha256".into(),
            })?;
            entries.insert(name.trim().to_string(), digest.trim().to_ascii_lowercase());
        }
        Ok(Self { entries })
    }

    pub fn bundled() -> Self {
        Self::parse(BUNDLED_MANIFEST).expect("bundled manifest is well formed")
    }

    pub fn get(&self, file: &str) -> Option<&str> {
        self.entries.get(file).map(String::as_str)
    }

    pub fn entries(&self) -> &BTreeMap<String, String> {
        &self.entries
    }

    fn verify(&self, file: &str, bytes: &[u8]) -> Result<String> {
        let expected = self.get(file).ok_or_else(|| Error::MissingChecksum(file.to_string()))?;
        let actual = sha256_hex(bytes);
        if actual != expected {
            return Err(Error::ChecksumMismatch {
                file: file.to_string(),
                expected: expected.to_string(),
                actual,
            });
        }
        Ok(actual)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Immutable lexicon bundle shared by the lexer and the feature extractors.
#[derive(Debug, Clone)]
pub struct Lexicons {
    stopwords: HashSet<String>,
    contractions: HashSet<String>,
    emoticons: HashSet<String>,
    max_emoticon_chars: usize,
    max_contraction_chars: usize,
    policy: EmoticonPolicy,
    checksums: BTreeMap<String, String>,
}

impl Lexicons {
    /// The lexicons compiled into the library, verified against the bundled
    /// manifest.
    pub fn bundled() -> Self {
        let manifest = ChecksumManifest::bundled();
        Self::build(
            [
                (STOPWORDS_FILE, BUNDLED_STOPWORDS),
                (CONTRACTIONS_FILE, BUNDLED_CONTRACTIONS),
                (EMOTICONS_FILE, BUNDLED_EMOTICONS),
            ],
            &manifest,
        )
        .expect("bundled lexicons match their manifest")
    }

    /// Loads the three standard file names from `dir`. The directory's own
    /// `MANIFEST.tsv` is used when present, otherwise the bundled manifest.
    pub fn from_dir(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref();
        let manifest_path = dir.join(MANIFEST_FILE);
        let manifest = if manifest_path.exists() {
            let text = fs::read_to_string(&manifest_path).map_err(|e| Error::io(&manifest_path, e))?;
            ChecksumManifest::parse(&text)?
        } else {
            ChecksumManifest::bundled()
        };
        load_lexicons(
            dir.join(STOPWORDS_FILE),
            dir.join(CONTRACTIONS_FILE),
            dir.join(EMOTICONS_FILE),
            &manifest,
        )
    }

    /// `BOTLEX_LEXICON_DIR` when set, the bundled lexicons otherwise.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os(LEXICON_DIR_ENV) {
            Some(dir) if !dir.is_empty() => Self::from_dir(PathBuf::from(dir)),
            _ => Ok(Self::bundled()),
        }
    }

    fn build(sources: [(&str, &str); 3], manifest: &ChecksumManifest) -> Result<Self> {
        let mut checksums = BTreeMap::new();
        let mut sets: Vec<HashSet<String>> = Vec::with_capacity(3);
        for (i, (name, text)) in sources.into_iter().enumerate() {
            let digest = manifest.verify(name, text.as_bytes())?;
            checksums.insert(name.to_string(), digest);
            // stopwords and contractions fold case, emoticons stay verbatim
            let set: HashSet<String> = match i {
                0 => parse_entries(text).map(str::to_lowercase).collect(),
                1 => parse_entries(text).map(fold_contraction).collect(),
                _ => parse_entries(text).map(str::to_string).collect(),
            };
            if set.is_empty() {
                return Err(Error::EmptyLexicon(name.to_string()));
            }
            sets.push(set);
        }
        let emoticons = sets.pop().unwrap();
        let contractions = sets.pop().unwrap();
        let stopwords = sets.pop().unwrap();
        Ok(Self {
            max_emoticon_chars: emoticons.iter().map(|e| e.chars().count()).max().unwrap_or(0),
            max_contraction_chars: contractions.iter().map(|c| c.chars().count()).max().unwrap_or(0),
            stopwords,
            contractions,
            emoticons,
            policy: EmoticonPolicy::All,
            checksums,
        })
    }

    pub fn with_emoticon_policy(mut self, policy: EmoticonPolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn emoticon_policy(&self) -> EmoticonPolicy {
        self.policy
    }

    pub fn stopwords(&self) -> &HashSet<String> {
        &self.stopwords
    }

    pub fn contractions(&self) -> &HashSet<String> {
        &self.contractions
    }

    pub fn emoticons(&self) -> &HashSet<String> {
        &self.emoticons
    }

    /// Verified sha256 of each loaded file, keyed by file name.
    pub fn checksums(&self) -> &BTreeMap<String, String> {
        &self.checksums
    }

    /// `word` must already be case-folded.
    pub fn is_stopword(&self, word: &str) -> bool {
        self.stopwords.contains(word)
    }

    /// Case-insensitive; U+2019 is accepted in place of `'`.
    pub fn is_contraction(&self, word: &str) -> bool {
        self.contractions.contains(&fold_contraction(word))
    }

    pub fn is_emoticon(&self, s: &str) -> bool {
        self.emoticons.contains(s) && (self.policy == EmoticonPolicy::All || s.is_ascii())
    }

    pub(crate) fn max_emoticon_chars(&self) -> usize {
        self.max_emoticon_chars
    }

    pub(crate) fn max_contraction_chars(&self) -> usize {
        self.max_contraction_chars
    }
}

impl Default for Lexicons {
    fn default() -> Self {
        Self::bundled()
    }
}

pub(crate) fn fold_contraction(word: &str) -> String {
    word.to_lowercase().replace('\u{2019}', "'")
}

fn parse_entries(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
}

/// Loads and verifies the three lexicon files against `manifest`.
///
/// Manifest entries are looked up by each file's name, so custom files must
/// be listed under their own names.
pub fn load_lexicons(
    stopword_path: impl AsRef<Path>,
    contraction_path: impl AsRef<Path>,
    emoticon_path: impl AsRef<Path>,
    manifest: &ChecksumManifest,
) -> Result<Lexicons> {
    let read = |p: &Path| -> Result<(String, String)> {
        let text = fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
        let name = p
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        Ok((name, text))
    };
    let (sw_name, sw) = read(stopword_path.as_ref())?;
    let (ct_name, ct) = read(contraction_path.as_ref())?;
    let (em_name, em) = read(emoticon_path.as_ref())?;
    Lexicons::build([(&sw_name, &sw), (&ct_name, &ct), (&em_name, &em)], manifest)
}
