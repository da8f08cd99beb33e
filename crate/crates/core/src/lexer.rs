//! Tweet tokenizer.
//!
//! Input is split on Unicode whitespace. Each chunk is then scanned left to
//! right, and at every position the first rule that matches wins:
//!
//! 1. URL: `http://` or `https://` up to the end of the chunk
//! 2. MENTION: `@` followed by 1 to 15 of `[A-Za-z0-9_]`
//! 3. HASHTAG: `#` followed by one or more word characters
//! 4. EMOTICON: longest lexicon match
//! 5. CONTRACTION: longest case-insensitive lexicon match (apostrophe required)
//! 6. NUMBER: ASCII digits with optional `.`/`,` separators between digit groups
//! 7. WORD: a run of alphanumerics and `_` starting with an alphanumeric
//! 8. PUNCT: a run of other symbols, cut short wherever rules 1-5 could start
//!
//! Lexicon matches whose alphanumeric edge touches another alphanumeric are
//! rejected, so `:Dog` is not `:D` + `og` and `don'ts` is not `don't` + `s`.

use serde::{Deserialize, Serialize};

use crate::lexicon::Lexicons;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TokenKind {
    Word,
    Url,
    Mention,
    Hashtag,
    Emoticon,
    Contraction,
    Number,
    Punct,
}

impl TokenKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TokenKind::Word => "WORD",
            TokenKind::Url => "URL",
            TokenKind::Mention => "MENTION",
            TokenKind::Hashtag => "HASHTAG",
            TokenKind::Emoticon => "EMOTICON",
            TokenKind::Contraction => "CONTRACTION",
            TokenKind::Number => "NUMBER",
            TokenKind::Punct => "PUNCT",
        }
    }
}

impl std::fmt::Display for TokenKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Byte range `[start, end)` into the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Token {
    pub text: String,
    pub kind: TokenKind,
    pub span: Span,
}

impl Token {
    /// The form used for vocabulary counting: WORD and CONTRACTION tokens are
    /// case-folded, every other kind is kept verbatim.
    pub fn type_key(&self) -> String {
        match self.kind {
            TokenKind::Word => self.text.to_lowercase(),
            TokenKind::Contraction => crate::lexicon::fold_contraction(&self.text),
            _ => self.text.clone(),
        }
    }
}

const MAX_MENTION: usize = 15;

pub fn tokenize(text: &str, lexicons: &Lexicons) -> Vec<Token> {
    let mut tokens = Vec::new();
    let mut chunk_start = None;
    for (i, c) in text.char_indices() {
        match (c.is_whitespace(), chunk_start) {
            (true, Some(start)) => {
                Chunk::new(text, start, i, lexicons).scan(&mut tokens);
                chunk_start = None;
            }
            (false, None) => chunk_start = Some(i),
            _ => {}
        }
    }
    if let Some(start) = chunk_start {
        Chunk::new(text, start, text.len(), lexicons).scan(&mut tokens);
    }
    tokens
}

/// True for text that the URL rule would claim at a chunk start.
pub fn is_url(s: &str) -> bool {
    starts_with_ignore_case(s, "http://") || starts_with_ignore_case(s, "https://")
}

fn starts_with_ignore_case(s: &str, prefix: &str) -> bool {
    s.len() >= prefix.len() && s.as_bytes()[..prefix.len()].eq_ignore_ascii_case(prefix.as_bytes())
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '\u{2019}'
}

struct Chunk<'a> {
    text: &'a str,
    start: usize,
    end: usize,
    lexicons: &'a Lexicons,
}

impl<'a> Chunk<'a> {
    fn new(text: &'a str, start: usize, end: usize, lexicons: &'a Lexicons) -> Self {
        Self {
            text,
            start,
            end,
            lexicons,
        }
    }

    fn char_at(&self, pos: usize) -> Option<char> {
        if pos >= self.end {
            return None;
        }
        self.text[pos..self.end].chars().next()
    }

    fn char_before(&self, pos: usize) -> Option<char> {
        if pos <= self.start {
            return None;
        }
        self.text[self.start..pos].chars().next_back()
    }

    fn scan(&self, out: &mut Vec<Token>) {
        let mut pos = self.start;
        while pos < self.end {
            let (kind, end) = self
                .special_at(pos)
                .or_else(|| self.number_or_word_at(pos))
                .unwrap_or_else(|| (TokenKind::Punct, self.punct_end(pos)));
            out.push(Token {
                text: self.text[pos..end].to_string(),
                kind,
                span: Span { start: pos, end },
            });
            pos = end;
        }
    }

    /// Rules 1-5, the ones that may interrupt a punctuation run.
    fn special_at(&self, pos: usize) -> Option<(TokenKind, usize)> {
        let rest = &self.text[pos..self.end];
        if is_url(rest) {
            return Some((TokenKind::Url, self.end));
        }
        let first = rest.chars().next()?;
        if first == '@' {
            let len = rest[1..]
                .bytes()
                .take(MAX_MENTION)
                .take_while(|b| b.is_ascii_alphanumeric() || *b == b'_')
                .count();
            if len > 0 {
                return Some((TokenKind::Mention, pos + 1 + len));
            }
        }
        if first == '#' {
            let len: usize = rest[1..]
                .chars()
                .take_while(|c| is_word_char(*c))
                .map(char::len_utf8)
                .sum();
            if len > 0 {
                return Some((TokenKind::Hashtag, pos + 1 + len));
            }
        }
        if let Some(end) = self.emoticon_at(pos) {
            return Some((TokenKind::Emoticon, end));
        }
        if let Some(end) = self.contraction_at(pos) {
            return Some((TokenKind::Contraction, end));
        }
        None
    }

    /// Character-boundary end offsets of the first `max` chars from `pos`
    /// accepted by `keep`, shortest first.
    fn boundaries(&self, pos: usize, max: usize, keep: impl Fn(char) -> bool) -> Vec<usize> {
        self.text[pos..self.end]
            .char_indices()
            .take(max)
            .take_while(|(_, c)| keep(*c))
            .map(|(i, c)| pos + i + c.len_utf8())
            .collect()
    }

    /// Rejects a lexicon match whose alphanumeric first or last character
    /// continues an alphanumeric run outside the match.
    fn edges_clear(&self, pos: usize, end: usize) -> bool {
        let matched = &self.text[pos..end];
        let alnum = |c: Option<char>| c.is_some_and(char::is_alphanumeric);
        let first = matched.chars().next();
        let last = matched.chars().next_back();
        !(alnum(first) && alnum(self.char_before(pos)) || alnum(last) && alnum(self.char_at(end)))
    }

    fn emoticon_at(&self, pos: usize) -> Option<usize> {
        self.boundaries(pos, self.lexicons.max_emoticon_chars(), |_| true)
            .into_iter()
            .rev()
            .find(|&end| self.lexicons.is_emoticon(&self.text[pos..end]) && self.edges_clear(pos, end))
    }

    fn contraction_at(&self, pos: usize) -> Option<usize> {
        let boundaries = self.boundaries(pos, self.lexicons.max_contraction_chars(), |c| {
            is_word_char(c) || is_apostrophe(c)
        });
        boundaries.into_iter().rev().find(|&end| {
            let candidate = &self.text[pos..end];
            candidate.chars().any(is_apostrophe)
                && self.lexicons.is_contraction(candidate)
                && !self.char_at(end).is_some_and(is_word_char)
        })
    }

    fn number_or_word_at(&self, pos: usize) -> Option<(TokenKind, usize)> {
        if !self.char_at(pos)?.is_alphanumeric() {
            return None;
        }
        let run_end = pos
            + self.text[pos..self.end]
                .chars()
                .take_while(|c| is_word_char(*c))
                .map(char::len_utf8)
                .sum::<usize>();
        let run = &self.text[pos..run_end];
        if !run.bytes().all(|b| b.is_ascii_digit()) {
            return Some((TokenKind::Word, run_end));
        }
        // extend over `.`/`,` separators that sit between digit groups
        let bytes = self.text.as_bytes();
        let mut end = run_end;
        while end + 1 < self.end && matches!(bytes[end], b'.' | b',') && bytes[end + 1].is_ascii_digit() {
            let group = bytes[end + 1..self.end]
                .iter()
                .take_while(|b| b.is_ascii_digit())
                .count();
            let next = end + 1 + group;
            // a digit group glued to letters is not part of the number
            if self.char_at(next).is_some_and(is_word_char) {
                break;
            }
            end = next;
        }
        Some((TokenKind::Number, end))
    }

    fn punct_end(&self, pos: usize) -> usize {
        let mut chars = self.text[pos..self.end].char_indices();
        let (_, first) = chars.next().expect("punct_end called inside chunk");
        let mut end = pos + first.len_utf8();
        for (i, c) in chars {
            let at = pos + i;
            if c.is_alphanumeric() || self.special_at(at).is_some() {
                break;
            }
            end = at + c.len_utf8();
        }
        end
    }
}
