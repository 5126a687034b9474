//! Documents, tokens, spans, mentions, annotations — the shared vocabulary
//! of the toolkit. All offsets are Unicode scalar-value indices, not bytes,
//! so annotation files stay portable across implementations and languages.

use serde::{Deserialize, Serialize};
use std::fmt;
use unicode_normalization::UnicodeNormalization;

/// Tag emitted when no full-name identifier could be assigned to a mention.
pub const PERSON_SENTINEL: &str = "person";

/// Title abbreviations whose terminal period stays attached during
/// tokenization ("Mr." is one token, not "Mr" + ".").
pub const TITLE_ABBREVIATIONS: &[&str] = &["mr.", "mrs.", "ms."];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub id: String,
    pub text: String,
}

impl Document {
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        Self { id: id.into(), text: text.into() }
    }

    /// Number of Unicode scalar values in the text.
    pub fn char_len(&self) -> usize {
        self.text.chars().count()
    }

    /// Substring at a character-indexed span, or `None` if out of bounds.
    pub fn slice(&self, span: Span) -> Option<String> {
        if span.start >= span.end {
            return None;
        }
        let mut chars = self.text.chars();
        let head: String = chars.by_ref().skip(span.start).take(span.end - span.start).collect();
        if head.chars().count() == span.end - span.start {
            Some(head)
        } else {
            None
        }
    }
}

/// Half-open character range `[start, end)` into a document's text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Self { start, end }
    }

    pub fn len(&self) -> usize {
        self.end.saturating_sub(self.start)
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }

    pub fn overlaps(&self, other: &Span) -> bool {
        self.start < other.end && other.start < self.end
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    pub span: Span,
}

/// Classification of the single token preceding a mention.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrefixKind {
    /// A personal title such as "Mr." or "Miss", kept with its original casing.
    Title(String),
    /// The article "the", signalling a whole-family reference.
    TheArticle,
    None,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mention {
    pub doc_id: String,
    pub span: Span,
    pub surface: String,
    pub prefix: PrefixKind,
}

/// One standoff annotation record: a span linked to a full-name tag,
/// a family tag ("the X"), or the sentinel "person".
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Annotation {
    pub doc_id: String,
    pub start: usize,
    pub end: usize,
    pub surface: String,
    pub tag: String,
}

impl Annotation {
    pub fn span(&self) -> Span {
        Span::new(self.start, self.end)
    }
}

impl fmt::Display for Annotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}-{} \"{}\" -> {}", self.doc_id, self.start, self.end, self.surface, self.tag)
    }
}

/// Sorts a standoff set into its canonical (doc_id, start) order.
pub fn sort_annotations(annotations: &mut [Annotation]) {
    annotations.sort_by(|a, b| (&a.doc_id, a.start, a.end).cmp(&(&b.doc_id, b.start, b.end)));
}

const TRAILING_PUNCT: &[char] = &['.', ',', ';', ':', '!', '?', '"', '\''];

/// Splits text into maximal non-whitespace runs, detaching trailing sentence
/// punctuation into its own tokens. A single terminal period stays attached
/// to a known title abbreviation so "Mr." survives as one token.
pub fn tokenize(text: &str) -> Vec<Token> {
    tokenize_with_abbreviations(text, TITLE_ABBREVIATIONS)
}

/// As [`tokenize`], with a caller-supplied set of period-bearing
/// abbreviations (lowercase, including the period).
pub fn tokenize_with_abbreviations(text: &str, abbreviations: &[&str]) -> Vec<Token> {
    let mut tokens = Vec::new();
    let mut run: Vec<char> = Vec::new();
    let mut run_start = 0usize;

    let flush = |run: &mut Vec<char>, run_start: usize, tokens: &mut Vec<Token>| {
        if run.is_empty() {
            return;
        }
        // Peel trailing punctuation, then re-attach a single terminal period
        // when the remainder forms a title abbreviation.
        let mut base_len = run.len();
        while base_len > 0 && TRAILING_PUNCT.contains(&run[base_len - 1]) {
            base_len -= 1;
        }
        if base_len < run.len() && run[base_len] == '.' {
            let with_period: String = run[..=base_len].iter().collect::<String>().to_lowercase();
            if abbreviations.contains(&with_period.as_str()) {
                base_len += 1;
            }
        }
        if base_len == 0 {
            // Pure punctuation chunk: each character is its own token.
            base_len = 1;
        }
        let base: String = run[..base_len].iter().collect();
        tokens.push(Token {
            text: base,
            span: Span::new(run_start, run_start + base_len),
        });
        let mut pos = run_start + base_len;
        for c in &run[base_len..] {
            tokens.push(Token {
                text: c.to_string(),
                span: Span::new(pos, pos + 1),
            });
            pos += 1;
        }
        run.clear();
    };

    for (i, c) in text.chars().enumerate() {
        if c.is_whitespace() {
            flush(&mut run, run_start, &mut tokens);
        } else {
            if run.is_empty() {
                run_start = i;
            }
            run.push(c);
        }
    }
    flush(&mut run, run_start, &mut tokens);
    tokens
}

/// Canonical comparison form: NFC, lowercased, trimmed, internal whitespace
/// runs collapsed to single spaces. Idempotent.
pub fn normalize(s: &str) -> String {
    let nfc: String = s.nfc().collect();
    let lowered = nfc.to_lowercase();
    let mut out = String::with_capacity(lowered.len());
    let mut pending_space = false;
    for c in lowered.chars() {
        if c.is_whitespace() {
            if !out.is_empty() {
                pending_space = true;
            }
        } else {
            if pending_space {
                out.push(' ');
                pending_space = false;
            }
            out.push(c);
        }
    }
    out
}
