//! Candidate-mention recognition. Three interchangeable strategies feed the
//! disambiguation phase: a capitalization heuristic, a gazetteer over the
//! protagonist list, and an import path for externally produced NER spans.
//! All of them favour recall; the matcher demotes false positives to the
//! "person" sentinel.

use crate::lexicons::{DiminutiveLexicon, TitleLexicon};
use crate::matcher::ProtagonistList;
use crate::standoff;
use crate::text_model::{
    normalize, tokenize_with_abbreviations, Document, Mention, PrefixKind, Span, Token,
    TITLE_ABBREVIATIONS,
};
use std::collections::{HashMap, HashSet};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ImportError {
    #[error("record {index}: unknown doc_id {doc_id:?}")]
    UnknownDoc { index: usize, doc_id: String },
    #[error("record {index}: span {start}..{end} out of bounds for doc {doc_id:?}")]
    SpanOutOfBounds { index: usize, doc_id: String, start: usize, end: usize },
    #[error("record {index}: surface {recorded:?} does not match document text {actual:?}")]
    SurfaceMismatch { index: usize, recorded: String, actual: String },
    #[error(transparent)]
    Standoff(#[from] standoff::StandoffError),
}

/// Recognition strategy selector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RecognizerKind {
    Heuristic,
    Gazetteer,
    Import(std::path::PathBuf),
}

fn doc_tokens(doc: &Document, titles: &TitleLexicon) -> Vec<Token> {
    let abbrevs = titles.period_abbreviations();
    let mut refs: Vec<&str> = abbrevs.iter().map(String::as_str).collect();
    for a in TITLE_ABBREVIATIONS {
        if !refs.contains(a) {
            refs.push(a);
        }
    }
    tokenize_with_abbreviations(&doc.text, &refs)
}

fn is_capitalized(token: &str) -> bool {
    token.chars().next().is_some_and(char::is_uppercase)
}

fn mention_from_run(doc: &Document, run: &[Token], titles: &TitleLexicon) -> Mention {
    let span = Span::new(run[0].span.start, run[run.len() - 1].span.end);
    let surface = doc.slice(span).expect("run spans lie inside the document");
    Mention {
        doc_id: doc.id.clone(),
        span,
        surface,
        prefix: extract_prefix(doc, span, titles),
    }
}

/// Mentions are maximal runs of consecutive capitalized tokens that are
/// neither stopwords nor titles; a preceding title becomes the prefix but
/// never part of the span.
pub fn recognize_heuristic(
    doc: &Document,
    titles: &TitleLexicon,
    stopwords: &HashSet<String>,
) -> Vec<Mention> {
    let tokens = doc_tokens(doc, titles);
    let qualifies = |t: &Token| {
        is_capitalized(&t.text) && !titles.is_title(&t.text) && !stopwords.contains(&normalize(&t.text))
    };
    collect_runs(doc, &tokens, titles, qualifies)
}

/// Mentions are maximal runs of tokens that case-insensitively match a
/// protagonist name token or a known diminutive. Leftmost-longest;
/// titles act as prefixes, not span members.
pub fn recognize_gazetteer(
    doc: &Document,
    protagonists: &ProtagonistList,
    diminutives: &DiminutiveLexicon,
    titles: &TitleLexicon,
) -> Vec<Mention> {
    let mut vocabulary: HashSet<&str> = HashSet::new();
    for p in protagonists.iter() {
        for t in &p.name_tokens {
            vocabulary.insert(t.as_str());
        }
    }
    let tokens = doc_tokens(doc, titles);
    let qualifies = |t: &Token| {
        let norm = normalize(&t.text);
        vocabulary.contains(norm.as_str()) || diminutives.contains(&norm)
    };
    collect_runs(doc, &tokens, titles, qualifies)
}

fn collect_runs(
    doc: &Document,
    tokens: &[Token],
    titles: &TitleLexicon,
    qualifies: impl Fn(&Token) -> bool,
) -> Vec<Mention> {
    let mut mentions = Vec::new();
    let mut run: Vec<Token> = Vec::new();
    for tok in tokens {
        if titles.is_title(&tok.text) {
            // A title closes any open run and prefixes whatever follows.
            if !run.is_empty() {
                mentions.push(mention_from_run(doc, &run, titles));
                run.clear();
            }
            continue;
        }
        if qualifies(tok) {
            run.push(tok.clone());
        } else if !run.is_empty() {
            mentions.push(mention_from_run(doc, &run, titles));
            run.clear();
        }
    }
    if !run.is_empty() {
        mentions.push(mention_from_run(doc, &run, titles));
    }
    mentions
}

/// Reads a standoff file of externally recognized person spans, validating
/// each record against the corpus text.
pub fn import_mentions(
    path: &Path,
    docs: &[Document],
    titles: &TitleLexicon,
) -> Result<Vec<Mention>, ImportError> {
    let records = standoff::read_file(path)?;
    let by_id: HashMap<&str, &Document> = docs.iter().map(|d| (d.id.as_str(), d)).collect();
    let mut mentions = Vec::new();
    for (index, rec) in records.iter().enumerate() {
        let doc = by_id.get(rec.doc_id.as_str()).ok_or_else(|| ImportError::UnknownDoc {
            index,
            doc_id: rec.doc_id.clone(),
        })?;
        let span = rec.span();
        let actual = doc.slice(span).ok_or(ImportError::SpanOutOfBounds {
            index,
            doc_id: rec.doc_id.clone(),
            start: rec.start,
            end: rec.end,
        })?;
        if actual != rec.surface {
            return Err(ImportError::SurfaceMismatch {
                index,
                recorded: rec.surface.clone(),
                actual,
            });
        }
        mentions.push(Mention {
            doc_id: rec.doc_id.clone(),
            span,
            surface: actual,
            prefix: extract_prefix(doc, span, titles),
        });
    }
    Ok(mentions)
}

/// Classifies the single token immediately preceding a span: a title, the
/// article "the", or nothing.
pub fn extract_prefix(doc: &Document, span: Span, titles: &TitleLexicon) -> PrefixKind {
    let tokens = doc_tokens(doc, titles);
    let preceding = tokens.iter().rev().find(|t| t.span.end <= span.start);
    match preceding {
        Some(tok) if titles.is_title(&tok.text) => PrefixKind::Title(tok.text.clone()),
        Some(tok) if normalize(&tok.text) == "the" => PrefixKind::TheArticle,
        _ => PrefixKind::None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicons::DiminutiveLexicon;

    fn titles() -> TitleLexicon {
        TitleLexicon::standard()
    }

    fn stopwords() -> HashSet<String> {
        ["the", "a", "she", "he"].iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn heuristic_title_becomes_prefix() {
        let doc = Document::new("d", "Mr. Bennet spoke.");
        let mentions = recognize_heuristic(&doc, &titles(), &stopwords());
        assert_eq!(mentions.len(), 1);
        assert_eq!(mentions[0].surface, "Bennet");
        assert_eq!(mentions[0].prefix, PrefixKind::Title("Mr.".into()));
    }

    #[test]
    fn heuristic_no_capitals_no_mentions() {
        let doc = Document::new("d", "she walked home");
        assert!(recognize_heuristic(&doc, &titles(), &stopwords()).is_empty());
    }

    #[test]
    fn heuristic_two_runs() {
        let doc = Document::new("d", "Elizabeth Bennet met Jane");
        let mentions = recognize_heuristic(&doc, &titles(), &stopwords());
        let surfaces: Vec<&str> = mentions.iter().map(|m| m.surface.as_str()).collect();
        assert_eq!(surfaces, ["Elizabeth Bennet", "Jane"]);
    }

    #[test]
    fn gazetteer_diminutive_token_qualifies() {
        let doc = Document::new("d", "Lizzy laughed");
        let list = ProtagonistList::from_tags(["Elizabeth Bennet"], &titles()).unwrap();
        let dims = DiminutiveLexicon::from_pairs([("lizzy", "elizabeth")]);
        let mentions = recognize_gazetteer(&doc, &list, &dims, &titles());
        assert_eq!(mentions.len(), 1);
        assert_eq!(mentions[0].surface, "Lizzy");
    }

    #[test]
    fn gazetteer_misses_unknown_tokens() {
        let doc = Document::new("d", "Nothing of note happened today.");
        let list = ProtagonistList::from_tags(["Elizabeth Bennet"], &titles()).unwrap();
        let dims = DiminutiveLexicon::default();
        assert!(recognize_gazetteer(&doc, &list, &dims, &titles()).is_empty());
    }

    #[test]
    fn gazetteer_title_surname() {
        let doc = Document::new("d", "Miss Bennet arrived.");
        let list = ProtagonistList::from_tags(["Elizabeth Bennet", "Mr. Bennet"], &titles()).unwrap();
        let dims = DiminutiveLexicon::default();
        let mentions = recognize_gazetteer(&doc, &list, &dims, &titles());
        assert_eq!(mentions.len(), 1);
        assert_eq!(mentions[0].surface, "Bennet");
        assert_eq!(mentions[0].prefix, PrefixKind::Title("Miss".into()));
    }

    #[test]
    fn gazetteer_full_name_recall() {
        let doc = Document::new("d", "It was Elizabeth Bennet who answered.");
        let list = ProtagonistList::from_tags(["Elizabeth Bennet"], &titles()).unwrap();
        let dims = DiminutiveLexicon::default();
        let mentions = recognize_gazetteer(&doc, &list, &dims, &titles());
        assert!(mentions.iter().any(|m| m.surface == "Elizabeth Bennet"));
    }

    #[test]
    fn extract_prefix_cases() {
        let t = titles();
        let doc = Document::new("d", "the Bennet family");
        assert_eq!(extract_prefix(&doc, Span::new(4, 10), &t), PrefixKind::TheArticle);
        let doc = Document::new("d", "Mrs. Bennet");
        assert_eq!(extract_prefix(&doc, Span::new(5, 11), &t), PrefixKind::Title("Mrs.".into()));
        let doc = Document::new("d", "Bennet spoke");
        assert_eq!(extract_prefix(&doc, Span::new(0, 6), &t), PrefixKind::None);
    }

    #[test]
    fn mentions_are_sorted_and_non_overlapping() {
        let doc = Document::new("d", "Mr. Darcy saw Elizabeth Bennet and Miss Bingley near Longbourn.");
        let mentions = recognize_heuristic(&doc, &titles(), &stopwords());
        for pair in mentions.windows(2) {
            assert!(pair[0].span.end <= pair[1].span.start);
        }
        for m in &mentions {
            assert_eq!(doc.slice(m.span).as_deref(), Some(m.surface.as_str()));
        }
    }
}
