//! Glue between the two phases: recognize candidate mentions, disambiguate
//! each against the protagonist list, and emit standoff annotations.

use crate::matcher::{find_best_match, MatchConfig, MatchOutcome, ProtagonistList};
use crate::recognizer::{
    import_mentions, recognize_gazetteer, recognize_heuristic, ImportError, RecognizerKind,
};
use crate::text_model::{sort_annotations, Annotation, Document, Mention};
use std::collections::HashSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("duplicate doc id {0:?}")]
    DuplicateDocId(String),
    #[error(transparent)]
    Import(#[from] ImportError),
    #[error("overlapping annotations at {doc_id}:{at}")]
    OverlappingAnnotations { doc_id: String, at: usize },
    #[error("annotation span out of bounds at {doc_id}:{start}..{end}")]
    SpanOutOfBounds { doc_id: String, start: usize, end: usize },
}

/// Default English stopword list for the heuristic recognizer; replaced by
/// a one-word-per-line file for other languages.
pub const DEFAULT_STOPWORDS: &str = include_str!("../data/stopwords_en.txt");

pub fn default_stopwords() -> HashSet<String> {
    parse_stopwords(DEFAULT_STOPWORDS)
}

pub fn parse_stopwords(source: &str) -> HashSet<String> {
    source
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| crate::text_model::normalize(l))
        .collect()
}

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub recognizer: RecognizerKind,
    pub match_config: MatchConfig,
    /// Whether "person"-sentinel annotations are written. Off for corpus
    /// building, on when scoring the recognition phase alone.
    pub emit_unmatched: bool,
    pub stopwords: HashSet<String>,
}

impl PipelineConfig {
    pub fn new(recognizer: RecognizerKind, match_config: MatchConfig) -> Self {
        Self {
            recognizer,
            match_config,
            emit_unmatched: false,
            stopwords: default_stopwords(),
        }
    }
}

fn recognize(
    doc: &Document,
    protagonists: &ProtagonistList,
    cfg: &PipelineConfig,
) -> Result<Vec<Mention>, PipelineError> {
    let mentions = match &cfg.recognizer {
        RecognizerKind::Heuristic => {
            recognize_heuristic(doc, &cfg.match_config.titles, &cfg.stopwords)
        }
        RecognizerKind::Gazetteer => recognize_gazetteer(
            doc,
            protagonists,
            &cfg.match_config.diminutives,
            &cfg.match_config.titles,
        ),
        RecognizerKind::Import(path) => {
            let docs = std::slice::from_ref(doc);
            import_mentions(path, docs, &cfg.match_config.titles)?
        }
    };
    Ok(mentions)
}

/// Runs both phases over one document. Every mention yields exactly one
/// annotation; unmatched mentions surface as "person" only when configured.
pub fn annotate_document(
    doc: &Document,
    protagonists: &ProtagonistList,
    cfg: &PipelineConfig,
) -> Result<Vec<Annotation>, PipelineError> {
    let mentions = recognize(doc, protagonists, cfg)?;
    let mut annotations = Vec::with_capacity(mentions.len());
    for mention in mentions {
        let outcome = find_best_match(
            &mention.surface,
            &mention.prefix,
            protagonists,
            &cfg.match_config,
        );
        if matches!(outcome, MatchOutcome::Unmatched) && !cfg.emit_unmatched {
            continue;
        }
        annotations.push(Annotation {
            doc_id: mention.doc_id,
            start: mention.span.start,
            end: mention.span.end,
            surface: mention.surface,
            tag: outcome.tag().to_string(),
        });
    }
    sort_annotations(&mut annotations);
    Ok(annotations)
}

/// Per-document annotation over a corpus; documents are independent and
/// the output order is canonical regardless of processing order.
pub fn annotate_corpus(
    docs: &[Document],
    protagonists: &ProtagonistList,
    cfg: &PipelineConfig,
) -> Result<Vec<Annotation>, PipelineError> {
    let mut seen = HashSet::new();
    for doc in docs {
        if !seen.insert(doc.id.as_str()) {
            return Err(PipelineError::DuplicateDocId(doc.id.clone()));
        }
    }
    // Imported mention files are validated against the whole corpus up
    // front, then handed out per document.
    if let RecognizerKind::Import(path) = &cfg.recognizer {
        let mentions = import_mentions(path, docs, &cfg.match_config.titles)?;
        let mut annotations = Vec::new();
        for doc in docs {
            let doc_mentions: Vec<Mention> = mentions
                .iter()
                .filter(|m| m.doc_id == doc.id)
                .cloned()
                .collect();
            annotations.extend(annotate_mentions(doc_mentions, protagonists, cfg));
        }
        sort_annotations(&mut annotations);
        return Ok(annotations);
    }
    let mut annotations = Vec::new();
    for doc in docs {
        annotations.extend(annotate_document(doc, protagonists, cfg)?);
    }
    sort_annotations(&mut annotations);
    Ok(annotations)
}

fn annotate_mentions(
    mentions: Vec<Mention>,
    protagonists: &ProtagonistList,
    cfg: &PipelineConfig,
) -> Vec<Annotation> {
    mentions
        .into_iter()
        .filter_map(|mention| {
            let outcome = find_best_match(
                &mention.surface,
                &mention.prefix,
                protagonists,
                &cfg.match_config,
            );
            if matches!(outcome, MatchOutcome::Unmatched) && !cfg.emit_unmatched {
                return None;
            }
            Some(Annotation {
                doc_id: mention.doc_id,
                start: mention.span.start,
                end: mention.span.end,
                surface: mention.surface,
                tag: outcome.tag().to_string(),
            })
        })
        .collect()
}

/// Wraps each annotated span as `<person name="TAG">surface</person>` in a
/// copy of the document text. The standoff file stays the source of truth;
/// this rendering exists for human inspection.
pub fn render_inline(doc: &Document, annotations: &[Annotation]) -> Result<String, PipelineError> {
    let mut sorted: Vec<&Annotation> = annotations.iter().collect();
    sorted.sort_by_key(|a| (a.start, a.end));
    let chars: Vec<char> = doc.text.chars().collect();
    let mut out = String::with_capacity(doc.text.len());
    let mut cursor = 0usize;
    for ann in sorted {
        if ann.start < cursor {
            return Err(PipelineError::OverlappingAnnotations {
                doc_id: doc.id.clone(),
                at: ann.start,
            });
        }
        if ann.end > chars.len() || ann.start >= ann.end {
            return Err(PipelineError::SpanOutOfBounds {
                doc_id: doc.id.clone(),
                start: ann.start,
                end: ann.end,
            });
        }
        out.extend(&chars[cursor..ann.start]);
        out.push_str(&format!("<person name=\"{}\">", ann.tag));
        out.extend(&chars[ann.start..ann.end]);
        out.push_str("</person>");
        cursor = ann.end;
    }
    out.extend(&chars[cursor..]);
    Ok(out)
}

/// Inverse of [`render_inline`]: recovers the standoff set from an inline
/// rendering. Only the exact markup emitted by this crate is recognized.
pub fn parse_inline(doc_id: &str, rendered: &str) -> Vec<Annotation> {
    const OPEN: &str = "<person name=\"";
    const MID: &str = "\">";
    const CLOSE: &str = "</person>";
    let mut annotations = Vec::new();
    let mut char_pos = 0usize;
    let mut rest = rendered;
    while let Some(open_at) = rest.find(OPEN) {
        char_pos += rest[..open_at].chars().count();
        let after_open = &rest[open_at + OPEN.len()..];
        let Some(mid_at) = after_open.find(MID) else { break };
        let tag = &after_open[..mid_at];
        let after_mid = &after_open[mid_at + MID.len()..];
        let Some(close_at) = after_mid.find(CLOSE) else { break };
        let surface = &after_mid[..close_at];
        let len = surface.chars().count();
        annotations.push(Annotation {
            doc_id: doc_id.to_string(),
            start: char_pos,
            end: char_pos + len,
            surface: surface.to_string(),
            tag: tag.to_string(),
        });
        char_pos += len;
        rest = &after_mid[close_at + CLOSE.len()..];
    }
    annotations
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicons::{DiminutiveLexicon, Gender, GenderLexicon, TitleLexicon};
    use crate::text_model::PERSON_SENTINEL;

    fn config(recognizer: RecognizerKind) -> PipelineConfig {
        let mut mc = MatchConfig::default();
        mc.diminutives = DiminutiveLexicon::from_pairs([("lizzy", "elizabeth")]);
        mc.genders = GenderLexicon::from_pairs([("elizabeth", Gender::Female), ("jane", Gender::Female)]);
        PipelineConfig::new(recognizer, mc)
    }

    fn bennet_list() -> ProtagonistList {
        let titles = TitleLexicon::standard();
        ProtagonistList::from_tags(["Mr. Bennet", "Mrs. Bennet"], &titles).unwrap()
    }

    #[test]
    fn gazetteer_pipeline_links_title_surname() {
        let doc = Document::new("d", "Mrs. Bennet smiled.");
        let cfg = config(RecognizerKind::Gazetteer);
        let anns = annotate_document(&doc, &bennet_list(), &cfg).unwrap();
        assert_eq!(anns.len(), 1);
        assert_eq!(anns[0].surface, "Bennet");
        assert_eq!(anns[0].tag, "Mrs. Bennet");
        assert_eq!((anns[0].start, anns[0].end), (5, 11));
    }

    #[test]
    fn empty_document_yields_nothing() {
        let doc = Document::new("d", "");
        let cfg = config(RecognizerKind::Heuristic);
        assert!(annotate_document(&doc, &bennet_list(), &cfg).unwrap().is_empty());
    }

    #[test]
    fn unmatched_sentinel_only_when_enabled() {
        let doc = Document::new("d", "Gandalf arrived.");
        let mut cfg = config(RecognizerKind::Heuristic);
        assert!(annotate_document(&doc, &bennet_list(), &cfg).unwrap().is_empty());
        cfg.emit_unmatched = true;
        let anns = annotate_document(&doc, &bennet_list(), &cfg).unwrap();
        assert_eq!(anns.len(), 1);
        assert_eq!(anns[0].tag, PERSON_SENTINEL);
    }

    #[test]
    fn corpus_equals_concatenated_documents() {
        let docs = vec![
            Document::new("a", "Mrs. Bennet smiled."),
            Document::new("b", "Mr. Bennet read."),
        ];
        let cfg = config(RecognizerKind::Gazetteer);
        let list = bennet_list();
        let whole = annotate_corpus(&docs, &list, &cfg).unwrap();
        let mut parts = Vec::new();
        for doc in &docs {
            parts.extend(annotate_document(doc, &list, &cfg).unwrap());
        }
        sort_annotations(&mut parts);
        assert_eq!(whole, parts);
    }

    #[test]
    fn duplicate_doc_id_rejected() {
        let docs = vec![Document::new("a", "x"), Document::new("a", "y")];
        let cfg = config(RecognizerKind::Gazetteer);
        assert!(matches!(
            annotate_corpus(&docs, &bennet_list(), &cfg),
            Err(PipelineError::DuplicateDocId(_))
        ));
    }

    #[test]
    fn render_inline_round_trips() {
        let doc = Document::new("d", "Łukasz saw Lizzy and Jane today.");
        let anns = vec![
            Annotation { doc_id: "d".into(), start: 11, end: 16, surface: "Lizzy".into(), tag: "Elizabeth Bennet".into() },
            Annotation { doc_id: "d".into(), start: 21, end: 25, surface: "Jane".into(), tag: "Jane Bennet".into() },
        ];
        let rendered = render_inline(&doc, &anns).unwrap();
        assert!(rendered.contains("<person name=\"Elizabeth Bennet\">Lizzy</person>"));
        assert_eq!(parse_inline("d", &rendered), anns);
    }

    #[test]
    fn render_inline_no_annotations_is_identity() {
        let doc = Document::new("d", "plain text");
        assert_eq!(render_inline(&doc, &[]).unwrap(), "plain text");
    }

    #[test]
    fn render_inline_rejects_overlap() {
        let doc = Document::new("d", "abcdef");
        let anns = vec![
            Annotation { doc_id: "d".into(), start: 0, end: 4, surface: "abcd".into(), tag: "x".into() },
            Annotation { doc_id: "d".into(), start: 2, end: 6, surface: "cdef".into(), tag: "y".into() },
        ];
        assert!(matches!(
            render_inline(&doc, &anns),
            Err(PipelineError::OverlappingAnnotations { .. })
        ));
    }

    #[test]
    fn adjacent_annotations_both_wrapped() {
        let doc = Document::new("d", "JaneLizzy");
        let anns = vec![
            Annotation { doc_id: "d".into(), start: 0, end: 4, surface: "Jane".into(), tag: "Jane Bennet".into() },
            Annotation { doc_id: "d".into(), start: 4, end: 9, surface: "Lizzy".into(), tag: "Elizabeth Bennet".into() },
        ];
        let rendered = render_inline(&doc, &anns).unwrap();
        assert_eq!(
            rendered,
            "<person name=\"Jane Bennet\">Jane</person><person name=\"Elizabeth Bennet\">Lizzy</person>"
        );
        assert_eq!(parse_inline("d", &rendered), anns);
    }
}
