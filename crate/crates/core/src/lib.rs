//! Person entity linkage in two phases: recognition of candidate person
//! mentions (heuristic, gazetteer, or imported NER spans) and disambiguation
//! of each mention against a predefined list of full-name tags via
//! approximate string matching with title, family and diminutive rules.
//! Comes with an evaluation harness (precision/recall/F-measure on standoff
//! annotations) and corpus statistics.

pub mod evaluation;
pub mod lexicons;
pub mod matcher;
pub mod pipeline;
pub mod recognizer;
pub mod similarity;
pub mod standoff;
pub mod text_model;

pub use evaluation::{aggregate, compare, MatchMode, MetricsReport};
pub use lexicons::{DiminutiveLexicon, Gender, GenderLexicon, TitleLexicon};
pub use matcher::{find_best_match, MatchConfig, MatchOutcome, Protagonist, ProtagonistList};
pub use pipeline::{annotate_corpus, annotate_document, render_inline, PipelineConfig};
pub use recognizer::RecognizerKind;
pub use similarity::{levenshtein, partial_string_similarity, regular_string_similarity, SimilarityScore};
pub use text_model::{normalize, tokenize, Annotation, Document, Mention, PrefixKind, Span, Token};

/// Starter diminutive lexicon bundled with the crate.
pub const BUNDLED_DIMINUTIVES: &str = include_str!("../data/diminutives.csv");
/// Given-name gender lexicon bundled with the crate.
pub const BUNDLED_GENDERS: &str = include_str!("../data/genders.tsv");
/// Default personal-title table (also compiled in as [`TitleLexicon::standard`]).
pub const BUNDLED_TITLES: &str = include_str!("../data/titles.tsv");

pub fn bundled_diminutives() -> DiminutiveLexicon {
    DiminutiveLexicon::load(BUNDLED_DIMINUTIVES.as_bytes()).expect("bundled lexicon parses")
}

pub fn bundled_genders() -> GenderLexicon {
    GenderLexicon::load(BUNDLED_GENDERS.as_bytes()).expect("bundled lexicon parses")
}
