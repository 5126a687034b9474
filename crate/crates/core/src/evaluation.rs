//! Scoring of predictions against gold annotations (precision, recall,
//! F-measure on exact span matches) plus corpus statistics: surface-form
//! counts, title breakdowns and the shared-common-part figure for tag lists.

use crate::lexicons::TitleLexicon;
use crate::matcher::ProtagonistList;
use crate::recognizer::extract_prefix;
use crate::text_model::{normalize, Annotation, Document, PrefixKind};
use serde::Serialize;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EvaluationError {
    #[error("annotation references unknown doc {0:?}")]
    UnknownDoc(String),
}

/// Span-only matching scores the recognition phase under the general
/// "person" label; span-and-tag scores the full tool.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchMode {
    SpanOnly,
    SpanAndTag,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct TagCounts {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Number of gold mentions (tp + fn).
    pub support: usize,
    pub per_tag: BTreeMap<String, TagCounts>,
}

impl MetricsReport {
    pub fn from_counts(tp: usize, fp: usize, fn_: usize) -> Self {
        Self::with_per_tag(tp, fp, fn_, BTreeMap::new())
    }

    fn with_per_tag(tp: usize, fp: usize, fn_: usize, per_tag: BTreeMap<String, TagCounts>) -> Self {
        // Empty-denominator conventions: no predictions means nothing was
        // wrong (P = 1); no gold means nothing was missed (R = 1).
        let precision = if tp + fp == 0 { 1.0 } else { tp as f64 / (tp + fp) as f64 };
        let recall = if tp + fn_ == 0 { 1.0 } else { tp as f64 / (tp + fn_) as f64 };
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        Self { tp, fp, fn_, precision, recall, f1, support: tp + fn_, per_tag }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Plain-text rendering with the usual metric columns.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{:<24} {:>9} {:>9} {:>9} {:>8}", "", "Precision", "Recall", "F-measure", "Support").unwrap();
        writeln!(
            out,
            "{:<24} {:>9.2} {:>9.2} {:>9.2} {:>8}",
            "Overall", self.precision, self.recall, self.f1, self.support
        )
        .unwrap();
        for (tag, c) in &self.per_tag {
            let sub = MetricsReport::from_counts(c.tp, c.fp, c.fn_);
            writeln!(
                out,
                "{:<24} {:>9.2} {:>9.2} {:>9.2} {:>8}",
                tag, sub.precision, sub.recall, sub.f1, sub.support
            )
            .unwrap();
        }
        out
    }
}

/// Greedy exact-span matching: each gold annotation is consumed by at most
/// one prediction with identical (doc_id, start, end) and, in span-and-tag
/// mode, a normalization-equal tag.
pub fn compare(gold: &[Annotation], pred: &[Annotation], mode: MatchMode) -> MetricsReport {
    let mut consumed = vec![false; gold.len()];
    let mut index: HashMap<(&str, usize, usize), Vec<usize>> = HashMap::new();
    for (i, g) in gold.iter().enumerate() {
        index.entry((g.doc_id.as_str(), g.start, g.end)).or_default().push(i);
    }

    let mut per_tag: BTreeMap<String, TagCounts> = BTreeMap::new();
    let mut tp = 0usize;
    let mut fp = 0usize;
    for p in pred {
        let hit = index
            .get(&(p.doc_id.as_str(), p.start, p.end))
            .and_then(|slots| {
                slots.iter().copied().find(|&i| {
                    !consumed[i]
                        && match mode {
                            MatchMode::SpanOnly => true,
                            MatchMode::SpanAndTag => normalize(&gold[i].tag) == normalize(&p.tag),
                        }
                })
            });
        match hit {
            Some(i) => {
                consumed[i] = true;
                tp += 1;
                per_tag.entry(gold[i].tag.clone()).or_default().tp += 1;
            }
            None => {
                fp += 1;
                per_tag.entry(p.tag.clone()).or_default().fp += 1;
            }
        }
    }
    let mut fn_ = 0usize;
    for (i, g) in gold.iter().enumerate() {
        if !consumed[i] {
            fn_ += 1;
            per_tag.entry(g.tag.clone()).or_default().fn_ += 1;
        }
    }
    MetricsReport::with_per_tag(tp, fp, fn_, per_tag)
}

/// As [`compare`], first validating that every annotation references a
/// known document id.
pub fn compare_against_docs(
    gold: &[Annotation],
    pred: &[Annotation],
    mode: MatchMode,
    known_docs: &HashSet<String>,
) -> Result<MetricsReport, EvaluationError> {
    for ann in gold.iter().chain(pred) {
        if !known_docs.contains(&ann.doc_id) {
            return Err(EvaluationError::UnknownDoc(ann.doc_id.clone()));
        }
    }
    Ok(compare(gold, pred, mode))
}

/// Micro-average: sum the counts, recompute the ratios.
pub fn aggregate(reports: &[MetricsReport]) -> MetricsReport {
    let mut tp = 0;
    let mut fp = 0;
    let mut fn_ = 0;
    let mut per_tag: BTreeMap<String, TagCounts> = BTreeMap::new();
    for r in reports {
        tp += r.tp;
        fp += r.fp;
        fn_ += r.fn_;
        for (tag, c) in &r.per_tag {
            let entry = per_tag.entry(tag.clone()).or_default();
            entry.tp += c.tp;
            entry.fp += c.fp;
            entry.fn_ += c.fn_;
        }
    }
    MetricsReport::with_per_tag(tp, fp, fn_, per_tag)
}

/// Counts of distinct whitespace-normalized (case-preserved) surfaces among
/// annotations carrying the given tag, descending by count.
pub fn surface_form_counts(annotations: &[Annotation], tag: &str) -> Vec<(String, usize)> {
    let wanted = normalize(tag);
    let mut counts: HashMap<String, usize> = HashMap::new();
    for ann in annotations {
        if normalize(&ann.tag) == wanted {
            let surface = ann.surface.split_whitespace().collect::<Vec<_>>().join(" ");
            *counts.entry(surface).or_default() += 1;
        }
    }
    let mut out: Vec<(String, usize)> = counts.into_iter().collect();
    out.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    out
}

/// For annotations whose surface ends in the given surname, buckets them by
/// preceding personal title ("bare" when none), using the document text.
pub fn title_breakdown(
    annotations: &[Annotation],
    surname: &str,
    titles: &TitleLexicon,
    docs: &[Document],
) -> Result<BTreeMap<String, usize>, EvaluationError> {
    let by_id: HashMap<&str, &Document> = docs.iter().map(|d| (d.id.as_str(), d)).collect();
    let surname = normalize(surname);
    let mut buckets: BTreeMap<String, usize> = BTreeMap::new();
    for ann in annotations {
        let last = ann.surface.split_whitespace().last().unwrap_or("");
        if normalize(last) != surname {
            continue;
        }
        let doc = by_id
            .get(ann.doc_id.as_str())
            .ok_or_else(|| EvaluationError::UnknownDoc(ann.doc_id.clone()))?;
        let bucket = match extract_prefix(doc, ann.span(), titles) {
            PrefixKind::Title(t) => normalize(&t),
            _ => "bare".to_string(),
        };
        *buckets.entry(bucket).or_default() += 1;
    }
    Ok(buckets)
}

/// Number (and fraction) of tags sharing at least one non-title name token
/// with a different tag. A shared personal title does not count.
pub fn shared_common_part_stats(protagonists: &ProtagonistList) -> (usize, f64) {
    let entries: Vec<&crate::matcher::Protagonist> = protagonists.iter().collect();
    if entries.is_empty() {
        return (0, 0.0);
    }
    let mut count = 0usize;
    for (i, p) in entries.iter().enumerate() {
        let shares = entries.iter().enumerate().any(|(j, q)| {
            i != j && p.name_tokens.iter().any(|t| q.name_tokens.contains(t))
        });
        if shares {
            count += 1;
        }
    }
    (count, count as f64 / entries.len() as f64)
}
