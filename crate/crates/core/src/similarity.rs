//! String-similarity primitives used by the disambiguation algorithm:
//! Levenshtein distance and two normalized scores on a 0–100 scale.
//!
//! Both scores normalize their inputs first (NFC, case-fold, whitespace
//! collapse), so "Mr. Darcy" and "mr.  darcy" score 100.

use crate::text_model::normalize;

/// Integer similarity in `[0, 100]`; 100 means the normalized strings are equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SimilarityScore(u8);

impl SimilarityScore {
    pub const MAX: SimilarityScore = SimilarityScore(100);

    pub fn new(value: u8) -> Self {
        assert!(value <= 100, "similarity score out of range: {value}");
        Self(value)
    }

    pub fn value(&self) -> u8 {
        self.0
    }
}

/// Minimum number of single-character insertions, deletions and
/// substitutions transforming `a` into `b`. Operates on Unicode scalar
/// values. O(min(|a|,|b|)) memory.
pub fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    levenshtein_chars(&a, &b)
}

fn levenshtein_chars(a: &[char], b: &[char]) -> usize {
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if short.is_empty() {
        return long.len();
    }
    let mut prev: Vec<usize> = (0..=short.len()).collect();
    let mut curr = vec![0usize; short.len() + 1];
    for (i, &lc) in long.iter().enumerate() {
        curr[0] = i + 1;
        for (j, &sc) in short.iter().enumerate() {
            let cost = usize::from(lc != sc);
            curr[j + 1] = (prev[j] + cost).min(prev[j + 1] + 1).min(curr[j] + 1);
        }
        std::mem::swap(&mut prev, &mut curr);
    }
    prev[short.len()]
}

// Round-half-up of 100*(n-d)/n, capped at 99 when d > 0 so that 100 remains
// an exact-equality certificate (very long near-equal pairs would otherwise
// round up to 100).
fn ratio_score(total_len: usize, distance: usize) -> SimilarityScore {
    debug_assert!(distance <= total_len);
    if distance == 0 {
        return SimilarityScore::MAX;
    }
    let n = total_len as u64;
    let d = distance as u64;
    let rounded = (200 * (n - d) + n) / (2 * n);
    SimilarityScore::new(rounded.min(99) as u8)
}

/// Normalized edit similarity of the whole strings:
/// `round(100 * (|a|+|b| - lev(a,b)) / (|a|+|b|))` over normalized inputs.
/// Symmetric; 100 iff the normalized strings are equal.
pub fn regular_string_similarity(a: &str, b: &str) -> SimilarityScore {
    let a: Vec<char> = normalize(a).chars().collect();
    let b: Vec<char> = normalize(b).chars().collect();
    regular_chars(&a, &b)
}

fn regular_chars(a: &[char], b: &[char]) -> SimilarityScore {
    let total = a.len() + b.len();
    if total == 0 {
        return SimilarityScore::MAX;
    }
    ratio_score(total, levenshtein_chars(a, b))
}

/// Best [`regular_string_similarity`] of the shorter normalized string
/// against every equal-length contiguous window of the longer one, never
/// below the whole-string score. An exact substring therefore scores 100.
pub fn partial_string_similarity(a: &str, b: &str) -> SimilarityScore {
    let a: Vec<char> = normalize(a).chars().collect();
    let b: Vec<char> = normalize(b).chars().collect();
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if short.is_empty() {
        return SimilarityScore::MAX;
    }
    // Floor at the whole-string score: windows shrink the length budget and
    // can otherwise dip below it on whitespace-heavy inputs.
    let mut best = regular_chars(&short, &long);
    for window in long.windows(short.len()) {
        // Windows of a normalized string may carry edge whitespace; score
        // them through the same normalizing route as any other input.
        let w: String = window.iter().collect();
        let w: Vec<char> = normalize(&w).chars().collect();
        let score = regular_chars(&short, &w);
        if score > best {
            best = score;
            if best == SimilarityScore::MAX {
                break;
            }
        }
    }
    best
}
