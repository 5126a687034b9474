//! Disambiguation of a recognized mention against the predefined list of
//! full-name tags. The matching procedure short-circuits on an exact
//! (normalized) hit, otherwise collects candidates above a partial-similarity
//! threshold and applies the prefix and diminutive rules.

use crate::lexicons::{name_gender, DiminutiveLexicon, Gender, GenderLexicon, TitleLexicon};
use crate::similarity::{partial_string_similarity, regular_string_similarity, SimilarityScore};
use crate::text_model::{normalize, PrefixKind};
use std::io::{BufRead, BufReader, Read};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProtagonistError {
    #[error("line {line}: duplicate tag {tag:?}")]
    DuplicateTag { line: usize, tag: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One entry of the tag list: the full-name identifier as it will appear in
/// annotations, plus its normalized name tokens with any leading title
/// separated out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Protagonist {
    pub tag: String,
    pub title: Option<String>,
    pub name_tokens: Vec<String>,
}

impl Protagonist {
    pub fn new(tag: impl Into<String>, titles: &TitleLexicon) -> Self {
        let tag = tag.into();
        let norm = normalize(&tag);
        let mut tokens: Vec<String> = norm.split(' ').filter(|t| !t.is_empty()).map(String::from).collect();
        let title = match tokens.first() {
            Some(first) if titles.is_title(first) => Some(tokens.remove(0)),
            _ => None,
        };
        Self { tag, title, name_tokens: tokens }
    }

    /// Whole-token, case-insensitive membership of a name in this tag.
    pub fn contains_name_token(&self, name: &str) -> bool {
        let norm = normalize(name);
        self.name_tokens.iter().any(|t| *t == norm)
    }
}

/// Ordered list of protagonist tags. Order is significant: it is the
/// tie-break authority everywhere scores are equal.
#[derive(Debug, Clone, Default)]
pub struct ProtagonistList {
    entries: Vec<Protagonist>,
}

impl ProtagonistList {
    pub fn from_tags<I, S>(tags: I, titles: &TitleLexicon) -> Result<Self, ProtagonistError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut list = Self::default();
        for (idx, tag) in tags.into_iter().enumerate() {
            list.push(idx + 1, tag.as_ref(), titles)?;
        }
        Ok(list)
    }

    /// Parses one tag per line; `#` lines are comments, order is preserved.
    pub fn load(source: impl Read, titles: &TitleLexicon) -> Result<Self, ProtagonistError> {
        let mut list = Self::default();
        for (idx, line) in BufReader::new(source).lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            list.push(idx + 1, trimmed, titles)?;
        }
        Ok(list)
    }

    fn push(&mut self, line: usize, tag: &str, titles: &TitleLexicon) -> Result<(), ProtagonistError> {
        let norm = normalize(tag);
        if self.entries.iter().any(|p| normalize(&p.tag) == norm) {
            return Err(ProtagonistError::DuplicateTag { line, tag: tag.to_string() });
        }
        self.entries.push(Protagonist::new(tag.trim(), titles));
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = &Protagonist> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn tags(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|p| p.tag.as_str())
    }
}

/// All knobs of the matching procedure. `rules_enabled = false` reduces it
/// to pure approximate string matching (the language-independent mode).
#[derive(Debug, Clone)]
pub struct MatchConfig {
    pub partial_similarity_precision: u8,
    pub rules_enabled: bool,
    pub diminutives: DiminutiveLexicon,
    pub genders: GenderLexicon,
    pub titles: TitleLexicon,
}

impl MatchConfig {
    pub fn new(threshold: u8) -> Self {
        assert!(threshold <= 100, "threshold out of range: {threshold}");
        Self {
            partial_similarity_precision: threshold,
            rules_enabled: true,
            diminutives: DiminutiveLexicon::default(),
            genders: GenderLexicon::default(),
            titles: TitleLexicon::standard(),
        }
    }
}

impl Default for MatchConfig {
    fn default() -> Self {
        Self::new(75)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatchOutcome {
    /// Linked to a protagonist tag with the similarity that won it.
    Matched { tag: String, score: SimilarityScore },
    /// A whole-family reference, "the " + the surname as written.
    Family { tag: String },
    /// No tag applies; rendered as the sentinel "person".
    Unmatched,
}

impl MatchOutcome {
    pub fn tag(&self) -> &str {
        match self {
            MatchOutcome::Matched { tag, .. } | MatchOutcome::Family { tag } => tag,
            MatchOutcome::Unmatched => crate::text_model::PERSON_SENTINEL,
        }
    }
}

/// Which branch of the matching procedure produced an outcome; surfaced by
/// the CLI's `--explain` flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchBranch {
    ExactName,
    MultiTop,
    MultiFamily,
    MultiTitleGender,
    MultiTitleNoGenderHit,
    SingleCandidate,
    DiminutiveHit,
    NoMatch,
}

impl MatchBranch {
    pub fn describe(&self) -> &'static str {
        match self {
            MatchBranch::ExactName => "exact name hit",
            MatchBranch::MultiTop => "multiple candidates, best partial score",
            MatchBranch::MultiFamily => "multiple candidates, \"the\" prefix, family tag",
            MatchBranch::MultiTitleGender => "multiple candidates, title prefix, gender match",
            MatchBranch::MultiTitleNoGenderHit => {
                "multiple candidates, title prefix, no gender match, best partial score"
            }
            MatchBranch::SingleCandidate => "single candidate",
            MatchBranch::DiminutiveHit => "no candidate, diminutive dictionary hit",
            MatchBranch::NoMatch => "no candidate, sentinel",
        }
    }
}

/// Protagonists scoring at least `threshold` partial similarity against the
/// entity, sorted by score descending with list order breaking ties.
pub fn score_candidates<'a>(
    entity: &str,
    protagonists: &'a ProtagonistList,
    threshold: u8,
) -> Vec<(&'a Protagonist, SimilarityScore)> {
    let mut candidates: Vec<(&Protagonist, SimilarityScore)> = protagonists
        .iter()
        .filter_map(|p| {
            let score = partial_string_similarity(&p.tag, entity);
            (score.value() >= threshold).then_some((p, score))
        })
        .collect();
    // Stable sort keeps list order within equal scores.
    candidates.sort_by(|a, b| b.1.cmp(&a.1));
    candidates
}

/// Links one entity string to the best protagonist tag, a family tag, or
/// the unmatched sentinel. See module docs for the branch structure.
pub fn find_best_match(
    entity: &str,
    prefix: &PrefixKind,
    protagonists: &ProtagonistList,
    cfg: &MatchConfig,
) -> MatchOutcome {
    find_best_match_explained(entity, prefix, protagonists, cfg).0
}

/// As [`find_best_match`], also reporting which branch decided.
pub fn find_best_match_explained(
    entity: &str,
    prefix: &PrefixKind,
    protagonists: &ProtagonistList,
    cfg: &MatchConfig,
) -> (MatchOutcome, MatchBranch) {
    // Exact hit: first tag whose normalized form equals the entity.
    for p in protagonists.iter() {
        if regular_string_similarity(&p.tag, entity) == SimilarityScore::MAX {
            return (
                MatchOutcome::Matched { tag: p.tag.clone(), score: SimilarityScore::MAX },
                MatchBranch::ExactName,
            );
        }
    }

    let candidates = score_candidates(entity, protagonists, cfg.partial_similarity_precision);

    match candidates.len() {
        n if n > 1 => {
            let (top, top_score) = (candidates[0].0, candidates[0].1);
            if cfg.rules_enabled {
                match prefix {
                    PrefixKind::TheArticle => {
                        return (
                            MatchOutcome::Family { tag: format!("the {}", entity.trim()) },
                            MatchBranch::MultiFamily,
                        );
                    }
                    PrefixKind::Title(title) => {
                        if let Ok(title_gender) = cfg.titles.gender_of(title) {
                            debug_assert_ne!(title_gender, Gender::Unknown);
                            for (p, score) in &candidates {
                                if name_gender(&cfg.genders, &cfg.titles, &p.tag) == title_gender {
                                    return (
                                        MatchOutcome::Matched { tag: p.tag.clone(), score: *score },
                                        MatchBranch::MultiTitleGender,
                                    );
                                }
                            }
                        }
                        return (
                            MatchOutcome::Matched { tag: top.tag.clone(), score: top_score },
                            MatchBranch::MultiTitleNoGenderHit,
                        );
                    }
                    PrefixKind::None => {}
                }
            }
            (
                MatchOutcome::Matched { tag: top.tag.clone(), score: top_score },
                MatchBranch::MultiTop,
            )
        }
        0 => {
            if cfg.rules_enabled {
                if let Some(canonical) = cfg.diminutives.canonical_for(entity) {
                    let canonical = canonical.to_string();
                    if let Some(p) = protagonists.iter().find(|p| p.contains_name_token(&canonical)) {
                        let score = partial_string_similarity(&p.tag, entity);
                        return (
                            MatchOutcome::Matched { tag: p.tag.clone(), score },
                            MatchBranch::DiminutiveHit,
                        );
                    }
                }
            }
            (MatchOutcome::Unmatched, MatchBranch::NoMatch)
        }
        _ => {
            // Exactly one candidate: taken as-is, no prefix logic.
            let (p, score) = (candidates[0].0, candidates[0].1);
            (
                MatchOutcome::Matched { tag: p.tag.clone(), score },
                MatchBranch::SingleCandidate,
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicons::Gender;

    fn bennet_list() -> ProtagonistList {
        let titles = TitleLexicon::standard();
        ProtagonistList::from_tags(["Mr. Bennet", "Mrs. Bennet"], &titles).unwrap()
    }

    fn cfg_with_lexicons() -> MatchConfig {
        let mut cfg = MatchConfig::default();
        cfg.diminutives = DiminutiveLexicon::from_pairs([("lizzy", "elizabeth")]);
        cfg.genders = GenderLexicon::from_pairs([
            ("elizabeth", Gender::Female),
            ("jane", Gender::Female),
            ("fitzwilliam", Gender::Male),
        ]);
        cfg
    }

    #[test]
    fn protagonist_splits_leading_title() {
        let titles = TitleLexicon::standard();
        let p = Protagonist::new("Mrs. Bennet", &titles);
        assert_eq!(p.title.as_deref(), Some("mrs."));
        assert_eq!(p.name_tokens, ["bennet"]);
        let q = Protagonist::new("Elizabeth Bennet", &titles);
        assert_eq!(q.title, None);
        assert_eq!(q.name_tokens, ["elizabeth", "bennet"]);
    }

    #[test]
    fn list_rejects_duplicate_normalized_tags() {
        let titles = TitleLexicon::standard();
        let err = ProtagonistList::from_tags(["Mr. Darcy", "MR.  DARCY"], &titles).unwrap_err();
        assert!(matches!(err, ProtagonistError::DuplicateTag { .. }));
    }

    #[test]
    fn list_load_preserves_order_and_skips_comments() {
        let titles = TitleLexicon::standard();
        let src = "# tags\nElizabeth Bennet\n\nMr. Darcy\n";
        let list = ProtagonistList::load(src.as_bytes(), &titles).unwrap();
        assert_eq!(list.tags().collect::<Vec<_>>(), ["Elizabeth Bennet", "Mr. Darcy"]);
    }

    #[test]
    fn score_candidates_exact_tag_first() {
        let titles = TitleLexicon::standard();
        let list = ProtagonistList::from_tags(["Elizabeth Bennet", "Mr. Darcy"], &titles).unwrap();
        let scored = score_candidates("Elizabeth Bennet", &list, 75);
        assert_eq!(scored[0].0.tag, "Elizabeth Bennet");
        assert_eq!(scored[0].1.value(), 100);
    }

    #[test]
    fn score_candidates_empty_below_threshold() {
        let titles = TitleLexicon::standard();
        let list = ProtagonistList::from_tags(["Elizabeth Bennet"], &titles).unwrap();
        assert!(score_candidates("Zzz", &list, 75).is_empty());
    }

    #[test]
    fn score_candidates_tie_break_is_list_order() {
        let list = bennet_list();
        let scored = score_candidates("Bennet", &list, 75);
        assert_eq!(scored.len(), 2);
        assert_eq!(scored[0].0.tag, "Mr. Bennet");
        assert_eq!(scored[1].0.tag, "Mrs. Bennet");
        assert!(scored.iter().all(|(_, s)| s.value() == 100));
    }

    #[test]
    fn exact_hit_short_circuits() {
        let titles = TitleLexicon::standard();
        let list = ProtagonistList::from_tags(["Elizabeth Bennet", "Mr. Darcy"], &titles).unwrap();
        let out = find_best_match("Elizabeth Bennet", &PrefixKind::None, &list, &MatchConfig::default());
        assert_eq!(out, MatchOutcome::Matched { tag: "Elizabeth Bennet".into(), score: SimilarityScore::MAX });
    }

    #[test]
    fn title_prefix_picks_gender_match() {
        let out = find_best_match(
            "Bennet",
            &PrefixKind::Title("Mrs.".into()),
            &bennet_list(),
            &cfg_with_lexicons(),
        );
        assert_eq!(out.tag(), "Mrs. Bennet");
    }

    #[test]
    fn the_prefix_yields_family_tag() {
        let out = find_best_match(
            "Bennet",
            &PrefixKind::TheArticle,
            &bennet_list(),
            &cfg_with_lexicons(),
        );
        assert_eq!(out, MatchOutcome::Family { tag: "the Bennet".into() });
    }

    #[test]
    fn diminutive_path_fires_when_no_candidate() {
        let titles = TitleLexicon::standard();
        // "Margaret Hale" keeps all partial scores for "Peggy" far below 75,
        // forcing the zero-candidate branch.
        let list = ProtagonistList::from_tags(["Margaret Hale", "Mr. Darcy"], &titles).unwrap();
        let mut cfg = MatchConfig::default();
        cfg.diminutives = DiminutiveLexicon::from_pairs([("peggy", "margaret")]);
        let (out, branch) = find_best_match_explained("Peggy", &PrefixKind::None, &list, &cfg);
        assert_eq!(out.tag(), "Margaret Hale");
        assert_eq!(branch, MatchBranch::DiminutiveHit);
    }

    #[test]
    fn unmatched_renders_person() {
        let out = find_best_match("Gandalf", &PrefixKind::None, &bennet_list(), &cfg_with_lexicons());
        assert_eq!(out, MatchOutcome::Unmatched);
        assert_eq!(out.tag(), "person");
    }

    #[test]
    fn case_invariance() {
        let cfg = cfg_with_lexicons();
        let list = bennet_list();
        for prefix in [PrefixKind::None, PrefixKind::Title("Mr.".into())] {
            assert_eq!(
                find_best_match("BENNET", &prefix, &list, &cfg),
                find_best_match("bennet", &prefix, &list, &cfg),
            );
        }
        // Family tags keep the entity's casing, so only the normalized tag
        // is case-invariant there.
        let upper = find_best_match("BENNET", &PrefixKind::TheArticle, &list, &cfg);
        let lower = find_best_match("bennet", &PrefixKind::TheArticle, &list, &cfg);
        assert_eq!(normalize(upper.tag()), normalize(lower.tag()));
        assert_eq!(upper.tag(), "the BENNET");
    }

    #[test]
    fn rules_disabled_skips_prefix_and_diminutives() {
        let mut cfg = cfg_with_lexicons();
        cfg.rules_enabled = false;
        let list = bennet_list();
        let out = find_best_match("Bennet", &PrefixKind::TheArticle, &list, &cfg);
        assert_eq!(out.tag(), "Mr. Bennet");
        let out = find_best_match("Bennet", &PrefixKind::Title("Mrs.".into()), &list, &cfg);
        assert_eq!(out.tag(), "Mr. Bennet");
        let titles = TitleLexicon::standard();
        let far = ProtagonistList::from_tags(["Margaret Hale"], &titles).unwrap();
        cfg.diminutives = DiminutiveLexicon::from_pairs([("peggy", "margaret")]);
        assert_eq!(find_best_match("Peggy", &PrefixKind::None, &far, &cfg), MatchOutcome::Unmatched);
    }

    #[test]
    fn exact_name_totality_over_list() {
        let titles = TitleLexicon::standard();
        let list = ProtagonistList::from_tags(
            ["Elizabeth Bennet", "Mr. Darcy", "Mrs. Gardiner", "Lady Catherine de Bourgh"],
            &titles,
        )
        .unwrap();
        let cfg = MatchConfig::default();
        for tag in list.tags() {
            let out = find_best_match(tag, &PrefixKind::None, &list, &cfg);
            assert_eq!(out, MatchOutcome::Matched { tag: tag.into(), score: SimilarityScore::MAX });
        }
    }

    #[test]
    fn threshold_monotonicity() {
        let list = bennet_list();
        let mut prev = usize::MAX;
        for threshold in [0u8, 25, 50, 75, 90, 100] {
            let n = score_candidates("Benet", &list, threshold).len();
            assert!(n <= prev);
            prev = n;
        }
    }
}
