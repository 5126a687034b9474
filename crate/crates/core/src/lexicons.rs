//! External knowledge sources consulted during disambiguation: the
//! diminutive→canonical-name dictionary, the given-name gender lexicon and
//! the personal-title gender table.

use crate::text_model::normalize;
use std::collections::HashMap;
use std::io::{BufRead, BufReader, Read};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("unknown title: {0:?}")]
    UnknownTitle(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gender {
    Female,
    Male,
    Unknown,
}

impl Gender {
    pub fn parse(s: &str) -> Option<Gender> {
        match normalize(s).as_str() {
            "female" => Some(Gender::Female),
            "male" => Some(Gender::Male),
            "unknown" => Some(Gender::Unknown),
            _ => None,
        }
    }
}

/// Maps normalized diminutives ("lizzy") to canonical given names ("elizabeth").
#[derive(Debug, Clone, Default)]
pub struct DiminutiveLexicon {
    entries: HashMap<String, String>,
}

impl DiminutiveLexicon {
    pub fn from_pairs<I, K, V>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (K, V)>,
        K: AsRef<str>,
        V: AsRef<str>,
    {
        let mut entries = HashMap::new();
        for (dim, canonical) in pairs {
            let key = normalize(dim.as_ref());
            let value = normalize(canonical.as_ref());
            if !key.is_empty() && !value.is_empty() && key != value {
                entries.insert(key, value);
            }
        }
        Self { entries }
    }

    /// Parses CSV records `canonical,dim1,dim2,...`; `#` lines are comments.
    /// On key collision the later line wins.
    pub fn load(source: impl Read) -> Result<Self, LexiconError> {
        let mut entries = HashMap::new();
        for (idx, line) in BufReader::new(source).lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
            if fields.len() < 2 || fields.iter().any(|f| f.is_empty()) {
                return Err(LexiconError::Malformed {
                    line: idx + 1,
                    message: format!("expected `canonical,dim1,...`, got {trimmed:?}"),
                });
            }
            let canonical = normalize(fields[0]);
            for dim in &fields[1..] {
                let key = normalize(dim);
                if key != canonical {
                    entries.insert(key, canonical.clone());
                }
            }
        }
        Ok(Self { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(&normalize(name))
    }

    /// Canonical name for a diminutive. Multi-token inputs are looked up
    /// token by token; the first token with a hit decides.
    pub fn canonical_for(&self, name: &str) -> Option<&str> {
        let norm = normalize(name);
        if let Some(hit) = self.entries.get(&norm) {
            return Some(hit);
        }
        norm.split(' ')
            .find_map(|tok| self.entries.get(tok))
            .map(String::as_str)
    }
}

/// Maps normalized given names to [`Gender`].
#[derive(Debug, Clone, Default)]
pub struct GenderLexicon {
    entries: HashMap<String, Gender>,
}

impl GenderLexicon {
    pub fn from_pairs<I, K>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (K, Gender)>,
        K: AsRef<str>,
    {
        Self {
            entries: pairs
                .into_iter()
                .map(|(k, g)| (normalize(k.as_ref()), g))
                .collect(),
        }
    }

    /// Parses TSV records `name<TAB>{female|male|unknown}`.
    pub fn load(source: impl Read) -> Result<Self, LexiconError> {
        let mut entries = HashMap::new();
        for (idx, line) in BufReader::new(source).lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut it = trimmed.splitn(2, '\t');
            let (name, gender) = (it.next().unwrap_or(""), it.next().unwrap_or(""));
            let gender = Gender::parse(gender).ok_or_else(|| LexiconError::Malformed {
                line: idx + 1,
                message: format!("expected `name<TAB>female|male|unknown`, got {trimmed:?}"),
            })?;
            entries.insert(normalize(name), gender);
        }
        Ok(Self { entries })
    }

    pub fn gender_of(&self, name: &str) -> Gender {
        self.entries
            .get(&normalize(name))
            .copied()
            .unwrap_or(Gender::Unknown)
    }
}

/// Maps personal titles ("mr.") to gender; titles are never of unknown gender.
#[derive(Debug, Clone)]
pub struct TitleLexicon {
    entries: HashMap<String, Gender>,
}

impl Default for TitleLexicon {
    fn default() -> Self {
        Self::standard()
    }
}

impl TitleLexicon {
    /// The conventional English table: Mr. → male; Mrs., Ms., Miss → female.
    pub fn standard() -> Self {
        let entries = [
            ("mr.", Gender::Male),
            ("mrs.", Gender::Female),
            ("ms.", Gender::Female),
            ("miss", Gender::Female),
        ];
        Self {
            entries: entries
                .into_iter()
                .map(|(t, g)| (t.to_string(), g))
                .collect(),
        }
    }

    /// Parses TSV records `title<TAB>{female|male}`, replacing the defaults.
    pub fn load(source: impl Read) -> Result<Self, LexiconError> {
        let mut entries = HashMap::new();
        for (idx, line) in BufReader::new(source).lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut it = trimmed.splitn(2, '\t');
            let (title, gender) = (it.next().unwrap_or(""), it.next().unwrap_or(""));
            let gender = Gender::parse(gender);
            match gender {
                Some(g @ (Gender::Female | Gender::Male)) if !title.is_empty() => {
                    entries.insert(normalize(title), g);
                }
                _ => {
                    return Err(LexiconError::Malformed {
                        line: idx + 1,
                        message: format!("expected `title<TAB>female|male`, got {trimmed:?}"),
                    })
                }
            }
        }
        Ok(Self { entries })
    }

    pub fn is_title(&self, token: &str) -> bool {
        self.entries.contains_key(&normalize(token))
    }

    /// Lowercase abbreviation forms ending in a period, for the tokenizer.
    pub fn period_abbreviations(&self) -> Vec<String> {
        let mut v: Vec<String> = self
            .entries
            .keys()
            .filter(|t| t.ends_with('.'))
            .cloned()
            .collect();
        v.sort();
        v
    }

    /// Gender of a title. An unknown title signals an invariant breach
    /// upstream (prefixes are only classified against this table).
    pub fn gender_of(&self, title: &str) -> Result<Gender, LexiconError> {
        self.entries
            .get(&normalize(title))
            .copied()
            .ok_or_else(|| LexiconError::UnknownTitle(title.to_string()))
    }
}

/// Gender of a full name: a leading title decides directly ("Mrs. Bennet"
/// is female regardless of any given name); otherwise the first token is
/// looked up in the gender lexicon.
pub fn name_gender(genders: &GenderLexicon, titles: &TitleLexicon, full_name: &str) -> Gender {
    let norm = normalize(full_name);
    let mut tokens = norm.split(' ').filter(|t| !t.is_empty());
    match tokens.next() {
        None => Gender::Unknown,
        Some(first) if titles.is_title(first) => titles
            .gender_of(first)
            .expect("is_title checked membership"),
        Some(first) => genders.gender_of(first),
    }
}
