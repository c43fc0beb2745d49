use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};

use super::StitchError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Gender {
    Male,
    Female,
    Neutral,
}

impl Gender {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "male" | "m" => Some(Gender::Male),
            "female" | "f" => Some(Gender::Female),
            "neutral" | "n" => Some(Gender::Neutral),
            _ => None,
        }
    }
}

/// What a lexicon line says about a lemma.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LexiconEntry {
    Gender(Gender),
    /// A person's name of the given gender.
    Name(Gender),
    /// Always plural regardless of tag, e.g. "people".
    Plural,
}

/// Gender, name and plurality facts keyed by lower-cased lemma. Unknown
/// lemmas are neutral.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GenderLexicon {
    genders: BTreeMap<String, Gender>,
    names: BTreeSet<String>,
    plurals: BTreeSet<String>,
}

impl GenderLexicon {
    /// Fails if one token is given two different genders.
    pub fn new<I, S>(entries: I) -> Result<Self, StitchError>
    where
        I: IntoIterator<Item = (S, LexiconEntry)>,
        S: AsRef<str>,
    {
        let mut lex = Self::default();
        for (token, entry) in entries {
            let token = token.as_ref().to_lowercase();
            let gender = match entry {
                LexiconEntry::Plural => {
                    lex.plurals.insert(token);
                    continue;
                }
                LexiconEntry::Name(g) => {
                    lex.names.insert(token.clone());
                    g
                }
                LexiconEntry::Gender(g) => g,
            };
            match lex.genders.get(&token) {
                Some(&existing) if existing != gender => return Err(StitchError::GenderConflict { token }),
                _ => {
                    lex.genders.insert(token, gender);
                }
            }
        }
        Ok(lex)
    }

    pub fn gender(&self, lemma: &str) -> Gender {
        self.genders.get(lemma).copied().unwrap_or(Gender::Neutral)
    }

    pub fn is_name(&self, word: &str) -> bool {
        self.names.contains(&word.to_lowercase())
    }

    pub fn is_plural(&self, lemma: &str) -> bool {
        self.plurals.contains(lemma)
    }

    pub fn len(&self) -> usize {
        self.genders.len() + self.plurals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Noun lemmatizer: exception table first, then plural suffix rules.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Lemmatizer {
    exceptions: BTreeMap<String, String>,
}

impl Lemmatizer {
    pub fn new<I, K, V>(exceptions: I) -> Self
    where
        I: IntoIterator<Item = (K, V)>,
        K: AsRef<str>,
        V: AsRef<str>,
    {
        Self {
            exceptions: exceptions
                .into_iter()
                .map(|(k, v)| (k.as_ref().to_lowercase(), v.as_ref().to_lowercase()))
                .collect(),
        }
    }

    /// Lemma of a noun. Suffix rules only apply to plural-tagged nouns, so a
    /// singular "glass" or "bus" is left alone.
    pub fn noun_lemma(&self, word: &str, plural: bool) -> String {
        let lower = word.to_lowercase();
        if let Some(lemma) = self.exceptions.get(&lower) {
            return lemma.clone();
        }
        if !plural {
            return lower;
        }
        strip_plural(&lower)
    }
}

fn strip_plural(w: &str) -> String {
    let n = w.len();
    if n > 4 && w.ends_with("ies") {
        return [&w[..n - 3], "y"].concat();
    }
    for suffix in ["sses", "shes", "ches", "xes", "zes"] {
        if w.ends_with(suffix) {
            return w[..n - 2].to_string();
        }
    }
    if n > 2 && w.ends_with('s') && !w.ends_with("ss") && !w.ends_with("us") && !w.ends_with("is") {
        return w[..n - 1].to_string();
    }
    w.to_string()
}
