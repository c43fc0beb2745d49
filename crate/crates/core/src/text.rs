//! Tokens, a rule-based tokenizer, a lexicon tagger and detokenization.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

/// A word with its Penn Treebank part-of-speech tag.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TaggedToken {
    pub word: String,
    pub tag: String,
}

impl TaggedToken {
    pub fn new(word: impl Into<String>, tag: impl Into<String>) -> Self {
        Self {
            word: word.into(),
            tag: tag.into(),
        }
    }

    pub fn is_noun(&self) -> bool {
        matches!(self.tag.as_str(), "NN" | "NNS" | "NNP" | "NNPS")
    }

    pub fn is_plural_noun(&self) -> bool {
        matches!(self.tag.as_str(), "NNS" | "NNPS")
    }

    pub fn is_proper_noun(&self) -> bool {
        matches!(self.tag.as_str(), "NNP" | "NNPS")
    }

    pub fn is_verb(&self) -> bool {
        self.tag.starts_with("VB") || self.tag == "MD"
    }

    pub fn is_punctuation(&self) -> bool {
        is_punctuation_tag(&self.tag)
    }
}

pub fn is_punctuation_tag(tag: &str) -> bool {
    matches!(tag, "." | "," | ":" | "``" | "''" | "-LRB-" | "-RRB-" | "#" | "$")
}

/// Parses `word_TAG` items separated by whitespace. The tag is everything after
/// the last underscore, so words may themselves contain underscores.
pub fn parse_tagged(line: &str) -> Result<Vec<TaggedToken>, String> {
    line.split_whitespace()
        .map(|item| match item.rsplit_once('_') {
            Some((word, tag)) if !word.is_empty() && !tag.is_empty() => Ok(TaggedToken::new(word, tag)),
            _ => Err(item.to_string()),
        })
        .collect()
}

/// Splits on whitespace and peels sentence punctuation and common clitics off
/// word edges.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    for raw in text.split_whitespace() {
        let mut word = raw;
        let mut leading = Vec::new();
        while let Some(c) = word.chars().next() {
            if is_split_punct(c) && word.len() > c.len_utf8() {
                leading.push(c.to_string());
                word = &word[c.len_utf8()..];
            } else {
                break;
            }
        }
        let mut trailing = Vec::new();
        while let Some(c) = word.chars().next_back() {
            if is_split_punct(c) && word.len() > c.len_utf8() {
                trailing.push(c.to_string());
                word = &word[..word.len() - c.len_utf8()];
            } else {
                break;
            }
        }
        out.extend(leading);
        let lower = word.to_lowercase();
        if lower.ends_with("n't") && word.len() > 3 {
            out.push(word[..word.len() - 3].to_string());
            out.push(word[word.len() - 3..].to_string());
        } else if lower.ends_with("'s") && word.len() > 2 {
            out.push(word[..word.len() - 2].to_string());
            out.push(word[word.len() - 2..].to_string());
        } else if !word.is_empty() {
            out.push(word.to_string());
        }
        out.extend(trailing.into_iter().rev());
    }
    out
}

fn is_split_punct(c: char) -> bool {
    matches!(c, '.' | ',' | '!' | '?' | ';' | ':' | '"' | '(' | ')')
}

/// Joins tokens with single spaces, attaching punctuation and clitics to the
/// preceding word.
pub fn detokenize<'a, I: IntoIterator<Item = &'a str>>(tokens: I) -> String {
    let mut out = String::new();
    for tok in tokens {
        let attach = matches!(tok, "." | "," | "!" | "?" | ";" | ":" | ")" | "n't" | "'s");
        if !out.is_empty() && !attach && !out.ends_with('(') {
            out.push(' ');
        }
        out.push_str(tok);
    }
    out
}

/// Upper-cases the first character.
pub fn capitalize(word: &str) -> String {
    let mut chars = word.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// Lower-cases the first character.
pub fn decapitalize(word: &str) -> String {
    let mut chars = word.chars();
    match chars.next() {
        Some(c) => c.to_lowercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// Dictionary tagger with suffix fallbacks for unknown words.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Tagger {
    lexicon: BTreeMap<String, String>,
}

impl Tagger {
    /// Keys are lower-cased on insert.
    pub fn new<I, K, V>(entries: I) -> Self
    where
        I: IntoIterator<Item = (K, V)>,
        K: AsRef<str>,
        V: Into<String>,
    {
        Self {
            lexicon: entries
                .into_iter()
                .map(|(k, v)| (k.as_ref().to_lowercase(), v.into()))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.lexicon.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lexicon.is_empty()
    }

    pub fn tag_word(&self, word: &str, sentence_initial: bool) -> String {
        let lower = word.to_lowercase();
        if let Some(tag) = self.lexicon.get(&lower) {
            return tag.clone();
        }
        let guess = match word {
            "." | "!" | "?" => ".",
            "," => ",",
            ";" | ":" => ":",
            "(" => "-LRB-",
            ")" => "-RRB-",
            "\"" => "''",
            "'s" => "POS",
            "n't" => "RB",
            _ if word.chars().all(|c| c.is_ascii_digit() || c == '.' || c == ',') => "CD",
            _ if !sentence_initial && word.chars().next().is_some_and(char::is_uppercase) => "NNP",
            _ if lower.ends_with("ing") && lower.len() > 4 => "VBG",
            _ if lower.ends_with("ed") && lower.len() > 3 => "VBD",
            _ if lower.ends_with("ly") && lower.len() > 3 => "RB",
            _ if lower.ends_with("ss") || lower.ends_with("us") => "NN",
            _ if lower.ends_with('s') && lower.len() > 3 => "NNS",
            _ => "NN",
        };
        guess.to_string()
    }

    pub fn tag(&self, tokens: &[String]) -> Vec<TaggedToken> {
        tokens
            .iter()
            .enumerate()
            .map(|(i, t)| TaggedToken::new(t.clone(), self.tag_word(t, i == 0)))
            .collect()
    }
}

/// Splits tagged tokens into sentences at `.`-tagged tokens.
pub fn split_sentences(tokens: Vec<TaggedToken>) -> Vec<Vec<TaggedToken>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    for t in tokens {
        let end = t.tag == ".";
        cur.push(t);
        if end {
            out.push(core::mem::take(&mut cur));
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn tokenizes_and_detokenizes() {
        let toks = tokenize("A man is with a plate. He isn't (really) there, ok?");
        assert_eq!(
            toks,
            vec![
                "A", "man", "is", "with", "a", "plate", ".", "He", "is", "n't", "(", "really", ")", "there", ",", "ok",
                "?"
            ]
        );
        assert_eq!(
            detokenize(toks.iter().map(String::as_str)),
            "A man is with a plate. He isn't (really) there, ok?"
        );
    }

    #[test]
    fn parses_tagged_items() {
        let t = parse_tagged("Then_RB ,_, a_DT hot_dog_NN").unwrap();
        assert_eq!(t[3], TaggedToken::new("hot_dog", "NN"));
        assert_eq!(parse_tagged("oops").unwrap_err(), "oops");
    }

    #[test]
    fn lexicon_wins_over_suffix_rules() {
        let tagger = Tagger::new([("is", "VBZ"), ("watches", "NNS")]);
        assert_eq!(tagger.tag_word("Is", true), "VBZ");
        assert_eq!(tagger.tag_word("watches", false), "NNS");
        assert_eq!(tagger.tag_word("sitting", false), "VBG");
        assert_eq!(tagger.tag_word("Paris", false), "NNP");
        assert_eq!(tagger.tag_word("dogs", false), "NNS");
        assert_eq!(tagger.tag_word("glass", false), "NN");
        assert_eq!(tagger.tag_word("42", false), "CD");
    }

    #[test]
    fn capitalization_helpers() {
        assert_eq!(capitalize("then"), "Then");
        assert_eq!(decapitalize("He"), "he");
        assert_eq!(capitalize(""), "");
    }

    #[test]
    fn sentence_split() {
        let tagger = Tagger::default();
        let toks = tagger.tag(&tokenize("A b. C d."));
        assert_eq!(split_sentences(toks).len(), 2);
    }
}
