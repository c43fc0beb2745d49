//! Backward coreference: repeated noun phrases become pronouns.
//!
//! Noun phrases come from a shallow chunker over the supplied tags:
//! an optional determiner or number, any adjectives, then one or more nouns.
//! Two phrases corefer when their head nouns share a lemma and a number. The
//! first mention of a chain is kept; every later sentence's first mention is
//! replaced by a third-person pronoun chosen from gender, number and whether
//! the phrase sits before the sentence's first verb (subject) or after it
//! (object).

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::ops::Range;

use super::lexicon::{Gender, GenderLexicon, Lemmatizer};
use super::CaptionDoc;
use crate::text::{capitalize, TaggedToken};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    Subject,
    Object,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Number {
    Singular,
    Plural,
}

/// A chunked noun phrase.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NounPhrase {
    pub span: Range<usize>,
    pub head: usize,
}

/// One mention of a chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mention {
    pub sentence: usize,
    pub span: Range<usize>,
    pub slot: Slot,
}

/// Mentions sharing a head lemma and number, one per sentence at most.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MentionChain {
    pub head_lemma: String,
    pub gender: Gender,
    pub number: Number,
    pub mentions: Vec<Mention>,
}

fn is_determiner(t: &TaggedToken) -> bool {
    matches!(t.tag.as_str(), "DT" | "CD" | "PRP$")
}

fn is_adjective(t: &TaggedToken) -> bool {
    matches!(t.tag.as_str(), "JJ" | "JJR" | "JJS")
}

/// Greedy left-to-right chunking of `DT? JJ* NN+` phrases (`DT` also covers
/// numbers and possessive pronouns).
pub fn chunk_noun_phrases(tokens: &[TaggedToken]) -> Vec<NounPhrase> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let mut j = i;
        if is_determiner(&tokens[j]) {
            j += 1;
        }
        while j < tokens.len() && is_adjective(&tokens[j]) {
            j += 1;
        }
        let nouns_start = j;
        while j < tokens.len() && tokens[j].is_noun() {
            j += 1;
        }
        if j > nouns_start {
            out.push(NounPhrase {
                span: i..j,
                head: j - 1,
            });
            i = j;
        } else {
            i += 1;
        }
    }
    out
}

fn slot_of(tokens: &[TaggedToken], np: &NounPhrase) -> Slot {
    match tokens.iter().position(TaggedToken::is_verb) {
        Some(v) if np.span.start > v => Slot::Object,
        _ => Slot::Subject,
    }
}

/// Third-person pronoun for a gender, number and slot.
pub fn pronoun(gender: Gender, number: Number, slot: Slot) -> &'static str {
    match (number, gender, slot) {
        (Number::Plural, _, Slot::Subject) => "they",
        (Number::Plural, _, Slot::Object) => "them",
        (Number::Singular, Gender::Male, Slot::Subject) => "he",
        (Number::Singular, Gender::Male, Slot::Object) => "him",
        (Number::Singular, Gender::Female, Slot::Subject) => "she",
        (Number::Singular, Gender::Female, Slot::Object) => "her",
        (Number::Singular, Gender::Neutral, _) => "it",
    }
}

const PERSONAL_PRONOUNS: [&str; 7] = ["he", "him", "she", "her", "it", "they", "them"];

/// Builds the chains of a document.
pub fn mention_chains(
    sentences: &[Vec<TaggedToken>],
    lex: &GenderLexicon,
    lemmatizer: &Lemmatizer,
) -> Vec<MentionChain> {
    let mut chains: Vec<MentionChain> = Vec::new();
    let mut by_key: BTreeMap<(String, Number), usize> = BTreeMap::new();
    for (s, tokens) in sentences.iter().enumerate() {
        for np in chunk_noun_phrases(tokens) {
            let head = &tokens[np.head];
            let lemma_guess = lemmatizer.noun_lemma(&head.word, head.is_plural_noun());
            let number = if head.is_plural_noun() || lex.is_plural(&lemma_guess) {
                Number::Plural
            } else {
                Number::Singular
            };
            let key = (lemma_guess.clone(), number);
            let mention = Mention {
                sentence: s,
                span: np.span.clone(),
                slot: slot_of(tokens, &np),
            };
            match by_key.get(&key) {
                Some(&c) => {
                    let chain = &mut chains[c];
                    if chain.mentions.last().is_some_and(|m| m.sentence < s) {
                        chain.mentions.push(mention);
                    }
                }
                None => {
                    by_key.insert(key, chains.len());
                    chains.push(MentionChain {
                        gender: lex.gender(&lemma_guess),
                        head_lemma: lemma_guess,
                        number,
                        mentions: alloc::vec![mention],
                    });
                }
            }
        }
    }
    chains
}

fn has_pronoun_of(tokens: &[TaggedToken], chain: &MentionChain) -> bool {
    let forms = [Slot::Subject, Slot::Object].map(|slot| pronoun(chain.gender, chain.number, slot));
    tokens
        .iter()
        .any(|t| t.tag == "PRP" && forms.contains(&t.word.to_lowercase().as_str()))
}

/// Replaces every non-first mention with a pronoun. A chain gets at most one
/// pronoun per sentence, and a fitting pronoun already in the sentence counts
/// as that one. Within one sentence a pronoun word is used at most once,
/// counting pronouns already present, so a second chain that would also
/// become "it" keeps its noun phrase. Together these make the pass
/// idempotent.
pub fn resolve_backward_coreference(doc: &CaptionDoc, lex: &GenderLexicon, lemmatizer: &Lemmatizer) -> CaptionDoc {
    let chains = mention_chains(doc.sentences(), lex, lemmatizer);

    let mut planned: Vec<Vec<(Range<usize>, &'static str)>> = alloc::vec![Vec::new(); doc.sentences().len()];
    for chain in &chains {
        for m in chain.mentions.iter().skip(1) {
            if has_pronoun_of(&doc.sentences()[m.sentence], chain) {
                continue;
            }
            planned[m.sentence].push((m.span.clone(), pronoun(chain.gender, chain.number, m.slot)));
        }
    }

    let sentences = doc
        .sentences()
        .iter()
        .zip(planned)
        .map(|(tokens, mut plan)| {
            plan.sort_by_key(|(span, _)| span.start);
            let mut used: BTreeSet<String> = tokens
                .iter()
                .filter(|t| t.tag == "PRP")
                .map(|t| t.word.to_lowercase())
                .filter(|w| PERSONAL_PRONOUNS.contains(&w.as_str()))
                .collect();
            let accepted: Vec<(Range<usize>, &str)> =
                plan.into_iter().filter(|(_, p)| used.insert(p.to_string())).collect();

            let mut out = tokens.clone();
            for (span, p) in accepted.into_iter().rev() {
                let word = if span.start == 0 { capitalize(p) } else { p.to_string() };
                out.splice(span, core::iter::once(TaggedToken::new(word, "PRP")));
            }
            out
        })
        .collect();

    doc.with_sentences(sentences)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<TaggedToken> {
        crate::text::parse_tagged(s).unwrap()
    }

    #[test]
    fn chunker_spans() {
        let t = toks("A_DT big_JJ red_JJ car_NN and_CC two_CD dogs_NNS sit_VBP on_IN grass_NN ._.");
        let spans: Vec<Range<usize>> = chunk_noun_phrases(&t).into_iter().map(|n| n.span).collect();
        assert_eq!(spans, [0..4, 5..7, 9..10]);
    }

    #[test]
    fn pronoun_table() {
        assert_eq!(pronoun(Gender::Male, Number::Singular, Slot::Subject), "he");
        assert_eq!(pronoun(Gender::Female, Number::Singular, Slot::Object), "her");
        assert_eq!(pronoun(Gender::Neutral, Number::Singular, Slot::Object), "it");
        assert_eq!(pronoun(Gender::Male, Number::Plural, Slot::Object), "them");
    }

    #[test]
    fn slot_follows_first_verb() {
        let t = toks("A_DT man_NN is_VBZ with_IN a_DT plate_NN");
        let nps = chunk_noun_phrases(&t);
        assert_eq!(slot_of(&t, &nps[0]), Slot::Subject);
        assert_eq!(slot_of(&t, &nps[1]), Slot::Object);
    }

    #[test]
    fn one_mention_per_sentence() {
        let s = [toks("a_DT cup_NN ._."), toks("a_DT cup_NN and_CC a_DT cup_NN ._.")];
        let chains = mention_chains(&s, &GenderLexicon::default(), &Lemmatizer::default());
        assert_eq!(chains.len(), 1);
        assert_eq!(chains[0].mentions.len(), 2);
    }
}
