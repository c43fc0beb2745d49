use alloc::string::String;
use alloc::vec::Vec;

use super::lexicon::GenderLexicon;
use super::{CaptionDoc, StitchError};
use crate::grammar::ConnectiveInstance;
use crate::linalg::squared_distance;
use crate::text::{capitalize, decapitalize, TaggedToken};

/// Index of the bank instance nearest to `query` in L2 distance. Ties go to
/// the lowest index.
pub fn nearest_instance(query: &[f64], bank: &[ConnectiveInstance]) -> Result<usize, StitchError> {
    let mut best: Option<(usize, f64)> = None;
    for (i, inst) in bank.iter().enumerate() {
        if inst.vector.len() != query.len() {
            return Err(StitchError::DimensionMismatch {
                expected: inst.vector.len(),
                found: query.len(),
            });
        }
        let d = squared_distance(query, &inst.vector);
        if best.is_none_or(|(_, b)| d < b) {
            best = Some((i, d));
        }
    }
    best.map(|(i, _)| i).ok_or(StitchError::EmptyBank)
}

/// Connective word of the nearest bank instance.
pub fn find_connective<'b>(query: &[f64], bank: &'b [ConnectiveInstance]) -> Result<&'b str, StitchError> {
    nearest_instance(query, bank).map(|i| bank[i].connective.as_str())
}

/// Prefixes sentence `i + 1` with `choices[i]` as `Connective, rest...`. The
/// original first word is lower-cased unless it is a proper noun or a known
/// name. Empty choices and sentences already opening with the connective are
/// left alone.
pub fn insert_connective(
    doc: &CaptionDoc,
    choices: &[Option<String>],
    lex: &GenderLexicon,
) -> Result<CaptionDoc, StitchError> {
    let gaps = doc.sentences().len() - 1;
    if choices.len() != gaps {
        return Err(StitchError::ChoiceCount {
            expected: gaps,
            found: choices.len(),
        });
    }
    let mut sentences: Vec<Vec<TaggedToken>> = doc.sentences().to_vec();
    for (sentence, choice) in sentences.iter_mut().skip(1).zip(choices) {
        let Some(word) = choice.as_deref().map(str::trim).filter(|w| !w.is_empty()) else {
            continue;
        };
        if sentence[0].word.eq_ignore_ascii_case(word) {
            continue;
        }
        let first = &mut sentence[0];
        if !first.is_proper_noun() && !lex.is_name(&first.word) {
            first.word = decapitalize(&first.word);
        }
        let prefix = [
            TaggedToken::new(capitalize(&word.to_lowercase()), "RB"),
            TaggedToken::new(",", ","),
        ];
        sentence.splice(0..0, prefix);
    }
    Ok(doc.with_sentences(sentences))
}
