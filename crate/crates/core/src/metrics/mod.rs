//! Caption metrics: corpus BLEU-4, CIDEr and a METEOR variant restricted to
//! exact and stem matches.
//!
//! Inputs are token lists. [`normalize`] produces them from raw text by
//! lower-casing, tokenizing and dropping punctuation, and every scorer is
//! deterministic.

mod bleu;
mod cider;
mod meteor;
mod porter;

pub use bleu::{bleu4, ngram_precisions, BleuStats};
pub use cider::{cider, cider_per_item};
pub use meteor::{meteor_lite, meteor_lite_single, Alignment};
pub use porter::stem;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricsError {
    #[error("no hypotheses to score")]
    NoHypotheses,
    #[error("hypothesis {0} has no references")]
    NoReferences(usize),
    #[error("{hypotheses} hypotheses but {references} reference sets")]
    LengthMismatch { hypotheses: usize, references: usize },
}

/// Lower-cases, tokenizes and removes punctuation-only tokens.
pub fn normalize(text: &str) -> Vec<String> {
    crate::text::tokenize(text)
        .into_iter()
        .filter(|t| t.chars().any(char::is_alphanumeric))
        .map(|t| t.to_lowercase())
        .collect()
}

pub(crate) fn ngram_counts(tokens: &[String], n: usize) -> BTreeMap<&[String], usize> {
    let mut counts = BTreeMap::new();
    if n == 0 || tokens.len() < n {
        return counts;
    }
    for gram in tokens.windows(n) {
        *counts.entry(gram).or_insert(0) += 1;
    }
    counts
}

pub(crate) fn check_inputs(hypotheses: &[Vec<String>], references: &[Vec<Vec<String>>]) -> Result<(), MetricsError> {
    if hypotheses.is_empty() {
        return Err(MetricsError::NoHypotheses);
    }
    if hypotheses.len() != references.len() {
        return Err(MetricsError::LengthMismatch {
            hypotheses: hypotheses.len(),
            references: references.len(),
        });
    }
    if let Some(i) = references.iter().position(Vec::is_empty) {
        return Err(MetricsError::NoReferences(i));
    }
    Ok(())
}

/// Scores of one caption or of a whole corpus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scores {
    pub bleu4: f64,
    pub cider: f64,
    pub meteor: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationReport {
    pub per_item: Vec<Scores>,
    /// Corpus BLEU-4, mean CIDEr and mean METEOR.
    pub corpus: Scores,
}

/// Scores each hypothesis and the corpus as a whole.
pub fn evaluate(hypotheses: &[Vec<String>], references: &[Vec<Vec<String>>]) -> Result<EvaluationReport, MetricsError> {
    check_inputs(hypotheses, references)?;
    let ciders = cider_per_item(hypotheses, references)?;
    let mut per_item = Vec::with_capacity(hypotheses.len());
    for (i, (h, refs)) in hypotheses.iter().zip(references).enumerate() {
        per_item.push(Scores {
            bleu4: bleu4(core::slice::from_ref(h), core::slice::from_ref(refs))?,
            cider: ciders[i],
            meteor: meteor_lite(h, refs),
        });
    }
    let n = per_item.len() as f64;
    let corpus = Scores {
        bleu4: bleu4(hypotheses, references)?,
        cider: ciders.iter().sum::<f64>() / n,
        meteor: per_item.iter().map(|s| s.meteor).sum::<f64>() / n,
    };
    Ok(EvaluationReport { per_item, corpus })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn normalize_strips_punctuation() {
        assert_eq!(normalize("A man, sits."), vec!["a", "man", "sits"]);
    }

    #[test]
    fn input_checks() {
        assert_eq!(check_inputs(&[], &[]), Err(MetricsError::NoHypotheses));
        let h = vec![normalize("a b")];
        assert_eq!(check_inputs(&h, &[vec![]]), Err(MetricsError::NoReferences(0)));
        assert!(matches!(
            check_inputs(&h, &[]),
            Err(MetricsError::LengthMismatch { .. })
        ));
    }
}
