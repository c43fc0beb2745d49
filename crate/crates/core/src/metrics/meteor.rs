use alloc::string::String;
use alloc::vec::Vec;

use super::porter::stem;

const ALPHA_RECALL_WEIGHT: f64 = 9.0;
const GAMMA: f64 = 0.5;
const BETA: i32 = 3;

/// Unigram alignment between a hypothesis and one reference.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alignment {
    /// `(hypothesis index, reference index)` sorted by hypothesis index.
    pub pairs: Vec<(usize, usize)>,
}

impl Alignment {
    /// Exact matches first, then Porter-stem matches among the leftovers.
    /// Each hypothesis token, left to right, takes the earliest free
    /// reference token.
    pub fn greedy(hypothesis: &[String], reference: &[String]) -> Self {
        let mut hyp_used = alloc::vec![false; hypothesis.len()];
        let mut ref_used = alloc::vec![false; reference.len()];
        let mut pairs = Vec::new();

        let hyp_stems: Vec<String> = hypothesis.iter().map(|w| stem(w)).collect();
        let ref_stems: Vec<String> = reference.iter().map(|w| stem(w)).collect();
        let stages: [(&[String], &[String]); 2] = [(hypothesis, reference), (&hyp_stems, &ref_stems)];
        for (hyp_keys, ref_keys) in stages {
            for (h, key) in hyp_keys.iter().enumerate() {
                if hyp_used[h] {
                    continue;
                }
                if let Some(r) = (0..ref_keys.len()).find(|&r| !ref_used[r] && ref_keys[r] == *key) {
                    hyp_used[h] = true;
                    ref_used[r] = true;
                    pairs.push((h, r));
                }
            }
        }
        pairs.sort_unstable();
        Self { pairs }
    }

    pub fn matches(&self) -> usize {
        self.pairs.len()
    }

    /// Runs of matches adjacent in both sentences.
    pub fn chunks(&self) -> usize {
        if self.pairs.is_empty() {
            return 0;
        }
        1 + self
            .pairs
            .windows(2)
            .filter(|w| !(w[1].0 == w[0].0 + 1 && w[1].1 == w[0].1 + 1))
            .count()
    }
}

/// Score against a single reference:
/// `F = 10PR/(R + 9P)`, `penalty = 0.5·(chunks/matches)³`, `F·(1 − penalty)`.
pub fn meteor_lite_single(hypothesis: &[String], reference: &[String]) -> f64 {
    let a = Alignment::greedy(hypothesis, reference);
    let m = a.matches();
    if m == 0 {
        return 0.0;
    }
    let p = m as f64 / hypothesis.len() as f64;
    let r = m as f64 / reference.len() as f64;
    let f_mean = 10.0 * p * r / (r + ALPHA_RECALL_WEIGHT * p);
    let penalty = GAMMA * libm::pow(a.chunks() as f64 / m as f64, BETA as f64);
    f_mean * (1.0 - penalty)
}

/// Best single-reference score.
pub fn meteor_lite(hypothesis: &[String], references: &[Vec<String>]) -> f64 {
    references
        .iter()
        .map(|r| meteor_lite_single(hypothesis, r))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::normalize;
    use alloc::vec;

    #[test]
    fn identical_sentence_formula() {
        let h = normalize("a man is sitting with a plate");
        let m = h.len() as f64;
        assert_eq!(meteor_lite(&h, &[h.clone()]), 1.0 - 0.5 * libm::pow(1.0 / m, 3.0));
    }

    #[test]
    fn no_match_is_zero() {
        assert_eq!(meteor_lite(&normalize("x y"), &[normalize("a b")]), 0.0);
    }

    #[test]
    fn stem_stage_aligns_inflections() {
        let h = normalize("a man sits");
        let r = normalize("a man is sitting");
        let a = Alignment::greedy(&h, &r);
        assert_eq!(a.pairs, vec![(0, 0), (1, 1), (2, 3)]);
        assert_eq!(a.chunks(), 2);
    }
}
