use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use super::{check_inputs, ngram_counts, MetricsError};

const MAX_N: usize = 4;

/// Corpus-level sufficient statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BleuStats {
    /// Clipped n-gram matches for n = 1..=4.
    pub matches: [usize; MAX_N],
    /// Hypothesis n-gram totals for n = 1..=4.
    pub totals: [usize; MAX_N],
    pub hypothesis_len: usize,
    /// Sum of the reference lengths closest to each hypothesis length.
    pub reference_len: usize,
}

impl BleuStats {
    pub fn collect(hypotheses: &[Vec<String>], references: &[Vec<Vec<String>>]) -> Self {
        let mut s = Self::default();
        for (hyp, refs) in hypotheses.iter().zip(references) {
            s.hypothesis_len += hyp.len();
            s.reference_len += refs
                .iter()
                .map(Vec::len)
                .min_by_key(|&l| (l.abs_diff(hyp.len()), l))
                .unwrap_or(0);
            for n in 1..=MAX_N {
                let hyp_counts = ngram_counts(hyp, n);
                let mut max_ref: BTreeMap<&[String], usize> = BTreeMap::new();
                for r in refs {
                    for (gram, c) in ngram_counts(r, n) {
                        let e = max_ref.entry(gram).or_insert(0);
                        *e = (*e).max(c);
                    }
                }
                for (gram, c) in &hyp_counts {
                    s.matches[n - 1] += (*c).min(max_ref.get(gram).copied().unwrap_or(0));
                }
                s.totals[n - 1] += hyp.len().saturating_sub(n - 1);
            }
        }
        s
    }

    pub fn precisions(&self) -> [f64; MAX_N] {
        let mut p = [0.0; MAX_N];
        for (i, out) in p.iter_mut().enumerate() {
            if self.totals[i] > 0 {
                *out = self.matches[i] as f64 / self.totals[i] as f64;
            }
        }
        p
    }

    pub fn brevity_penalty(&self) -> f64 {
        if self.hypothesis_len == 0 {
            0.0
        } else if self.hypothesis_len > self.reference_len {
            1.0
        } else {
            libm::exp(1.0 - self.reference_len as f64 / self.hypothesis_len as f64)
        }
    }

    /// Geometric mean of the four precisions times the brevity penalty;
    /// zero when any precision is zero.
    pub fn score(&self) -> f64 {
        let p = self.precisions();
        if p.contains(&0.0) {
            return 0.0;
        }
        let log_mean = p.iter().map(|&x| libm::log(x)).sum::<f64>() / MAX_N as f64;
        self.brevity_penalty() * libm::exp(log_mean)
    }
}

/// Modified n-gram precisions for n = 1..=4 over the corpus.
pub fn ngram_precisions(
    hypotheses: &[Vec<String>],
    references: &[Vec<Vec<String>>],
) -> Result<[f64; MAX_N], MetricsError> {
    check_inputs(hypotheses, references)?;
    Ok(BleuStats::collect(hypotheses, references).precisions())
}

/// Unsmoothed corpus BLEU-4.
pub fn bleu4(hypotheses: &[Vec<String>], references: &[Vec<Vec<String>>]) -> Result<f64, MetricsError> {
    check_inputs(hypotheses, references)?;
    Ok(BleuStats::collect(hypotheses, references).score())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::normalize;
    use alloc::vec;

    #[test]
    fn identical_is_one() {
        let h = normalize("a man is sitting with a plate");
        assert_eq!(bleu4(&[h.clone()], &[vec![h]]).unwrap(), 1.0);
    }

    #[test]
    fn disjoint_is_zero() {
        let h = normalize("x y z w");
        let r = normalize("a b c d");
        assert_eq!(bleu4(&[h], &[vec![r]]).unwrap(), 0.0);
    }

    #[test]
    fn clipped_unigram_precision() {
        let h = normalize("the the the the");
        let r = normalize("the cat");
        let p = ngram_precisions(&[h.clone()], &[vec![r.clone()]]).unwrap();
        assert_eq!(p[0], 0.25);
        assert_eq!(p[1], 0.0);
        assert_eq!(bleu4(&[h], &[vec![r]]).unwrap(), 0.0);
    }

    #[test]
    fn short_hypothesis_is_penalized() {
        let r = normalize("a man is sitting on a red chair today");
        let h = normalize("a man is sitting on a red");
        let s = BleuStats::collect(&[h.clone()], &[vec![r.clone()]]);
        assert_eq!(s.reference_len, 9);
        let bp = libm::exp(1.0 - 9.0 / 7.0);
        assert!((bleu4(&[h], &[vec![r]]).unwrap() - bp).abs() < 1e-12);
    }

    #[test]
    fn closest_reference_length_ties_pick_shorter() {
        let h = normalize("a b c d e");
        let refs = vec![normalize("a b c d"), normalize("a b c d e f")];
        assert_eq!(BleuStats::collect(&[h], &[refs]).reference_len, 4);
    }
}
