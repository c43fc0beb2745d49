use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use super::{check_inputs, ngram_counts, MetricsError};

const MAX_N: usize = 4;

type Weighted<'a> = BTreeMap<&'a [String], f64>;

fn tfidf<'a>(tokens: &'a [String], n: usize, df: &BTreeMap<&[String], usize>, log_docs: f64) -> Weighted<'a> {
    ngram_counts(tokens, n)
        .into_iter()
        .map(|(gram, count)| {
            let d = df.get(gram).copied().unwrap_or(0).max(1) as f64;
            (gram, count as f64 * (log_docs - libm::log(d)))
        })
        .collect()
}

fn cosine(a: &Weighted<'_>, b: &Weighted<'_>) -> f64 {
    let dot: f64 = a.iter().filter_map(|(g, x)| b.get(g).map(|y| x * y)).sum();
    let na = libm::sqrt(a.values().map(|x| x * x).sum::<f64>());
    let nb = libm::sqrt(b.values().map(|x| x * x).sum::<f64>());
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot / (na * nb)
    }
}

/// CIDEr of each hypothesis. Document frequencies count the reference sets
/// containing an n-gram; with a single item every IDF is zero and so is the
/// score. No length penalty or count clipping is applied.
pub fn cider_per_item(hypotheses: &[Vec<String>], references: &[Vec<Vec<String>>]) -> Result<Vec<f64>, MetricsError> {
    check_inputs(hypotheses, references)?;
    let log_docs = libm::log(references.len() as f64);
    let mut scores = alloc::vec![0.0; hypotheses.len()];
    for n in 1..=MAX_N {
        let mut df: BTreeMap<&[String], usize> = BTreeMap::new();
        for refs in references {
            let grams: BTreeSet<&[String]> = refs.iter().flat_map(|r| ngram_counts(r, n).into_keys()).collect();
            for g in grams {
                *df.entry(g).or_insert(0) += 1;
            }
        }
        for (i, (hyp, refs)) in hypotheses.iter().zip(references).enumerate() {
            let hv = tfidf(hyp, n, &df, log_docs);
            let mean: f64 = refs
                .iter()
                .map(|r| cosine(&hv, &tfidf(r, n, &df, log_docs)))
                .sum::<f64>()
                / refs.len() as f64;
            scores[i] += mean;
        }
    }
    for s in &mut scores {
        *s *= 10.0 / MAX_N as f64;
    }
    Ok(scores)
}

/// Mean CIDEr over the corpus.
pub fn cider(hypotheses: &[Vec<String>], references: &[Vec<Vec<String>>]) -> Result<f64, MetricsError> {
    let per = cider_per_item(hypotheses, references)?;
    Ok(per.iter().sum::<f64>() / per.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::normalize;
    use alloc::vec;

    #[test]
    fn identical_captions_of_distinct_videos_score_ten() {
        let a = normalize("a man is sitting with a plate");
        let b = normalize("two dogs run across the yard");
        let s = cider(&[a.clone(), b.clone()], &[vec![a], vec![b]]).unwrap();
        assert!((s - 10.0).abs() < 1e-12);
    }

    #[test]
    fn disjoint_scores_zero() {
        let s = cider(
            &[normalize("x y z"), normalize("p q r")],
            &[vec![normalize("a b c")], vec![normalize("d e f")]],
        )
        .unwrap();
        assert_eq!(s, 0.0);
    }

    #[test]
    fn single_item_corpus_is_degenerate() {
        let a = normalize("a man sits");
        assert_eq!(cider(&[a.clone()], &[vec![a]]).unwrap(), 0.0);
    }
}
