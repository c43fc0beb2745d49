use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::StitchError;
use crate::text::TaggedToken;

/// Token placed between the two sentences of a pair before embedding.
pub const SENTENCE_BOUNDARY: &str = "</s>";

/// Word vectors of one uniform dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    dim: usize,
    vectors: BTreeMap<String, Vec<f64>>,
}

impl EmbeddingTable {
    pub fn new<I>(dim: usize, entries: I) -> Result<Self, StitchError>
    where
        I: IntoIterator<Item = (String, Vec<f64>)>,
    {
        if dim == 0 {
            return Err(StitchError::Embedding("dimension must be positive"));
        }
        let mut vectors = BTreeMap::new();
        for (token, v) in entries {
            if v.len() != dim {
                return Err(StitchError::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(StitchError::Embedding("non-finite value"));
            }
            vectors.insert(token, v);
        }
        Ok(Self { dim, vectors })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Exact lookup, then lower-cased.
    pub fn get(&self, token: &str) -> Option<&[f64]> {
        self.vectors
            .get(token)
            .or_else(|| self.vectors.get(&token.to_lowercase()))
            .map(Vec::as_slice)
    }
}

/// Mean of the in-vocabulary token vectors. Out-of-vocabulary tokens are
/// skipped; a sentence with none in vocabulary embeds to zero.
pub fn embed_sentence<'a, I>(tokens: I, table: &EmbeddingTable) -> Vec<f64>
where
    I: IntoIterator<Item = &'a str>,
{
    let mut sum = vec![0.0; table.dim()];
    let mut count = 0usize;
    for tok in tokens {
        if let Some(v) = table.get(tok) {
            for (s, x) in sum.iter_mut().zip(v) {
                *s += x;
            }
            count += 1;
        }
    }
    if count > 0 {
        for s in &mut sum {
            *s /= count as f64;
        }
    }
    sum
}

/// Embeds `first`, a boundary token and `second` as one token stream.
pub fn embed_pair(first: &[TaggedToken], second: &[TaggedToken], table: &EmbeddingTable) -> Vec<f64> {
    let stream = first
        .iter()
        .map(|t| t.word.as_str())
        .chain(core::iter::once(SENTENCE_BOUNDARY))
        .chain(second.iter().map(|t| t.word.as_str()));
    embed_sentence(stream, table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn table() -> EmbeddingTable {
        EmbeddingTable::new(
            2,
            [("x".to_string(), vec![1.0, 0.0]), ("y".to_string(), vec![0.0, 1.0])],
        )
        .unwrap()
    }

    #[test]
    fn averages_known_tokens() {
        assert_eq!(embed_sentence(["x", "y"], &table()), vec![0.5, 0.5]);
        assert_eq!(embed_sentence(["x", "oov", "X"], &table()), vec![1.0, 0.0]);
    }

    #[test]
    fn all_oov_is_zero() {
        assert_eq!(embed_sentence(["a", "b"], &table()), vec![0.0, 0.0]);
    }

    #[test]
    fn ragged_table_rejected() {
        let err = EmbeddingTable::new(2, [("x".to_string(), vec![1.0])]).unwrap_err();
        assert_eq!(err, StitchError::DimensionMismatch { expected: 2, found: 1 });
    }
}
