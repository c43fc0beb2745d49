use alloc::string::String;
use alloc::vec::Vec;

use super::{cky_parse, matches_connective_pattern, GrammarError, Pcfg};
use crate::stitching::{embed_pair, EmbeddingTable};
use crate::text::TaggedToken;

pub const DEFAULT_MAX_INSTANCES: usize = 500;

/// A connective and the vector of the sentence pair it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectiveInstance {
    pub connective: String,
    pub vector: Vec<f64>,
    /// Position of the source pair in the corpus.
    pub source_pair: usize,
}

/// Scans sentence pairs in corpus order and keeps those whose second
/// sentence opens with a connective phrase. Each kept pair is embedded as the
/// first sentence, a boundary token and the second sentence's clause without
/// the connective.
pub fn build_connective_bank(
    pairs: &[(Vec<TaggedToken>, Vec<TaggedToken>)],
    grammar: &Pcfg,
    embeddings: &EmbeddingTable,
    max_instances: usize,
) -> Result<Vec<ConnectiveInstance>, GrammarError> {
    let mut bank = Vec::new();
    for (i, (first, second)) in pairs.iter().enumerate() {
        if bank.len() >= max_instances {
            break;
        }
        let Some(tree) = cky_parse(second, grammar) else {
            continue;
        };
        let Some(m) = matches_connective_pattern(&tree) else {
            continue;
        };
        bank.push(ConnectiveInstance {
            connective: m.connective,
            vector: embed_pair(first, &second[m.remainder], embeddings),
            source_pair: i,
        });
    }
    if bank.is_empty() {
        return Err(GrammarError::EmptyBank { pairs: pairs.len() });
    }
    Ok(bank)
}
