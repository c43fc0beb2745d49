//! Turning independent per-segment captions into one passage.
//!
//! [`stitch`] first rewrites repeated noun phrases as pronouns, then prefixes
//! each later sentence with the connective of the nearest bank instance to
//! the embedded sentence pair.

mod connective;
mod coref;
mod embed;
mod lexicon;

pub use connective::{find_connective, insert_connective, nearest_instance};
pub use coref::{
    chunk_noun_phrases, mention_chains, pronoun, resolve_backward_coreference, Mention, MentionChain, NounPhrase,
    Number, Slot,
};
pub use embed::{embed_pair, embed_sentence, EmbeddingTable, SENTENCE_BOUNDARY};
pub use lexicon::{Gender, GenderLexicon, Lemmatizer, LexiconEntry};

use alloc::string::String;
use alloc::vec::Vec;

use crate::grammar::ConnectiveInstance;
use crate::text::{detokenize, TaggedToken};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StitchError {
    #[error("caption document has no sentences")]
    NoSentences,
    #[error("sentence {0} is empty")]
    EmptySentence(usize),
    #[error("token `{token}` is given two genders")]
    GenderConflict { token: String },
    #[error("vector dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("embedding table: {0}")]
    Embedding(&'static str),
    #[error("connective bank is empty")]
    EmptyBank,
    #[error("expected {expected} connective choices, got {found}")]
    ChoiceCount { expected: usize, found: usize },
}

/// Ordered caption sentences of one video.
#[derive(Debug, Clone, PartialEq)]
pub struct CaptionDoc {
    video_id: String,
    sentences: Vec<Vec<TaggedToken>>,
    stitched: Option<String>,
}

impl CaptionDoc {
    pub fn new(video_id: impl Into<String>, sentences: Vec<Vec<TaggedToken>>) -> Result<Self, StitchError> {
        if sentences.is_empty() {
            return Err(StitchError::NoSentences);
        }
        if let Some(i) = sentences.iter().position(Vec::is_empty) {
            return Err(StitchError::EmptySentence(i));
        }
        Ok(Self {
            video_id: video_id.into(),
            sentences,
            stitched: None,
        })
    }

    pub fn video_id(&self) -> &str {
        &self.video_id
    }

    pub fn sentences(&self) -> &[Vec<TaggedToken>] {
        &self.sentences
    }

    pub fn stitched(&self) -> Option<&str> {
        self.stitched.as_deref()
    }

    /// Sentences rendered as text and joined with single spaces.
    pub fn render(&self) -> String {
        let rendered: Vec<String> = self
            .sentences
            .iter()
            .map(|s| detokenize(s.iter().map(|t| t.word.as_str())))
            .collect();
        rendered.join(" ")
    }

    fn with_sentences(&self, sentences: Vec<Vec<TaggedToken>>) -> Self {
        Self {
            video_id: self.video_id.clone(),
            sentences,
            stitched: None,
        }
    }
}

/// Shared read-only resources for [`stitch`].
#[derive(Debug, Clone, Copy)]
pub struct StitchResources<'a> {
    pub lexicon: &'a GenderLexicon,
    pub lemmatizer: &'a Lemmatizer,
    pub embeddings: &'a EmbeddingTable,
    pub bank: &'a [ConnectiveInstance],
}

/// Coreference, then one connective per sentence gap chosen by nearest
/// neighbour. The returned document carries the rendered passage.
pub fn stitch(doc: &CaptionDoc, res: &StitchResources<'_>) -> Result<CaptionDoc, StitchError> {
    let resolved = resolve_backward_coreference(doc, res.lexicon, res.lemmatizer);
    let mut choices = Vec::with_capacity(resolved.sentences.len().saturating_sub(1));
    for pair in resolved.sentences.windows(2) {
        let query = embed_pair(&pair[0], &pair[1], res.embeddings);
        choices.push(Some(String::from(find_connective(&query, res.bank)?)));
    }
    let mut out = insert_connective(&resolved, &choices, res.lexicon)?;
    out.stitched = Some(out.render());
    Ok(out)
}
