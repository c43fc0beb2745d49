//! Window features: PCA-reduced local descriptors aggregated into a
//! power/L2-normalized Fisher vector, scored by one-vs-rest linear SVMs.

mod fisher;
mod gmm;
mod pca;
mod svm;

pub use fisher::{fisher_encode, posteriors, power_l2_normalize, FisherVector};
pub use gmm::{fit_gmm, GmmFitConfig, GmmModel, DEFAULT_VARIANCE_FLOOR};
pub use pca::{fit_pca, PcaModel};
pub use svm::{score_ovr, train_ovr_linear, LinearOvrModel, SvmTrainConfig, DEFAULT_C};

use alloc::string::String;

/// One frame's local descriptor.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub index: u64,
    pub descriptor: alloc::vec::Vec<f64>,
}

/// Time-indexed descriptors of one video.
#[derive(Debug, Clone, PartialEq)]
pub struct DescriptorSequence {
    video_id: String,
    frames: alloc::vec::Vec<Frame>,
    dim: usize,
}

impl DescriptorSequence {
    /// Frame indices must be strictly increasing and every descriptor must
    /// share one even dimension of at least 2.
    pub fn new(video_id: impl Into<String>, frames: alloc::vec::Vec<Frame>) -> Result<Self, EncodingError> {
        let dim = frames.first().map_or(0, |f| f.descriptor.len());
        if frames.is_empty() {
            return Err(EncodingError::Empty("frames"));
        }
        if dim < 2 || !dim.is_multiple_of(2) {
            return Err(EncodingError::OddDescriptorDim(dim));
        }
        for (i, pair) in frames.windows(2).enumerate() {
            if pair[1].index <= pair[0].index {
                return Err(EncodingError::FrameOrder { position: i + 1 });
            }
        }
        for f in &frames {
            if f.descriptor.len() != dim {
                return Err(EncodingError::DimensionMismatch {
                    what: "descriptor",
                    expected: dim,
                    found: f.descriptor.len(),
                });
            }
        }
        Ok(Self {
            video_id: video_id.into(),
            frames,
            dim,
        })
    }

    pub fn video_id(&self) -> &str {
        &self.video_id
    }

    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// One past the last frame index.
    pub fn video_length(&self) -> u64 {
        self.frames.last().map_or(0, |f| f.index + 1)
    }

    /// Descriptors whose frame index lies in `[start, end)`.
    pub fn window(&self, start: u64, end: u64) -> impl Iterator<Item = &[f64]> {
        let lo = self.frames.partition_point(|f| f.index < start);
        let hi = self.frames.partition_point(|f| f.index < end);
        self.frames[lo..hi].iter().map(|f| f.descriptor.as_slice())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EncodingError {
    #[error("{0} must not be empty")]
    Empty(&'static str),
    #[error("need at least {needed} rows, got {got}")]
    InsufficientRows { needed: usize, got: usize },
    #[error("target dimension {target} must be in 1..={max}")]
    TargetDim { target: usize, max: usize },
    #[error("column {column} has zero variance")]
    ZeroVariance { column: usize },
    #[error("{what}: expected dimension {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("descriptor dimension {0} must be even and at least 2")]
    OddDescriptorDim(usize),
    #[error("frame indices must be strictly increasing (position {position})")]
    FrameOrder { position: usize },
    #[error("invalid field `{field}`: {reason}")]
    InvalidField { field: &'static str, reason: &'static str },
    #[error("need at least two distinct classes")]
    SingleClass,
    #[error("fisher vector must be normalized before training")]
    Unnormalized,
}
