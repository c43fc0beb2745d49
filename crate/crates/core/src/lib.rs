//! Core algorithms for turning per-window action scores and per-segment
//! captions into one story-like caption.
//!
//! The crate is `no_std` and needs only `alloc`. File formats, configuration
//! and the command line live in the `storyline` crate.
//!
//! * [`encoding`]: PCA, diagonal GMM, Fisher vectors and one-vs-rest linear
//!   SVMs that score temporal windows.
//! * [`localization`]: sliding windows, temporal NMS, thresholding and
//!   same-class merging into segments.
//! * [`grammar`]: PCFG loading, CKY parsing and the connective-instance bank.
//! * [`stitching`]: backward coreference resolution and connective insertion.
//! * [`metrics`]: BLEU-4, CIDEr and a simplified METEOR.
#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![cfg_attr(test, allow(clippy::cloned_ref_to_slice_refs))]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod encoding;
pub mod grammar;
pub mod linalg;
pub mod localization;
pub mod metrics;
pub mod stitching;
pub mod text;

/// Crate version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
