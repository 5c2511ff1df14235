//! Dense pseudo-labels from image-level class labels.
//!
//! The pipeline computes class activation maps from classifier features,
//! keeps the strongest responses as seeds, and grows them across the image
//! with a saliency-weighted HSV similarity test:
//!
//! 1. [`cam`]: per-class activation maps and top-fraction seed extraction.
//! 2. [`srg`]: deterministic priority-front region growing.
//! 3. [`eval`]: confusion counts, IoU and mIoU reports.
//! 4. [`pipeline`]: manifest parsing and batch runs writing label PNGs.
//!
//! [`model`] holds the shared types and file codecs.

pub mod cam;
pub mod error;
pub mod eval;
pub mod model;
pub mod pipeline;
pub mod srg;

pub use error::{Error, Result};
