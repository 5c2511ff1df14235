use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("bad magic: expected \"SGT1\"")]
    BadMagic,

    #[error("truncated payload: expected {expected} bytes, found {found}")]
    TruncatedPayload { expected: usize, found: usize },

    #[error("non-finite value at element {index}")]
    NonFiniteValue { index: usize },

    #[error("unsupported tensor rank {0} (expected 2 or 3)")]
    UnsupportedRank(u32),

    #[error("expected a rank-{expected} tensor, found rank {found}")]
    UnexpectedRank { expected: u32, found: u32 },

    #[error("invalid label code {code} (num_classes = {num_classes})")]
    InvalidLabelCode { code: u8, num_classes: u8 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("channel mismatch: activations have {activations} channels, weights have {weights}")]
    ChannelMismatch { activations: usize, weights: usize },

    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },

    #[error("pixel ({x}, {y}) out of bounds for {width}x{height} image")]
    OutOfBounds {
        x: usize,
        y: usize,
        width: usize,
        height: usize,
    },

    #[error("no activation map supplied for class {0}")]
    MissingCam(u8),

    #[error("invalid value: {0}")]
    InvalidValue(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("no class has a nonempty union; nothing to evaluate")]
    EmptyEvaluation,

    #[error("no name for class {0}")]
    MissingName(u8),

    #[error("line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },

    #[error("duplicate image id {id:?} on line {line}")]
    DuplicateId { id: String, line: usize },

    #[error("manifest contains no entries")]
    EmptyManifest,

    #[error("{id}: {source}")]
    Entry {
        id: String,
        #[source]
        source: Box<Error>,
    },

    #[error("unsupported image {path}: {reason}")]
    UnsupportedImage { path: PathBuf, reason: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Image {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn image(path: impl Into<PathBuf>, source: image::ImageError) -> Self {
        Error::Image {
            path: path.into(),
            source,
        }
    }
}
