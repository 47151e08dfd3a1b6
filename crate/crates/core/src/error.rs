//! Error type shared by every stage of the pipeline.

use std::path::PathBuf;

/// Errors produced by image I/O, the processing stages, and the synthetic
/// image generator.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An input path does not exist or could not be opened.
    #[error("missing input file: {0}")]
    MissingFile(PathBuf),
    /// The file exists but is not one of the supported formats
    /// (8-bit PNG, PPM P6, PGM P5).
    #[error("unsupported image format: {0}")]
    UnsupportedFormat(String),
    /// The file matched a supported format but its contents are invalid.
    #[error("corrupt image data: {0}")]
    CorruptData(String),
    /// A resize target dimension was zero.
    #[error("resize target must have nonzero width and height")]
    ZeroTargetDimension,
    /// The Gaussian standard deviation was zero or negative.
    #[error("sigma must be positive, got {0}")]
    NonPositiveSigma(f64),
    /// A histogram smoothing window was even or zero.
    #[error("smoothing window must be an odd positive integer, got {0}")]
    InvalidWindow(usize),
    /// A peak prominence fraction was outside [0, 1].
    #[error("prominence must lie in [0, 1], got {0}")]
    InvalidProminence(f64),
    /// A histogram with zero total count was passed where mass is required.
    #[error("histogram has no pixels")]
    EmptyHistogram,
    /// A valley threshold was requested for a histogram that is not bimodal.
    #[error("histogram is not bimodal ({peaks} peak(s) found)")]
    NotBimodal {
        /// Number of peaks the modality screen reported.
        peaks: usize,
    },
    /// A weight-grid step was zero, negative, or too large to fit the range.
    #[error("grid step must lie in (0, 1], got {0}")]
    InvalidStep(f64),
    /// A centroid was requested over an empty list of weight pairs.
    #[error("cannot take the centroid of zero weight pairs")]
    EmptyWeightList,
    /// A defect-area fraction was requested for a zero-pixel mask.
    #[error("mask has zero pixels")]
    ZeroSizeMask,
    /// Batch evaluation was asked for over zero records.
    #[error("evaluation batch is empty")]
    EmptyBatch,
    /// Paired extraction totals would divide by a zero oracle total.
    #[error("oracle extraction total is zero; extraction error is undefined")]
    ZeroOracleTotal,
    /// A synthetic apple description is geometrically impossible.
    #[error("invalid synthetic spec: {0}")]
    InvalidSpec(String),
    /// An underlying filesystem operation failed.
    #[error("i/o error on {path}: {source}")]
    Io {
        /// Path involved in the failed operation.
        path: PathBuf,
        /// Underlying error.
        #[source]
        source: std::io::Error,
    },
}

/// Convenient alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Wraps a filesystem error with the path involved, mapping not-found to
/// [`Error::MissingFile`].
pub fn io_err(path: &std::path::Path, source: std::io::Error) -> Error {
    if source.kind() == std::io::ErrorKind::NotFound {
        Error::MissingFile(path.to_path_buf())
    } else {
        Error::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}
