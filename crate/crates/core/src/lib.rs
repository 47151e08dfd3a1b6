//! Machine-vision pipeline for grading apples by surface browning.
//!
//! The pipeline converts a true-color apple photograph to grayscale with a
//! weighted red/green transform, smooths it with a Gaussian low-pass filter,
//! segments dark (defective) regions with Otsu's automatic threshold, and
//! classifies the fruit by its normalized defective area (NDA). Supporting
//! modules provide the weight-space grid search that produced the production
//! transform weights, a histogram-valley oracle standing in for interactive
//! thresholding, a Roberts-cross edge baseline, and a deterministic synthetic
//! apple generator with ground-truth defect masks for end-to-end validation.
//!
//! Floating-point math is generic over [`Real`] (`f32` or `f64`); `f64` is
//! the default everywhere and the `*32` aliases select `f32`.

pub mod blur;
pub mod error;
pub mod grading;
pub mod grayscale;
pub mod io;
pub mod pipeline;
pub mod raster;
pub mod report;
pub mod resize;
pub mod segmentation;
pub mod synthetic;
pub mod weights;

mod real;

pub use error::{Error, Result};
pub use real::Real;

pub use blur::{gaussian_kernel_1d, gaussian_kernel_2d, gaussian_lowpass};
pub use grading::{
    classify_nda, compute_nda, evaluate_batch, extraction_error, ConfusionCounts, EvalRecord,
    EvalRow, EvaluationReport, GradeLabel, NdaRecord, DEFAULT_TAU,
};
pub use grayscale::{weighted_grayscale, weighted_intensity};
pub use pipeline::{grade_image, valley_oracle_nda, GradeOutcome, PipelineConfig};
pub use raster::{compute_histogram, BinaryMask, GrayImage, Histogram, RgbImage};
pub use resize::resize_bilinear;
pub use segmentation::{
    apply_threshold, modality, otsu_threshold, roberts_edges, valley_threshold, ModalityReport,
    ThresholdResult, DEFAULT_PEAK_PROMINENCE, DEFAULT_SMOOTHING_WINDOW,
};
pub use synthetic::{
    generate_batch, render_apple, DefectDisk, GroundTruth, SyntheticAppleSpec, SyntheticSample,
};
pub use weights::{
    centroid_of_weights, enumerate_weight_grid, evaluate_weight_pair, production_weights,
    search_results_to_csv, search_weight_grid, ModalityParams, WeightGrid, WeightPair,
    WeightSearchResult,
};

/// `f32` weight pair.
pub type WeightPair32 = weights::WeightPair<f32>;
/// `f32` weight grid.
pub type WeightGrid32 = weights::WeightGrid<f32>;
/// `f32` per-pair search result.
pub type WeightSearchResult32 = weights::WeightSearchResult<f32>;
/// `f32` Otsu result.
pub type ThresholdResult32 = segmentation::ThresholdResult<f32>;
/// `f32` batch record.
pub type NdaRecord32 = grading::NdaRecord<f32>;
/// `f32` evaluation report.
pub type EvaluationReport32 = grading::EvaluationReport<f32>;
/// `f32` pipeline configuration.
pub type PipelineConfig32 = pipeline::PipelineConfig<f32>;
/// `f32` single-image grading outcome.
pub type GradeOutcome32 = pipeline::GradeOutcome<f32>;
