//! End-to-end grading pipeline: resize, weighted grayscale, Gaussian
//! low-pass, histogram segmentation, defect-area measurement, and the
//! healthy/defective verdict.

use crate::blur::gaussian_lowpass;
use crate::error::Result;
use crate::grading::{classify_nda, compute_nda, GradeLabel, DEFAULT_TAU};
use crate::grayscale::weighted_grayscale;
use crate::raster::{compute_histogram, BinaryMask, GrayImage, Histogram, RgbImage};
use crate::real::{rconst, Real};
use crate::resize::resize_bilinear;
use crate::segmentation::{
    apply_threshold, modality, otsu_threshold, valley_threshold, ModalityReport,
};
use crate::weights::{production_weights, ModalityParams, WeightPair};

/// Input resolution that triggers the default downsample.
const NATIVE_CAPTURE_SIZE: (u32, u32) = (1600, 1200);
/// Target resolution for natively captured images.
const DEFAULT_PROCESS_SIZE: (u32, u32) = (1000, 750);

/// Everything the grading pipeline needs to process one image.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig<T: Real = f64> {
    /// Grayscale transform weights.
    pub weights: WeightPair<T>,
    /// Gaussian low-pass standard deviation.
    pub sigma: T,
    /// Classifier threshold on the NDA feature.
    pub tau: T,
    /// Explicit processing resolution. When `None`, 1600x1200 inputs are
    /// downsampled to 1000x750 and everything else is left unchanged.
    pub resize_to: Option<(u32, u32)>,
    /// Histogram modality detection parameters.
    pub modality: ModalityParams<T>,
    /// Fixed segmentation threshold overriding Otsu when set.
    pub manual_threshold: Option<u8>,
}

impl<T: Real> Default for PipelineConfig<T> {
    fn default() -> Self {
        Self {
            weights: production_weights(),
            sigma: rconst(0.5),
            tau: rconst(DEFAULT_TAU),
            resize_to: None,
            modality: ModalityParams::default(),
            manual_threshold: None,
        }
    }
}

/// Result of grading one image.
#[derive(Debug, Clone, PartialEq)]
pub struct GradeOutcome<T: Real = f64> {
    /// Image size actually processed, after any resize.
    pub processed_size: (u32, u32),
    /// Histogram of the smoothed gray image.
    pub histogram: Histogram,
    /// Peak structure of that histogram.
    pub modality: ModalityReport,
    /// Gray-level threshold used for segmentation.
    pub threshold: u8,
    /// Between-class variance at the threshold; `None` when a manual
    /// threshold bypassed the search.
    pub criterion_value: Option<T>,
    /// Normalized defect area of the segmented mask.
    pub nda: T,
    /// Classifier verdict.
    pub label: GradeLabel,
    /// Segmented defect mask.
    pub mask: BinaryMask,
}

/// Resize, transform, and smooth an image; returns the smoothed gray image
/// and its histogram.
fn preprocess<T: Real>(
    image: &RgbImage,
    config: &PipelineConfig<T>,
) -> Result<(GrayImage, Histogram)> {
    let target = config.resize_to.or({
        if (image.width, image.height) == NATIVE_CAPTURE_SIZE {
            Some(DEFAULT_PROCESS_SIZE)
        } else {
            None
        }
    });
    let resized;
    let working = match target {
        Some((w, h)) if (w, h) != (image.width, image.height) => {
            resized = resize_bilinear(image, w, h)?;
            &resized
        }
        _ => image,
    };
    let gray = weighted_grayscale(working, &config.weights);
    let smoothed = gaussian_lowpass(&gray, config.sigma)?;
    let histogram = compute_histogram(&smoothed);
    Ok((smoothed, histogram))
}

/// Runs the full grading pipeline on one image.
pub fn grade_image<T: Real>(
    image: &RgbImage,
    config: &PipelineConfig<T>,
) -> Result<GradeOutcome<T>> {
    let (smoothed, histogram) = preprocess(image, config)?;
    let report = modality::<T>(
        &histogram,
        config.modality.smoothing_window,
        config.modality.prominence,
    )?;
    let (threshold, criterion_value) = match config.manual_threshold {
        Some(t) => (t, None),
        None => {
            let r = otsu_threshold::<T>(&histogram)?;
            (r.threshold, Some(r.criterion_value))
        }
    };
    let mask = apply_threshold(&smoothed, threshold);
    let nda = compute_nda::<T>(&mask)?;
    Ok(GradeOutcome {
        processed_size: (smoothed.width, smoothed.height),
        histogram,
        modality: report,
        threshold,
        criterion_value,
        nda,
        label: classify_nda(nda, config.tau),
        mask,
    })
}

/// Measures the NDA a valley-threshold reference segmentation would
/// produce on the same preprocessed image, or `None` when its histogram is
/// not bimodal.
pub fn valley_oracle_nda<T: Real>(
    image: &RgbImage,
    config: &PipelineConfig<T>,
) -> Result<Option<T>> {
    let (smoothed, histogram) = preprocess(image, config)?;
    match valley_threshold::<T>(&histogram, config.modality.smoothing_window) {
        Ok(t) => {
            let mask = apply_threshold(&smoothed, t);
            Ok(Some(compute_nda::<T>(&mask)?))
        }
        Err(crate::error::Error::NotBimodal { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}
