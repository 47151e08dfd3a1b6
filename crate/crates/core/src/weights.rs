//! Grayscale-weight grid search: grid enumeration, per-pair bimodality and
//! NDA evaluation, and the centroid that condenses selected pairs into a
//! single production weight pair.

use rayon::prelude::*;

use crate::blur::gaussian_lowpass;
use crate::error::{Error, Result};
use crate::grading::compute_nda;
use crate::grayscale::weighted_grayscale;
use crate::raster::{compute_histogram, RgbImage};
use crate::real::rconst;
use crate::segmentation::{
    apply_threshold, modality, otsu_threshold, DEFAULT_PEAK_PROMINENCE, DEFAULT_SMOOTHING_WINDOW,
};
use crate::Real;

/// Red/green coefficients of the grayscale transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightPair<T = f64> {
    /// Red coefficient, non-negative.
    pub a: T,
    /// Green coefficient, non-negative.
    pub b: T,
}

impl<T: Real> WeightPair<T> {
    /// Creates a pair; both coefficients must be non-negative.
    pub fn new(a: T, b: T) -> Self {
        assert!(
            a >= T::zero() && b >= T::zero(),
            "weights must be non-negative"
        );
        Self { a, b }
    }
}

/// The fixed red/green weights used by the production pipeline.
pub fn production_weights<T: Real>() -> WeightPair<T> {
    WeightPair::new(rconst(0.7641), rconst(0.7436))
}

/// Parameters of the histogram modality screen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModalityParams<T = f64> {
    /// Centered moving-average window (odd).
    pub smoothing_window: usize,
    /// Peak prominence as a fraction of the smoothed maximum.
    pub prominence: T,
}

impl<T: Real> Default for ModalityParams<T> {
    fn default() -> Self {
        Self {
            smoothing_window: DEFAULT_SMOOTHING_WINDOW,
            prominence: rconst(DEFAULT_PEAK_PROMINENCE),
        }
    }
}

/// Outcome of evaluating one weight pair on one image.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightSearchResult<T = f64> {
    /// The evaluated pair.
    pub pair: WeightPair<T>,
    /// Whether the smoothed gray-level histogram had exactly two peaks.
    pub is_bimodal: bool,
    /// Otsu threshold, present iff bimodal.
    pub threshold: Option<u8>,
    /// Normalized defective area, present iff bimodal.
    pub nda: Option<T>,
}

/// The enumerated search grid.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightGrid<T = f64> {
    /// Grid spacing along each axis.
    pub step: T,
    /// Pairs in row-major order: `a` outer, `b` inner.
    pub pairs: Vec<WeightPair<T>>,
}

/// Enumerates all pairs `(a, b)` with both coordinates in
/// `{0.1, 0.1 + step, …}` capped at 1.0, in row-major order.
///
/// Values are generated in integer ten-thousandths, so every coordinate is
/// an exact four-decimal quantity and CSV round-trips are lossless.
pub fn enumerate_weight_grid<T: Real>(step: T) -> Result<WeightGrid<T>> {
    let step_f = step.to_f64().unwrap_or(f64::NAN);
    if !(step_f > 0.0 && step_f <= 1.0) {
        return Err(Error::InvalidStep(step_f));
    }
    let step_int = (step_f * 10_000.0).round() as i64;
    if step_int == 0 {
        return Err(Error::InvalidStep(step_f));
    }
    let mut axis = Vec::new();
    let mut v = 1_000i64;
    while v <= 10_000 {
        axis.push(rconst::<T>(v as f64 / 10_000.0));
        v += step_int;
    }
    let mut pairs = Vec::with_capacity(axis.len() * axis.len());
    for &a in &axis {
        for &b in &axis {
            pairs.push(WeightPair::new(a, b));
        }
    }
    Ok(WeightGrid { step, pairs })
}

/// Runs the full single-pair pipeline on a preprocessed image:
/// grayscale transform, Gaussian low-pass, histogram, modality screen, and
/// — when the histogram is bimodal — Otsu thresholding and NDA.
pub fn evaluate_weight_pair<T: Real>(
    img: &RgbImage,
    pair: WeightPair<T>,
    params: &ModalityParams<T>,
    sigma: T,
) -> Result<WeightSearchResult<T>> {
    let gray = weighted_grayscale(img, &pair);
    let smooth = gaussian_lowpass(&gray, sigma)?;
    let histogram = compute_histogram(&smooth);
    let report = modality(&histogram, params.smoothing_window, params.prominence)?;
    if !report.is_bimodal {
        return Ok(WeightSearchResult {
            pair,
            is_bimodal: false,
            threshold: None,
            nda: None,
        });
    }
    let threshold = otsu_threshold::<T>(&histogram)?.threshold;
    let mask = apply_threshold(&smooth, threshold);
    let nda = compute_nda::<T>(&mask)?;
    Ok(WeightSearchResult {
        pair,
        is_bimodal: true,
        threshold: Some(threshold),
        nda: Some(nda),
    })
}

/// Evaluates every pair of a grid in parallel; results keep grid order.
pub fn search_weight_grid<T: Real>(
    img: &RgbImage,
    grid: &WeightGrid<T>,
    params: &ModalityParams<T>,
    sigma: T,
) -> Result<Vec<WeightSearchResult<T>>> {
    grid.pairs
        .par_iter()
        .map(|&pair| evaluate_weight_pair(img, pair, params, sigma))
        .collect()
}

/// Arithmetic mean of the pairs, component by component.
pub fn centroid_of_weights<T: Real>(pairs: &[WeightPair<T>]) -> Result<WeightPair<T>> {
    if pairs.is_empty() {
        return Err(Error::EmptyWeightList);
    }
    let n = rconst::<T>(pairs.len() as f64);
    let sum_a: T = pairs.iter().map(|p| p.a).sum();
    let sum_b: T = pairs.iter().map(|p| p.b).sum();
    Ok(WeightPair::new(sum_a / n, sum_b / n))
}

/// Renders search results as CSV with header
/// `a,b,is_bimodal,threshold,nda`; threshold and NDA cells are empty for
/// non-bimodal pairs.
pub fn search_results_to_csv<T: Real>(results: &[WeightSearchResult<T>]) -> String {
    let mut out = String::from("a,b,is_bimodal,threshold,nda\n");
    for r in results {
        let threshold = r.threshold.map(|t| t.to_string()).unwrap_or_default();
        let nda = r
            .nda
            .map(|v| format!("{:.6}", v.to_f64().unwrap()))
            .unwrap_or_default();
        out.push_str(&format!(
            "{:.4},{:.4},{},{},{}\n",
            r.pair.a.to_f64().unwrap(),
            r.pair.b.to_f64().unwrap(),
            r.is_bimodal,
            threshold,
            nda
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_step_gives_the_full_hundred_pair_grid() {
        let grid = enumerate_weight_grid(0.1f64).unwrap();
        assert_eq!(grid.pairs.len(), 100);
        assert_eq!(grid.pairs[0], WeightPair::new(0.1, 0.1));
        assert_eq!(grid.pairs[99], WeightPair::new(1.0, 1.0));
        // Row-major: a stays put while b advances.
        assert_eq!(grid.pairs[1], WeightPair::new(0.1, 0.2));
        assert_eq!(grid.pairs[10], WeightPair::new(0.2, 0.1));
    }

    #[test]
    fn coarse_steps_enumerate_exactly() {
        let four = enumerate_weight_grid(0.9f64).unwrap();
        assert_eq!(
            four.pairs,
            vec![
                WeightPair::new(0.1, 0.1),
                WeightPair::new(0.1, 1.0),
                WeightPair::new(1.0, 0.1),
                WeightPair::new(1.0, 1.0),
            ]
        );
        let nine = enumerate_weight_grid(0.45f64).unwrap();
        assert_eq!(nine.pairs.len(), 9);
        let axis: Vec<f64> = nine.pairs.iter().take(3).map(|p| p.b).collect();
        assert_eq!(axis, vec![0.1, 0.55, 1.0]);
    }

    #[test]
    fn invalid_steps_are_rejected() {
        assert!(matches!(
            enumerate_weight_grid(0.0f64),
            Err(Error::InvalidStep(_))
        ));
        assert!(matches!(
            enumerate_weight_grid(-0.1f64),
            Err(Error::InvalidStep(_))
        ));
        assert!(matches!(
            enumerate_weight_grid(1.01f64),
            Err(Error::InvalidStep(_))
        ));
    }

    #[test]
    fn production_pair_matches_the_published_constants() {
        let w = production_weights::<f64>();
        assert_eq!((w.a, w.b), (0.7641, 0.7436));
    }

    #[test]
    fn centroid_is_the_component_mean() {
        let mid = centroid_of_weights(&[WeightPair::new(0.0f64, 0.0), WeightPair::new(1.0, 1.0)])
            .unwrap();
        assert_eq!((mid.a, mid.b), (0.5, 0.5));

        let tri = centroid_of_weights(&[
            WeightPair::new(0.0f64, 0.0),
            WeightPair::new(1.0, 0.0),
            WeightPair::new(0.0, 1.0),
        ])
        .unwrap();
        assert!((tri.a - 1.0 / 3.0).abs() < 1e-15);
        assert!((tri.b - 1.0 / 3.0).abs() < 1e-15);

        assert!(matches!(
            centroid_of_weights::<f64>(&[]),
            Err(Error::EmptyWeightList)
        ));
    }

    #[test]
    fn zero_pair_on_any_image_is_not_bimodal_and_carries_no_nda() {
        let img = RgbImage::from_raw(8, 8, vec![120; 8 * 8 * 3]);
        let r = evaluate_weight_pair(
            &img,
            WeightPair::new(0.0f64, 0.0),
            &ModalityParams::default(),
            0.5,
        )
        .unwrap();
        assert!(!r.is_bimodal);
        assert_eq!(r.threshold, None);
        assert_eq!(r.nda, None);
    }

    #[test]
    fn csv_rows_use_four_decimal_weights_and_six_decimal_nda() {
        let results = vec![
            WeightSearchResult {
                pair: WeightPair::new(0.1f64, 0.55),
                is_bimodal: true,
                threshold: Some(77),
                nda: Some(0.0432),
            },
            WeightSearchResult {
                pair: WeightPair::new(1.0, 1.0),
                is_bimodal: false,
                threshold: None,
                nda: None,
            },
        ];
        let csv = search_results_to_csv(&results);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "a,b,is_bimodal,threshold,nda");
        assert_eq!(lines[1], "0.1000,0.5500,true,77,0.043200");
        assert_eq!(lines[2], "1.0000,1.0000,false,,");
    }
}
