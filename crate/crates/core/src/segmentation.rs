//! Histogram thresholding and edge detection: Otsu's method, threshold
//! application, histogram modality analysis, valley detection, and the
//! Roberts-cross edge baseline.

use crate::error::{Error, Result};
use crate::raster::{BinaryMask, GrayImage, Histogram};
use crate::real::rconst;
use crate::Real;

/// Default histogram smoothing window for modality analysis.
pub const DEFAULT_SMOOTHING_WINDOW: usize = 9;
/// Default peak prominence as a fraction of the smoothed maximum.
pub const DEFAULT_PEAK_PROMINENCE: f64 = 0.05;

/// Otsu threshold plus the criterion value it maximizes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdResult<T = f64> {
    /// Selected gray level; foreground is every level `<=` this.
    pub threshold: u8,
    /// Maximized between-class variance `ω₀·ω₁·(μ₀ − μ₁)²`.
    pub criterion_value: T,
}

/// Peaks found in a smoothed histogram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModalityReport {
    /// Gray levels of the detected peaks, ascending.
    pub peak_levels: Vec<u8>,
    /// Number of detected peaks.
    pub peak_count: usize,
    /// True exactly when two peaks were found.
    pub is_bimodal: bool,
}

/// Selects the threshold maximizing between-class variance.
///
/// Class 0 (foreground, dark) is all levels `<= t`. Candidate thresholds are
/// those whose class 0 is non-empty; the criterion is 0 when class 1 is
/// empty. Among thresholds attaining the maximum, the smallest wins.
pub fn otsu_threshold<T: Real>(h: &Histogram) -> Result<ThresholdResult<T>> {
    let total = h.total();
    if total == 0 {
        return Err(Error::EmptyHistogram);
    }
    let sum_all: u64 = h
        .counts
        .iter()
        .enumerate()
        .map(|(level, &c)| level as u64 * c)
        .sum();

    let total_t = rconst::<T>(total as f64);
    let mut count0: u64 = 0;
    let mut sum0: u64 = 0;
    let mut best: Option<(u8, T)> = None;
    for t in 0..=255usize {
        count0 += h.counts[t];
        sum0 += t as u64 * h.counts[t];
        if count0 == 0 {
            continue;
        }
        let count1 = total - count0;
        let criterion = if count1 == 0 {
            T::zero()
        } else {
            let mu0 = rconst::<T>(sum0 as f64) / rconst::<T>(count0 as f64);
            let mu1 =
                rconst::<T>((sum_all - sum0) as f64) / rconst::<T>(count1 as f64);
            let w0 = rconst::<T>(count0 as f64) / total_t;
            let w1 = rconst::<T>(count1 as f64) / total_t;
            let d = mu0 - mu1;
            w0 * w1 * d * d
        };
        if best.map_or(true, |(_, b)| criterion > b) {
            best = Some((t as u8, criterion));
        }
    }
    let (threshold, criterion_value) = best.expect("histogram has mass");
    Ok(ThresholdResult {
        threshold,
        criterion_value,
    })
}

/// Marks every pixel with value `<= t` as foreground (defects are dark).
pub fn apply_threshold(img: &GrayImage, t: u8) -> BinaryMask {
    let mut mask = BinaryMask::new(img.width, img.height);
    for (m, &v) in mask.data.iter_mut().zip(img.data.iter()) {
        *m = u8::from(v <= t);
    }
    mask
}

/// Centered moving average of the histogram counts with a truncated window:
/// near the ends of the level range the divisor is the number of in-range
/// bins, not the full window.
fn smoothed_counts<T: Real>(h: &Histogram, window: usize) -> Vec<T> {
    let radius = (window / 2) as i64;
    (0..256i64)
        .map(|i| {
            let lo = (i - radius).max(0) as usize;
            let hi = ((i + radius) as usize).min(255);
            let sum: u64 = h.counts[lo..=hi].iter().sum();
            rconst::<T>(sum as f64) / rconst::<T>((hi - lo + 1) as f64)
        })
        .collect()
}

/// Finds the prominent peaks of a histogram.
///
/// Counts are smoothed with a centered moving average of `smoothing_window`
/// bins; a bin is a peak candidate when its smoothed value is maximal within
/// the window around it and exceeds `prominence` times the smoothed maximum.
/// Runs of consecutive candidates collapse to one peak at the run midpoint.
pub fn modality<T: Real>(
    h: &Histogram,
    smoothing_window: usize,
    prominence: T,
) -> Result<ModalityReport> {
    if smoothing_window == 0 || smoothing_window % 2 == 0 {
        return Err(Error::InvalidWindow(smoothing_window));
    }
    let prom_f = prominence.to_f64().unwrap_or(f64::NAN);
    if !(0.0..=1.0).contains(&prom_f) {
        return Err(Error::InvalidProminence(prom_f));
    }

    let smoothed = smoothed_counts::<T>(h, smoothing_window);
    let max = smoothed.iter().copied().fold(T::zero(), T::max);
    let cutoff = prominence * max;
    let radius = (smoothing_window / 2) as i64;
    let candidate = |i: i64| -> bool {
        let lo = (i - radius).max(0) as usize;
        let hi = ((i + radius) as usize).min(255);
        let v = smoothed[i as usize];
        v > cutoff && smoothed[lo..=hi].iter().all(|&n| v >= n)
    };

    let mut peak_levels = Vec::new();
    let mut run_start: Option<usize> = None;
    for i in 0..=256i64 {
        if i < 256 && candidate(i) {
            run_start.get_or_insert(i as usize);
        } else if let Some(start) = run_start.take() {
            peak_levels.push(((start + (i as usize - 1)) / 2) as u8);
        }
    }
    let peak_count = peak_levels.len();
    Ok(ModalityReport {
        peak_levels,
        peak_count,
        is_bimodal: peak_count == 2,
    })
}

/// Returns the level of the minimum smoothed count strictly between the two
/// histogram peaks, breaking ties toward the lower level.
///
/// The histogram must be bimodal under [`modality`] with the same window and
/// the default prominence.
pub fn valley_threshold<T: Real>(h: &Histogram, smoothing_window: usize) -> Result<u8> {
    let report = modality::<T>(h, smoothing_window, rconst(DEFAULT_PEAK_PROMINENCE))?;
    if !report.is_bimodal {
        return Err(Error::NotBimodal {
            peaks: report.peak_count,
        });
    }
    let (lo, hi) = (report.peak_levels[0] as usize, report.peak_levels[1] as usize);
    let smoothed = smoothed_counts::<T>(h, smoothing_window);
    let mut best = lo + 1;
    for level in lo + 1..hi {
        if smoothed[level] < smoothed[best] {
            best = level;
        }
    }
    Ok(best as u8)
}

/// Roberts cross-gradient edge detector.
///
/// The magnitude at `(x, y)` is `|I(x,y) − I(x+1,y+1)| + |I(x+1,y) − I(x,y+1)|`;
/// pixels in the last row and column, where the 2×2 stencil does not fit,
/// have magnitude 0. The mask marks pixels whose magnitude strictly exceeds
/// `edge_threshold`.
pub fn roberts_edges(img: &GrayImage, edge_threshold: u16) -> BinaryMask {
    let mut mask = BinaryMask::new(img.width, img.height);
    if img.width < 2 || img.height < 2 {
        return mask;
    }
    let w = img.width as usize;
    for y in 0..img.height as usize - 1 {
        for x in 0..w - 1 {
            let p = |xx: usize, yy: usize| img.data[yy * w + xx] as i32;
            let d1 = p(x, y) - p(x + 1, y + 1);
            let d2 = p(x + 1, y) - p(x, y + 1);
            let magnitude = (d1.abs() + d2.abs()) as u16;
            mask.data[y * w + x] = u8::from(magnitude > edge_threshold);
        }
    }
    mask
}
