//! Weighted red/green grayscale transform.

use crate::raster::{GrayImage, RgbImage};
use crate::real::{quantize_u8, rconst};
use crate::weights::WeightPair;
use crate::Real;

/// Unclamped weighted intensity `a·R + b·G` of one pixel.
///
/// The blue channel carries no weight and does not appear. Exposed
/// separately from [`weighted_grayscale`] so the pre-quantization linearity
/// of the transform can be checked directly.
pub fn weighted_intensity<T: Real>(r: u8, g: u8, w: &WeightPair<T>) -> T {
    w.a * rconst::<T>(r as f64) + w.b * rconst::<T>(g as f64)
}

/// Converts a color image to grayscale with `clamp(round(a·R + b·G), 0, 255)`
/// per pixel; blue is discarded.
///
/// Weight sums above 1 are allowed and saturate at 255.
pub fn weighted_grayscale<T: Real>(img: &RgbImage, w: &WeightPair<T>) -> GrayImage {
    let mut out = GrayImage::new(img.width, img.height);
    for (dst, rgb) in out.data.iter_mut().zip(img.data.chunks_exact(3)) {
        *dst = quantize_u8(weighted_intensity(rgb[0], rgb[1], w));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_first_row_weights_ignore_blue() {
        let img = RgbImage::from_raw(1, 1, vec![100, 150, 37]);
        let gray = weighted_grayscale(&img, &WeightPair::new(0.3f64, 1.0));
        assert_eq!(gray.get(0, 0), 180);
    }

    #[test]
    fn zero_weights_blank_the_image() {
        let img = RgbImage::from_raw(1, 2, vec![200, 200, 200, 10, 99, 3]);
        let gray = weighted_grayscale(&img, &WeightPair::new(0.0f64, 0.0));
        assert!(gray.data.iter().all(|&v| v == 0));
    }

    #[test]
    fn bright_pixels_saturate_under_production_weights() {
        // 0.7641·200 + 0.7436·180 = 286.668 clamps to 255.
        let img = RgbImage::from_raw(1, 1, vec![200, 180, 0]);
        let gray = weighted_grayscale(&img, &WeightPair::new(0.7641f64, 0.7436));
        assert_eq!(gray.get(0, 0), 255);
    }

    #[test]
    fn production_weights_round_midrange_up() {
        // 0.7641·100 + 0.7436·100 = 150.77 rounds to 151.
        let img = RgbImage::from_raw(1, 1, vec![100, 100, 0]);
        let gray = weighted_grayscale(&img, &WeightPair::new(0.7641f64, 0.7436));
        assert_eq!(gray.get(0, 0), 151);
    }

    #[test]
    fn intensity_is_linear_in_the_weights_before_quantization() {
        let (r, g) = (113, 87);
        let w1 = WeightPair::new(0.32f64, 0.55);
        let w2 = WeightPair::new(0.41f64, 0.17);
        let combined = WeightPair::new(w1.a + w2.a, w1.b + w2.b);
        let lhs = weighted_intensity(r, g, &combined);
        let rhs = weighted_intensity(r, g, &w1) + weighted_intensity(r, g, &w2);
        assert!((lhs - rhs).abs() < 1e-9);
    }
}
