//! Bilinear image resizing with pixel-center coordinate alignment.

use crate::error::{Error, Result};
use crate::raster::RgbImage;

/// Resizes an RGB image to the given dimensions by bilinear interpolation.
///
/// Output pixel centers map to source coordinates via
/// `src = (dst + 0.5) * (src_dim / dst_dim) - 0.5`; samples are clamped to
/// the image border, interpolated per channel in `f64`, and rounded half
/// away from zero.
pub fn resize_bilinear(img: &RgbImage, new_width: u32, new_height: u32) -> Result<RgbImage> {
    if new_width == 0 || new_height == 0 {
        return Err(Error::ZeroTargetDimension);
    }
    if new_width == img.width && new_height == img.height {
        return Ok(img.clone());
    }

    let src_w = img.width as usize;
    let scale_x = img.width as f64 / new_width as f64;
    let scale_y = img.height as f64 / new_height as f64;
    let mut out = RgbImage::new(new_width, new_height);

    for dy in 0..new_height {
        let sy = ((dy as f64 + 0.5) * scale_y - 0.5).clamp(0.0, (img.height - 1) as f64);
        let y0 = sy.floor() as usize;
        let y1 = (y0 + 1).min(img.height as usize - 1);
        let fy = sy - y0 as f64;
        for dx in 0..new_width {
            let sx = ((dx as f64 + 0.5) * scale_x - 0.5).clamp(0.0, (img.width - 1) as f64);
            let x0 = sx.floor() as usize;
            let x1 = (x0 + 1).min(img.width as usize - 1);
            let fx = sx - x0 as f64;
            let mut rgb = [0u8; 3];
            for (c, slot) in rgb.iter_mut().enumerate() {
                let at = |x: usize, y: usize| img.data[3 * (y * src_w + x) + c] as f64;
                let top = at(x0, y0) + (at(x1, y0) - at(x0, y0)) * fx;
                let bottom = at(x0, y1) + (at(x1, y1) - at(x0, y1)) * fx;
                let value = top + (bottom - top) * fy;
                *slot = crate::real::quantize_u8(value);
            }
            out.set(dx, dy, (rgb[0], rgb[1], rgb[2]));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_resize_is_pixel_identical() {
        let mut img = RgbImage::new(3, 2);
        img.set(1, 1, (10, 200, 30));
        img.set(2, 0, (1, 2, 3));
        assert_eq!(resize_bilinear(&img, 3, 2).unwrap(), img);
    }

    #[test]
    fn two_by_two_step_downsamples_to_rounded_average() {
        // Top row 0, bottom row 255; the single output sample sits at the
        // image center, averaging all four pixels: (0+0+255+255)/4 = 127.5,
        // which rounds half away from zero to 128.
        let img = RgbImage::from_raw(
            2,
            2,
            vec![0, 0, 0, 0, 0, 0, 255, 255, 255, 255, 255, 255],
        );
        let out = resize_bilinear(&img, 1, 1).unwrap();
        assert_eq!(out.get(0, 0), (128, 128, 128));
    }

    #[test]
    fn constant_image_stays_constant_at_acquisition_geometry() {
        let img = RgbImage::from_raw(1600, 1200, vec![77; 3 * 1600 * 1200]);
        let out = resize_bilinear(&img, 1000, 750).unwrap();
        assert_eq!(out.width, 1000);
        assert_eq!(out.height, 750);
        assert!(out.data.iter().all(|&v| v == 77));
    }

    #[test]
    fn zero_target_dimension_is_rejected() {
        let img = RgbImage::new(4, 4);
        assert!(matches!(
            resize_bilinear(&img, 0, 4),
            Err(Error::ZeroTargetDimension)
        ));
        assert!(matches!(
            resize_bilinear(&img, 4, 0),
            Err(Error::ZeroTargetDimension)
        ));
    }

    #[test]
    fn upsampling_interpolates_between_neighbors() {
        // 1×2 image [0, 100] upsampled to 1×4: samples at source rows
        // -0.25, 0.25, 0.75, 1.25 clamp/lerp to 0, 25, 75, 100.
        let img = RgbImage::from_raw(1, 2, vec![0, 0, 0, 100, 100, 100]);
        let out = resize_bilinear(&img, 1, 4).unwrap();
        let values: Vec<u8> = (0..4).map(|y| out.get(0, y).0).collect();
        assert_eq!(values, vec![0, 25, 75, 100]);
    }
}
