//! Image file input/output.
//!
//! Supported on disk: 8-bit PNG, binary PPM (P6), and binary PGM (P5).
//! Binary masks travel as 8-bit grayscale PNGs holding only 0 and 255.

use std::fs;
use std::path::Path;

use image::{DynamicImage, ImageFormat};

use crate::error::{io_err, Error, Result};
use crate::raster::{BinaryMask, GrayImage, RgbImage};

fn map_image_err(path: &Path, err: image::ImageError) -> Error {
    match err {
        image::ImageError::IoError(e) => io_err(path, e),
        image::ImageError::Unsupported(e) => Error::UnsupportedFormat(e.to_string()),
        other => Error::CorruptData(other.to_string()),
    }
}

/// Loads an 8-bit image as RGB.
///
/// Grayscale inputs are replicated across the three channels; an alpha
/// channel, if present, is dropped. Higher bit depths are rejected.
pub fn load_image(path: impl AsRef<Path>) -> Result<RgbImage> {
    let path = path.as_ref();
    let dynamic = image::open(path).map_err(|e| map_image_err(path, e))?;
    let rgb = match dynamic {
        DynamicImage::ImageRgb8(img) => img,
        DynamicImage::ImageRgba8(img) => DynamicImage::ImageRgba8(img).to_rgb8(),
        DynamicImage::ImageLuma8(img) => DynamicImage::ImageLuma8(img).to_rgb8(),
        DynamicImage::ImageLumaA8(img) => DynamicImage::ImageLumaA8(img).to_rgb8(),
        other => {
            return Err(Error::UnsupportedFormat(format!(
                "only 8-bit images are supported, got {:?}",
                other.color()
            )))
        }
    };
    let (width, height) = (rgb.width(), rgb.height());
    Ok(RgbImage::from_raw(width, height, rgb.into_raw()))
}

/// Saves an RGB image; the format is chosen by extension
/// (`.png` or `.ppm`).
pub fn save_rgb(path: impl AsRef<Path>, image: &RgbImage) -> Result<()> {
    let path = path.as_ref();
    match extension(path)? {
        "png" => image::save_buffer_with_format(
            path,
            &image.data,
            image.width,
            image.height,
            image::ExtendedColorType::Rgb8,
            ImageFormat::Png,
        )
        .map_err(|e| map_image_err(path, e)),
        "ppm" => {
            let mut bytes =
                format!("P6\n{} {}\n255\n", image.width, image.height).into_bytes();
            bytes.extend_from_slice(&image.data);
            fs::write(path, bytes).map_err(|e| io_err(path, e))
        }
        other => Err(Error::UnsupportedFormat(format!(
            "cannot save RGB image as .{other}"
        ))),
    }
}

/// Saves a grayscale image; the format is chosen by extension
/// (`.png` or `.pgm`).
pub fn save_gray(path: impl AsRef<Path>, image: &GrayImage) -> Result<()> {
    let path = path.as_ref();
    match extension(path)? {
        "png" => image::save_buffer_with_format(
            path,
            &image.data,
            image.width,
            image.height,
            image::ExtendedColorType::L8,
            ImageFormat::Png,
        )
        .map_err(|e| map_image_err(path, e)),
        "pgm" => {
            let mut bytes =
                format!("P5\n{} {}\n255\n", image.width, image.height).into_bytes();
            bytes.extend_from_slice(&image.data);
            fs::write(path, bytes).map_err(|e| io_err(path, e))
        }
        other => Err(Error::UnsupportedFormat(format!(
            "cannot save grayscale image as .{other}"
        ))),
    }
}

/// Saves a binary mask as an 8-bit grayscale PNG with foreground = 255,
/// background = 0.
pub fn save_mask(path: impl AsRef<Path>, mask: &BinaryMask) -> Result<()> {
    let bytes: Vec<u8> = mask.data.iter().map(|&v| v * 255).collect();
    save_gray(
        path,
        &GrayImage::from_raw(mask.width, mask.height, bytes),
    )
}

/// Loads a binary mask saved by [`save_mask`].
///
/// Every pixel must be exactly 0 or 255.
pub fn load_mask(path: impl AsRef<Path>) -> Result<BinaryMask> {
    let path = path.as_ref();
    let dynamic = image::open(path).map_err(|e| map_image_err(path, e))?;
    let gray = match dynamic {
        DynamicImage::ImageLuma8(img) => img,
        other => {
            return Err(Error::UnsupportedFormat(format!(
                "masks must be 8-bit grayscale, got {:?}",
                other.color()
            )))
        }
    };
    let (width, height) = (gray.width(), gray.height());
    let mut data = gray.into_raw();
    for v in &mut data {
        *v = match *v {
            0 => 0,
            255 => 1,
            other => {
                return Err(Error::CorruptData(format!(
                    "mask pixels must be 0 or 255, found {other}"
                )))
            }
        };
    }
    Ok(BinaryMask::from_raw(width, height, data))
}

fn extension(path: &Path) -> Result<&str> {
    path.extension()
        .and_then(|e| e.to_str())
        .ok_or_else(|| {
            Error::UnsupportedFormat(format!("path {} has no extension", path.display()))
        })
}
