//! Gaussian low-pass filtering of grayscale images.

use crate::error::{Error, Result};
use crate::raster::GrayImage;
use crate::real::{quantize_u8, rconst};
use crate::Real;

fn kernel_half_width(sigma: f64) -> usize {
    // One tap per standard-deviation step out to 3σ, excluding the center:
    // size = 2·ceil(3σ) − 1 taps per axis (3×3 at σ = 0.5, 5×5 at σ = 1).
    ((3.0 * sigma).ceil() as usize).saturating_sub(1).max(1)
}

/// Builds the normalized 1-D Gaussian kernel for the given standard
/// deviation. Taps cover `[-h, h]` with `h = ceil(3σ) − 1` (at least 1),
/// and the kernel sums to 1.
pub fn gaussian_kernel_1d<T: Real>(sigma: T) -> Result<Vec<T>> {
    let sigma_f = sigma.to_f64().unwrap_or(f64::NAN);
    if !(sigma_f > 0.0) {
        return Err(Error::NonPositiveSigma(sigma_f));
    }
    let half = kernel_half_width(sigma_f) as i64;
    let two = rconst::<T>(2.0);
    let mut taps = Vec::with_capacity(2 * half as usize + 1);
    for i in -half..=half {
        let x = rconst::<T>(i as f64);
        taps.push((-(x * x) / (two * sigma * sigma)).exp());
    }
    let sum: T = taps.iter().copied().sum();
    for t in &mut taps {
        *t = *t / sum;
    }
    Ok(taps)
}

/// Builds the normalized 2-D Gaussian kernel as the outer product of the
/// 1-D kernel with itself, in row-major order.
pub fn gaussian_kernel_2d<T: Real>(sigma: T) -> Result<Vec<Vec<T>>> {
    let k = gaussian_kernel_1d(sigma)?;
    Ok(k.iter().map(|&ky| k.iter().map(|&kx| ky * kx).collect()).collect())
}

/// Applies a Gaussian low-pass filter.
///
/// The convolution runs as two separable 1-D passes with floating-point
/// intermediates; borders are handled by edge replication and the result is
/// rounded half away from zero once, at the end.
pub fn gaussian_lowpass<T: Real>(img: &GrayImage, sigma: T) -> Result<GrayImage> {
    let kernel = gaussian_kernel_1d(sigma)?;
    let half = (kernel.len() / 2) as i64;
    let (w, h) = (img.width as i64, img.height as i64);

    // Horizontal pass, unquantized.
    let mut rows: Vec<T> = vec![T::zero(); (w * h) as usize];
    for y in 0..h {
        for x in 0..w {
            let mut acc = T::zero();
            for (i, &k) in kernel.iter().enumerate() {
                let sx = (x + i as i64 - half).clamp(0, w - 1);
                acc = acc + k * rconst::<T>(img.data[(y * w + sx) as usize] as f64);
            }
            rows[(y * w + x) as usize] = acc;
        }
    }

    // Vertical pass, quantized once.
    let mut out = GrayImage::new(img.width, img.height);
    for y in 0..h {
        for x in 0..w {
            let mut acc = T::zero();
            for (i, &k) in kernel.iter().enumerate() {
                let sy = (y + i as i64 - half).clamp(0, h - 1);
                acc = acc + k * rows[(sy * w + x) as usize];
            }
            out.data[(y * w + x) as usize] = quantize_u8(acc);
        }
    }
    Ok(out)
}
