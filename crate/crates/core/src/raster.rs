//! In-memory raster types: RGB and grayscale images, binary masks, and
//! 8-bit intensity histograms.

use crate::error::{Error, Result};

/// 8-bit RGB image stored row-major with interleaved channels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    /// Width in pixels.
    pub width: u32,
    /// Height in pixels.
    pub height: u32,
    /// Pixel data, `3 * width * height` bytes, R G B per pixel.
    pub data: Vec<u8>,
}

impl RgbImage {
    /// Creates a black image of the given size.
    pub fn new(width: u32, height: u32) -> Self {
        Self {
            width,
            height,
            data: vec![0; 3 * width as usize * height as usize],
        }
    }

    /// Wraps an existing interleaved buffer.
    ///
    /// The buffer length must be exactly `3 * width * height`.
    pub fn from_raw(width: u32, height: u32, data: Vec<u8>) -> Self {
        assert_eq!(
            data.len(),
            3 * width as usize * height as usize,
            "RGB buffer length must be 3 * width * height"
        );
        Self {
            width,
            height,
            data,
        }
    }

    /// Returns the `(r, g, b)` triple at `(x, y)`.
    #[inline]
    pub fn get(&self, x: u32, y: u32) -> (u8, u8, u8) {
        debug_assert!(x < self.width && y < self.height);
        let i = 3 * (y as usize * self.width as usize + x as usize);
        (self.data[i], self.data[i + 1], self.data[i + 2])
    }

    /// Writes the `(r, g, b)` triple at `(x, y)`.
    #[inline]
    pub fn set(&mut self, x: u32, y: u32, rgb: (u8, u8, u8)) {
        debug_assert!(x < self.width && y < self.height);
        let i = 3 * (y as usize * self.width as usize + x as usize);
        self.data[i] = rgb.0;
        self.data[i + 1] = rgb.1;
        self.data[i + 2] = rgb.2;
    }
}

/// 8-bit single-channel image stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    /// Width in pixels.
    pub width: u32,
    /// Height in pixels.
    pub height: u32,
    /// Pixel data, `width * height` bytes.
    pub data: Vec<u8>,
}

impl GrayImage {
    /// Creates a black image of the given size.
    pub fn new(width: u32, height: u32) -> Self {
        Self {
            width,
            height,
            data: vec![0; width as usize * height as usize],
        }
    }

    /// Wraps an existing buffer of length `width * height`.
    pub fn from_raw(width: u32, height: u32, data: Vec<u8>) -> Self {
        assert_eq!(
            data.len(),
            width as usize * height as usize,
            "gray buffer length must be width * height"
        );
        Self {
            width,
            height,
            data,
        }
    }

    /// Returns the intensity at `(x, y)`.
    #[inline]
    pub fn get(&self, x: u32, y: u32) -> u8 {
        debug_assert!(x < self.width && y < self.height);
        self.data[y as usize * self.width as usize + x as usize]
    }

    /// Writes the intensity at `(x, y)`.
    #[inline]
    pub fn set(&mut self, x: u32, y: u32, v: u8) {
        debug_assert!(x < self.width && y < self.height);
        self.data[y as usize * self.width as usize + x as usize] = v;
    }
}

/// Binary mask with one byte per pixel, restricted to values 0 and 1.
///
/// Value 1 marks foreground (dark / defect) pixels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMask {
    /// Width in pixels.
    pub width: u32,
    /// Height in pixels.
    pub height: u32,
    /// Mask data, `width * height` bytes of 0 or 1.
    pub data: Vec<u8>,
}

impl BinaryMask {
    /// Creates an all-background mask of the given size.
    pub fn new(width: u32, height: u32) -> Self {
        Self {
            width,
            height,
            data: vec![0; width as usize * height as usize],
        }
    }

    /// Wraps an existing buffer; every byte must be 0 or 1.
    pub fn from_raw(width: u32, height: u32, data: Vec<u8>) -> Self {
        assert_eq!(
            data.len(),
            width as usize * height as usize,
            "mask buffer length must be width * height"
        );
        assert!(
            data.iter().all(|&v| v <= 1),
            "mask values must be 0 or 1"
        );
        Self {
            width,
            height,
            data,
        }
    }

    /// Returns the mask value (0 or 1) at `(x, y)`.
    #[inline]
    pub fn get(&self, x: u32, y: u32) -> u8 {
        debug_assert!(x < self.width && y < self.height);
        self.data[y as usize * self.width as usize + x as usize]
    }

    /// Writes a mask value (must be 0 or 1) at `(x, y)`.
    #[inline]
    pub fn set(&mut self, x: u32, y: u32, v: u8) {
        debug_assert!(v <= 1);
        debug_assert!(x < self.width && y < self.height);
        self.data[y as usize * self.width as usize + x as usize] = v;
    }

    /// Number of foreground pixels.
    pub fn count_ones(&self) -> u64 {
        self.data.iter().map(|&v| v as u64).sum()
    }

    /// Total number of pixels.
    pub fn len(&self) -> u64 {
        self.width as u64 * self.height as u64
    }

    /// True when the mask has zero pixels.
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Intensity histogram over the 256 8-bit levels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    /// `counts[v]` is the number of pixels with intensity `v`.
    pub counts: [u64; 256],
}

impl Histogram {
    /// Creates an empty histogram.
    pub fn new() -> Self {
        Self { counts: [0; 256] }
    }

    /// Builds a histogram directly from level counts.
    pub fn from_counts(counts: [u64; 256]) -> Self {
        Self { counts }
    }

    /// Total pixel count.
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Renders the histogram as CSV with header `level,count` and one row
    /// per level, 0 through 255.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(16 + 256 * 8);
        out.push_str("level,count\n");
        for (level, count) in self.counts.iter().enumerate() {
            out.push_str(&format!("{level},{count}\n"));
        }
        out
    }

    /// Parses the CSV produced by [`Histogram::to_csv`].
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        match lines.next() {
            Some("level,count") => {}
            _ => {
                return Err(Error::CorruptData(
                    "histogram CSV must start with header 'level,count'".into(),
                ))
            }
        }
        let mut counts = [0u64; 256];
        let mut seen = 0usize;
        for line in lines {
            if line.is_empty() {
                continue;
            }
            let (level, count) = line.split_once(',').ok_or_else(|| {
                Error::CorruptData(format!("histogram CSV row without comma: {line:?}"))
            })?;
            let level: usize = level.parse().map_err(|_| {
                Error::CorruptData(format!("bad level in histogram CSV: {level:?}"))
            })?;
            if level > 255 || level != seen {
                return Err(Error::CorruptData(format!(
                    "histogram CSV levels must run 0..=255 in order; got {level}"
                )));
            }
            counts[level] = count.parse().map_err(|_| {
                Error::CorruptData(format!("bad count in histogram CSV: {count:?}"))
            })?;
            seen += 1;
        }
        if seen != 256 {
            return Err(Error::CorruptData(format!(
                "histogram CSV must have 256 rows, got {seen}"
            )));
        }
        Ok(Self { counts })
    }
}

impl Default for Histogram {
    fn default() -> Self {
        Self::new()
    }
}

/// Counts the occurrences of each intensity level in a grayscale image.
pub fn compute_histogram(image: &GrayImage) -> Histogram {
    let mut h = Histogram::new();
    for &v in &image.data {
        h.counts[v as usize] += 1;
    }
    h
}
