//! Grayscale raster, 3×3 neighborhoods and noise masks.
//!
//! Coordinates are `(x, y)` = (column, row) and storage is row-major.
//! Windows reaching past the border replicate the nearest edge pixel.

use crate::error::{check_dims, Error, Result};
use crate::par;

/// Value of a "pepper" impulse.
pub const PEPPER: u8 = 0;
/// Value of a "salt" impulse.
pub const SALT: u8 = 255;

/// True for the two impulse values 0 and 255.
#[inline]
pub fn is_extreme(v: u8) -> bool {
    v == PEPPER || v == SALT
}

/// An 8-bit grayscale image with at least one pixel.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyImage { width, height });
        }
        let expected = width
            .checked_mul(height)
            .ok_or(Error::EmptyImage { width, height })?;
        if pixels.len() != expected {
            return Err(Error::BufferSize {
                width,
                height,
                expected,
                actual: pixels.len(),
            });
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    /// Image with every pixel set to `value`.
    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    /// Image whose pixel at `(x, y)` is `f(x, y)`.
    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> u8,
    ) -> Result<Self> {
        let mut pixels = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        Self::new(width, height, pixels)
    }

    /// Builds from nested rows; all rows must have the same length.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.as_ref().len());
        let mut pixels = Vec::with_capacity(width * height);
        for r in rows {
            pixels.extend_from_slice(r.as_ref());
        }
        Self::new(width, height, pixels)
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn dimensions(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    /// Always false; images are nonempty by construction.
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    /// Row-major pixel buffer.
    #[inline]
    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }

    /// Pixel at column `x`, row `y`. Panics when out of bounds.
    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        assert!(
            x < self.width && y < self.height,
            "pixel ({x}, {y}) out of bounds"
        );
        self.pixels[y * self.width + x]
    }

    pub fn row(&self, y: usize) -> &[u8] {
        &self.pixels[y * self.width..(y + 1) * self.width]
    }

    /// Replicate-padded 3×3 neighborhood of `(x, y)`.
    ///
    /// Panics if `(x, y)` lies outside the image.
    pub fn window_at(&self, x: usize, y: usize) -> Window3 {
        assert!(
            x < self.width && y < self.height,
            "window center ({x}, {y}) outside {}x{} image",
            self.width,
            self.height
        );
        Window3::from_raster(&self.pixels, self.width, self.height, x, y)
    }

    /// Applies `f` to the window of every pixel, reading only `self`.
    pub fn map_windows<F>(&self, f: F) -> GrayImage
    where
        F: Fn(&Window3) -> u8 + Sync + Send,
    {
        let (w, h) = self.dimensions();
        let src = &self.pixels;
        let mut out = vec![0u8; src.len()];
        par::for_each_row(&mut out, w, |y, row| {
            for (x, px) in row.iter_mut().enumerate() {
                *px = f(&Window3::from_raster(src, w, h, x, y));
            }
        });
        GrayImage {
            width: w,
            height: h,
            pixels: out,
        }
    }

    /// Population mean of all pixels.
    pub fn mean(&self) -> f64 {
        let sum: u64 = self.pixels.iter().map(|&v| u64::from(v)).sum();
        sum as f64 / self.len() as f64
    }
}

/// A 3×3 neighborhood in row-major order:
///
/// ```text
/// 0 1 2     up-left   up     up-right
/// 3 4 5  =  left      center right
/// 6 7 8     down-left down   down-right
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Window3 {
    pub values: [u8; 9],
}

impl Window3 {
    /// Index of the center pixel.
    pub const CENTER: usize = 4;
    /// Indices of the four diagonal neighbors.
    pub const DIAGONAL: [usize; 4] = [0, 2, 6, 8];
    /// Indices of the four edge-adjacent neighbors.
    pub const CROSS: [usize; 4] = [1, 3, 5, 7];
    /// Indices of all eight neighbors.
    pub const NEIGHBORS: [usize; 8] = [0, 1, 2, 3, 5, 6, 7, 8];

    pub const fn new(values: [u8; 9]) -> Self {
        Self { values }
    }

    pub fn from_rows(rows: [[u8; 3]; 3]) -> Self {
        let mut values = [0u8; 9];
        for (r, row) in rows.iter().enumerate() {
            values[r * 3..r * 3 + 3].copy_from_slice(row);
        }
        Self { values }
    }

    #[inline]
    pub fn center(&self) -> u8 {
        self.values[Self::CENTER]
    }

    #[inline]
    pub fn min(&self) -> u8 {
        self.values.iter().copied().min().unwrap_or(0)
    }

    #[inline]
    pub fn max(&self) -> u8 {
        self.values.iter().copied().max().unwrap_or(0)
    }

    /// Window around `(x, y)` in a raw raster, clamping coordinates to the
    /// valid range.
    #[inline]
    pub(crate) fn from_raster(buf: &[u8], width: usize, height: usize, x: usize, y: usize) -> Self {
        let xs = [x.saturating_sub(1), x, (x + 1).min(width - 1)];
        let rows = [
            y.saturating_sub(1) * width,
            y * width,
            (y + 1).min(height - 1) * width,
        ];
        let mut values = [0u8; 9];
        for (r, base) in rows.iter().enumerate() {
            for (c, cx) in xs.iter().enumerate() {
                values[r * 3 + c] = buf[base + cx];
            }
        }
        Self { values }
    }
}

/// Per-pixel boolean flags; `true` marks a noise candidate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NoiseMask {
    width: usize,
    height: usize,
    flags: Vec<bool>,
}

impl NoiseMask {
    /// All-false mask.
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            flags: vec![false; width * height],
        }
    }

    pub fn from_flags(width: usize, height: usize, flags: Vec<bool>) -> Result<Self> {
        if flags.len() != width * height {
            return Err(Error::BufferSize {
                width,
                height,
                expected: width * height,
                actual: flags.len(),
            });
        }
        Ok(Self {
            width,
            height,
            flags,
        })
    }

    /// All-false mask shaped like `img`.
    pub fn like(img: &GrayImage) -> Self {
        Self::new(img.width(), img.height())
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn dimensions(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    #[inline]
    pub fn flags(&self) -> &[bool] {
        &self.flags
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        assert!(
            x < self.width && y < self.height,
            "mask ({x}, {y}) out of bounds"
        );
        self.flags[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, flag: bool) {
        assert!(
            x < self.width && y < self.height,
            "mask ({x}, {y}) out of bounds"
        );
        self.flags[y * self.width + x] = flag;
    }

    /// Number of flagged pixels.
    pub fn count(&self) -> usize {
        self.flags.iter().filter(|&&f| f).count()
    }

    /// Fraction of flagged pixels.
    pub fn fraction(&self) -> f64 {
        self.count() as f64 / self.flags.len().max(1) as f64
    }

    /// Renders the mask as an image: 255 for flagged pixels, 0 elsewhere.
    pub fn to_image(&self) -> Result<GrayImage> {
        GrayImage::new(
            self.width,
            self.height,
            self.flags
                .iter()
                .map(|&f| if f { SALT } else { PEPPER })
                .collect(),
        )
    }

    pub(crate) fn check_matches(&self, img: &GrayImage) -> Result<()> {
        check_dims(self.dimensions(), img.dimensions())
    }
}
