//! Reference filters to compare against: the plain 3×3 median (SMF) and the
//! classic two-level adaptive median (AMF).

use crate::error::{Error, Result};
use crate::image::{GrayImage, Window3};
use crate::par;

/// Median of the nine window values.
#[inline]
pub fn median9(win: &Window3) -> u8 {
    let mut v = win.values;
    v.sort_unstable();
    v[4]
}

/// Standard median filter: every pixel becomes its 3×3 window median.
pub fn smf(img: &GrayImage) -> GrayImage {
    img.map_windows(median9)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AmfConfig {
    max_window: usize,
}

impl Default for AmfConfig {
    fn default() -> Self {
        Self { max_window: 39 }
    }
}

impl AmfConfig {
    /// `max_window` must be odd and at least 3.
    pub fn new(max_window: usize) -> Result<Self> {
        if max_window < 3 || max_window.is_multiple_of(2) {
            return Err(Error::InvalidConfig(format!(
                "AMF max window must be odd and >= 3, got {max_window}"
            )));
        }
        Ok(Self { max_window })
    }

    pub fn max_window(&self) -> usize {
        self.max_window
    }
}

/// Adaptive median filter.
///
/// Level A grows the square window (3, 5, 7, ...) until its median lies
/// strictly between the window minimum and maximum. Level B then keeps the
/// center if it is also strictly inside that range and outputs the median
/// otherwise. If no window up to `max_window` qualifies, the median of the
/// largest window is used. All windows read the input image with
/// replicate-edge padding.
pub fn amf(img: &GrayImage, cfg: &AmfConfig) -> GrayImage {
    let (w, h) = img.dimensions();
    let max_r = cfg.max_window / 2;
    let mut out = vec![0u8; img.len()];
    par::for_each_row(&mut out, w, |y, row| {
        let mut buf = Vec::with_capacity(cfg.max_window * cfg.max_window);
        for (x, px) in row.iter_mut().enumerate() {
            *px = amf_pixel(img, x, y, max_r, &mut buf);
        }
    });
    GrayImage::new(w, h, out).expect("same dimensions as input")
}

#[inline]
fn clamped(img: &GrayImage, x: isize, y: isize) -> u8 {
    let cx = x.clamp(0, img.width() as isize - 1) as usize;
    let cy = y.clamp(0, img.height() as isize - 1) as usize;
    img.pixels()[cy * img.width() + cx]
}

fn amf_pixel(img: &GrayImage, x: usize, y: usize, max_r: usize, buf: &mut Vec<u8>) -> u8 {
    let (xi, yi) = (x as isize, y as isize);
    let center = img.pixels()[y * img.width() + x];
    buf.clear();
    buf.push(center);
    let (mut lo, mut hi) = (center, center);
    let mut med = center;
    for r in 1..=max_r as isize {
        // Add the ring at Chebyshev distance r.
        for dx in -r..=r {
            for dy in [-r, r] {
                buf.push(clamped(img, xi + dx, yi + dy));
            }
        }
        for dy in -r + 1..r {
            for dx in [-r, r] {
                buf.push(clamped(img, xi + dx, yi + dy));
            }
        }
        for &v in &buf[buf.len() - 8 * r as usize..] {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        let mid = buf.len() / 2;
        med = *buf.select_nth_unstable(mid).1;
        if lo < med && med < hi {
            return if lo < center && center < hi {
                center
            } else {
                med
            };
        }
    }
    med
}
