//! Directional smoothing of the restored image, gated on the noisy input's
//! standard deviation.
//!
//! The 3×3 mask is labelled `x1..x9` in row-major order with `x5` at the
//! center. Each corner triple picks the pair with the smallest absolute
//! difference and averages it; the output is the mean of the four picks.
//!
//! ```text
//! x1 x2 x3     Y1 = {x1, x2, x4}    Y2 = {x2, x3, x6}
//! x4 x5 x6     Y3 = {x4, x7, x8}    Y4 = {x6, x8, x9}
//! x7 x8 x9
//! ```

use std::fmt;
use std::str::FromStr;

use crate::error::{check_dims, Error, Result};
use crate::image::{GrayImage, Window3};

/// Default standard-deviation gate.
pub const DEFAULT_SIGMA_THRESHOLD: f64 = 75.0;

/// Corner triples `(p, q, r)` as window indices.
const GROUPS: [[usize; 3]; 4] = [[0, 1, 3], [1, 2, 5], [3, 6, 7], [5, 7, 8]];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum EnhanceMode {
    /// Filter only when the noisy image's standard deviation exceeds the threshold.
    #[default]
    Auto,
    On,
    Off,
}

impl fmt::Display for EnhanceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EnhanceMode::Auto => "auto",
            EnhanceMode::On => "on",
            EnhanceMode::Off => "off",
        })
    }
}

impl FromStr for EnhanceMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(EnhanceMode::Auto),
            "on" => Ok(EnhanceMode::On),
            "off" => Ok(EnhanceMode::Off),
            other => Err(Error::InvalidConfig(format!(
                "unknown enhance mode {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnhanceConfig {
    pub sigma_threshold: f64,
    pub mode: EnhanceMode,
}

impl Default for EnhanceConfig {
    fn default() -> Self {
        Self {
            sigma_threshold: DEFAULT_SIGMA_THRESHOLD,
            mode: EnhanceMode::Auto,
        }
    }
}

impl EnhanceConfig {
    pub fn new(sigma_threshold: f64, mode: EnhanceMode) -> Result<Self> {
        let cfg = Self {
            sigma_threshold,
            mode,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.sigma_threshold >= 0.0 {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!(
                "sigma threshold must be nonnegative, got {}",
                self.sigma_threshold
            )))
        }
    }

    /// Whether filtering runs for a noisy image with this standard deviation.
    pub fn gate_open(&self, noisy_sigma: f64) -> bool {
        match self.mode {
            EnhanceMode::On => true,
            EnhanceMode::Off => false,
            EnhanceMode::Auto => noisy_sigma > self.sigma_threshold,
        }
    }
}

/// Population standard deviation of all pixels.
///
/// The moments are accumulated in integers, so the only rounding happens in
/// the final division and square root.
pub fn std_dev(img: &GrayImage) -> f64 {
    let n = img.len() as u128;
    let (sum, sum_sq) = img.pixels().iter().fold((0u128, 0u128), |(s, q), &v| {
        let v = u128::from(v);
        (s + v, q + v * v)
    });
    // n^2 * var = n * sum_sq - sum^2, exact and nonnegative.
    let scaled = n * sum_sq - sum * sum;
    (scaled as f64).sqrt() / n as f64
}

/// Sum of the selected pair of one corner triple (twice its average).
#[inline]
fn group_pair_sum(v: &[u8; 9], [p, q, r]: [usize; 3]) -> u16 {
    let (p, q, r) = (v[p], v[q], v[r]);
    let d1 = p.abs_diff(q);
    let d2 = p.abs_diff(r);
    let d3 = r.abs_diff(q);
    let (a, b) = if d1 <= d2 && d1 <= d3 {
        (p, q)
    } else if d2 <= d3 {
        (p, r)
    } else {
        (r, q)
    };
    u16::from(a) + u16::from(b)
}

/// Directionally smoothed value for the center of `win`.
///
/// Pair averages are kept exact; only the final mean of the four is rounded,
/// halves up.
pub fn directional_pixel(win: &Window3) -> u8 {
    let total: u16 = GROUPS.iter().map(|&g| group_pair_sum(&win.values, g)).sum();
    ((total + 4) / 8) as u8
}

/// Applies directional filtering to every pixel of `restored` when the gate
/// opens for `noisy`; otherwise returns `restored` unchanged.
pub fn enhance(restored: &GrayImage, noisy: &GrayImage, cfg: &EnhanceConfig) -> Result<GrayImage> {
    check_dims(restored.dimensions(), noisy.dimensions())?;
    cfg.validate()?;
    let open = match cfg.mode {
        EnhanceMode::Auto => cfg.gate_open(std_dev(noisy)),
        m => m == EnhanceMode::On,
    };
    Ok(if open {
        restored.map_windows(directional_pixel)
    } else {
        restored.clone()
    })
}
