//! Seeded salt-and-pepper injection.
//!
//! Randomness comes from SplitMix64, fully specified here so that other
//! implementations can reproduce a corruption exactly:
//!
//! ```text
//! GAMMA   = 0x9E3779B97F4A7C15
//! state_k = seed + (k + 1) * GAMMA            (wrapping, k = 0, 1, 2, ...)
//! z = state_k
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9    (wrapping)
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB    (wrapping)
//! draw_k = z ^ (z >> 31)
//! u_k    = (draw_k >> 11) * 2^-53             (uniform in [0, 1))
//! ```
//!
//! Pixel `i` in raster order consumes draws `2i` and `2i + 1`: it is
//! corrupted iff `u_2i < density`, and a corrupted pixel becomes salt (255)
//! iff `u_{2i+1} < salt_fraction`, pepper (0) otherwise. Both draws are
//! consumed for every pixel, so the stream layout does not depend on the
//! image content and pixels can be generated in any order.

use crate::error::{Error, Result};
use crate::image::{GrayImage, NoiseMask, PEPPER, SALT};
use crate::par;

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output generator.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        mix(self.state)
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        to_unit(self.next_u64())
    }

    /// The `k`-th output (0-based) of a generator seeded with `seed`,
    /// without stepping through the earlier ones.
    #[inline]
    pub fn nth(seed: u64, k: u64) -> u64 {
        mix(seed.wrapping_add(k.wrapping_add(1).wrapping_mul(GAMMA)))
    }
}

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[inline]
fn to_unit(v: u64) -> f64 {
    (v >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Parameters of a salt-and-pepper corruption.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    density: f64,
    salt_fraction: f64,
    seed: u64,
}

impl NoiseSpec {
    /// Equal salt and pepper probability.
    pub fn new(density: f64, seed: u64) -> Result<Self> {
        Self::with_salt_fraction(density, 0.5, seed)
    }

    pub fn with_salt_fraction(density: f64, salt_fraction: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&density) {
            return Err(Error::InvalidConfig(format!(
                "noise density {density} outside [0, 1]"
            )));
        }
        if !(0.0..=1.0).contains(&salt_fraction) {
            return Err(Error::InvalidConfig(format!(
                "salt fraction {salt_fraction} outside [0, 1]"
            )));
        }
        Ok(Self {
            density,
            salt_fraction,
            seed,
        })
    }

    pub fn density(&self) -> f64 {
        self.density
    }

    pub fn salt_fraction(&self) -> f64 {
        self.salt_fraction
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Replacement for pixel `index` in raster order, if it is corrupted.
    #[inline]
    pub fn sample(&self, index: usize) -> Option<u8> {
        let k = 2 * index as u64;
        if to_unit(SplitMix64::nth(self.seed, k)) < self.density {
            if to_unit(SplitMix64::nth(self.seed, k + 1)) < self.salt_fraction {
                Some(SALT)
            } else {
                Some(PEPPER)
            }
        } else {
            None
        }
    }
}

/// Corrupts `img` according to `spec` and returns the corrupted image with
/// the ground-truth mask of overwritten pixels.
pub fn inject(img: &GrayImage, spec: &NoiseSpec) -> (GrayImage, NoiseMask) {
    let (w, h) = img.dimensions();
    let mut samples: Vec<Option<u8>> = vec![None; img.len()];
    par::for_each_chunk(&mut samples, w, |y, row| {
        for (x, s) in row.iter_mut().enumerate() {
            *s = spec.sample(y * w + x);
        }
    });

    let pixels = img
        .pixels()
        .iter()
        .zip(&samples)
        .map(|(&p, s)| s.unwrap_or(p))
        .collect();
    let flags = samples.iter().map(Option::is_some).collect();
    (
        GrayImage::new(w, h, pixels).expect("dimensions come from a valid image"),
        NoiseMask::from_flags(w, h, flags).expect("mask sized to image"),
    )
}
