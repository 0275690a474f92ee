//! Impulse candidate detection by mean absolute gradient (MAG).

use crate::error::{Error, Result};
use crate::image::{is_extreme, GrayImage, NoiseMask, Window3};
use crate::par;

/// Default MAG threshold, picked with the `calibrate` sweep on a natural
/// 512×512 test image: dark and bright flat areas put many impulses at a
/// MAG of 15..40, and recall drops quickly above 20.
pub const DEFAULT_MAG_THRESHOLD: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorConfig {
    /// A pixel needs MAG strictly above this to be flagged.
    pub mag_threshold: f64,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        Self {
            mag_threshold: DEFAULT_MAG_THRESHOLD,
        }
    }
}

impl DetectorConfig {
    pub fn new(mag_threshold: f64) -> Result<Self> {
        let cfg = Self { mag_threshold };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.mag_threshold >= 0.0 {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!(
                "MAG threshold must be nonnegative, got {}",
                self.mag_threshold
            )))
        }
    }
}

/// Sum of `|neighbor - center|` over the eight neighbors.
#[inline]
pub fn abs_gradient_sum(win: &Window3) -> u32 {
    let c = win.center();
    Window3::NEIGHBORS
        .iter()
        .map(|&i| u32::from(win.values[i].abs_diff(c)))
        .sum()
}

/// Mean absolute difference between the center and its eight neighbors.
#[inline]
pub fn mag(win: &Window3) -> f64 {
    f64::from(abs_gradient_sum(win)) / 8.0
}

/// Whether a pixel with this window is a noise candidate: it must hold an
/// impulse value and stand out from its neighborhood.
#[inline]
pub fn is_candidate(win: &Window3, cfg: &DetectorConfig) -> bool {
    is_extreme(win.center()) && mag(win) > cfg.mag_threshold
}

/// Flags every noise candidate of `img`. Windows read `img` only.
pub fn classify(img: &GrayImage, cfg: &DetectorConfig) -> NoiseMask {
    let (w, h) = img.dimensions();
    let src = img.pixels();
    let mut flags = vec![false; img.len()];
    par::for_each_chunk(&mut flags, w, |y, row| {
        for (x, flag) in row.iter_mut().enumerate() {
            // Cheap test first; most pixels of a natural image are not extreme.
            if is_extreme(src[y * w + x]) {
                *flag = is_candidate(&img.window_at(x, y), cfg);
            }
        }
    });
    NoiseMask::from_flags(w, h, flags).expect("mask sized to image")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn mag_examples() {
        assert_eq!(mag(&Window3::new([100; 9])), 0.0);
        let mut v = [100u8; 9];
        v[4] = 255;
        assert_eq!(mag(&Window3::new(v)), 155.0);
        let w = Window3::from_rows([[10, 20, 30], [40, 0, 60], [70, 80, 90]]);
        assert_eq!(mag(&w), 50.0);
    }

    #[test]
    fn negative_threshold_rejected() {
        assert!(DetectorConfig::new(-1.0).is_err());
        assert!(DetectorConfig::new(f64::NAN).is_err());
        assert!(DetectorConfig::new(0.0).is_ok());
    }

    #[test]
    fn mid_gray_never_flagged() {
        let img = GrayImage::from_fn(5, 5, |x, y| if (x, y) == (2, 2) { 128 } else { 0 }).unwrap();
        let mask = classify(&img, &DetectorConfig::new(0.0).unwrap());
        assert!(!mask.get(2, 2));
    }

    #[test]
    fn flat_black_not_flagged() {
        let img = GrayImage::filled(6, 4, 0).unwrap();
        assert_eq!(classify(&img, &DetectorConfig::default()).count(), 0);
    }

    #[test]
    fn isolated_salt_flagged() {
        let img =
            GrayImage::from_fn(3, 3, |x, y| if (x, y) == (1, 1) { 255 } else { 100 }).unwrap();
        let mask = classify(&img, &DetectorConfig::new(40.0).unwrap());
        assert!(mask.get(1, 1));
        assert_eq!(mask.count(), 1);
    }

    #[test]
    fn threshold_equal_to_mag_does_not_flag() {
        let img =
            GrayImage::from_fn(3, 3, |x, y| if (x, y) == (1, 1) { 255 } else { 100 }).unwrap();
        assert!(!classify(&img, &DetectorConfig::new(155.0).unwrap()).get(1, 1));
        assert!(classify(&img, &DetectorConfig::new(154.9).unwrap()).get(1, 1));
    }

    fn arb_image() -> impl Strategy<Value = GrayImage> {
        (1usize..12, 1usize..12).prop_flat_map(|(w, h)| {
            prop::collection::vec(prop_oneof![Just(0u8), Just(255u8), any::<u8>()], w * h)
                .prop_map(move |px| GrayImage::new(w, h, px).unwrap())
        })
    }

    proptest! {
        #[test]
        fn only_extremes_flagged(img in arb_image(), t in 0.0f64..200.0) {
            let mask = classify(&img, &DetectorConfig::new(t).unwrap());
            for (i, &f) in mask.flags().iter().enumerate() {
                if f {
                    prop_assert!(is_extreme(img.pixels()[i]));
                }
            }
        }

        #[test]
        fn monotone_in_threshold(img in arb_image(), t in 0.0f64..200.0, dt in 0.0f64..100.0) {
            let lo = classify(&img, &DetectorConfig::new(t).unwrap());
            let hi = classify(&img, &DetectorConfig::new(t + dt).unwrap());
            for (a, b) in lo.flags().iter().zip(hi.flags()) {
                prop_assert!(!*b || *a);
            }
        }

        #[test]
        fn matches_per_pixel_definition(img in arb_image()) {
            let cfg = DetectorConfig::default();
            let mask = classify(&img, &cfg);
            for y in (0..img.height()).rev() {
                for x in (0..img.width()).rev() {
                    let w = img.window_at(x, y);
                    let want = is_extreme(w.center()) && mag(&w) > cfg.mag_threshold;
                    prop_assert_eq!(mask.get(x, y), want);
                }
            }
        }
    }
}
