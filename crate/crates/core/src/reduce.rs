//! Replacement of flagged pixels with a two-stage, distance-ordered median.
//!
//! Stage one takes the median of the center and its four diagonal
//! neighbors. Stage two takes the median of that value and the four
//! edge-adjacent neighbors. If the result is itself an impulse, the two
//! order statistics on the far side of it are averaged instead.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::image::{GrayImage, NoiseMask, Window3, PEPPER, SALT};
use crate::par;

/// Which pixels a replacement window sees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ScanPolicy {
    /// Raster order; windows see values already restored earlier in the scan.
    #[default]
    Progressive,
    /// Every window reads the unmodified input.
    Snapshot,
}

impl fmt::Display for ScanPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScanPolicy::Progressive => "progressive",
            ScanPolicy::Snapshot => "snapshot",
        })
    }
}

impl FromStr for ScanPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "progressive" => Ok(ScanPolicy::Progressive),
            "snapshot" => Ok(ScanPolicy::Snapshot),
            other => Err(Error::InvalidConfig(format!(
                "unknown scan policy {other:?}"
            ))),
        }
    }
}

#[inline(always)]
fn cswap(v: &mut [u8; 5], i: usize, j: usize) {
    let (a, b) = (v[i], v[j]);
    v[i] = a.min(b);
    v[j] = a.max(b);
}

/// Nine-comparator sorting network for five values.
#[inline]
pub(crate) fn sort5(mut v: [u8; 5]) -> [u8; 5] {
    cswap(&mut v, 0, 1);
    cswap(&mut v, 3, 4);
    cswap(&mut v, 2, 4);
    cswap(&mut v, 2, 3);
    cswap(&mut v, 0, 3);
    cswap(&mut v, 0, 2);
    cswap(&mut v, 1, 4);
    cswap(&mut v, 1, 3);
    cswap(&mut v, 1, 2);
    v
}

/// Integer mean of two values, rounding halves up.
#[inline]
pub(crate) fn avg2(a: u8, b: u8) -> u8 {
    (u16::from(a) + u16::from(b)).div_ceil(2) as u8
}

/// Replacement value for the center of `win`.
pub fn two_stage_median(win: &Window3) -> u8 {
    let v = &win.values;
    let a = sort5([v[4], v[0], v[2], v[6], v[8]]);
    let b = sort5([v[1], v[3], v[5], v[7], a[2]]);
    match b[2] {
        PEPPER => avg2(b[3], b[4]),
        SALT => avg2(b[0], b[1]),
        m => m,
    }
}

/// Replaces every flagged pixel of `img` by [`two_stage_median`] of its
/// window; unflagged pixels are copied.
pub fn reduce(img: &GrayImage, mask: &NoiseMask, policy: ScanPolicy) -> Result<GrayImage> {
    mask.check_matches(img)?;
    let (w, h) = img.dimensions();
    let flags = mask.flags();
    let pixels = match policy {
        ScanPolicy::Progressive => {
            // Sequential by construction: each window may read values
            // written earlier in this loop.
            let mut buf = img.pixels().to_vec();
            for y in 0..h {
                for x in 0..w {
                    let i = y * w + x;
                    if flags[i] {
                        buf[i] = two_stage_median(&Window3::from_raster(&buf, w, h, x, y));
                    }
                }
            }
            buf
        }
        ScanPolicy::Snapshot => {
            let mut buf = img.pixels().to_vec();
            par::for_each_row(&mut buf, w, |y, row| {
                for (x, px) in row.iter_mut().enumerate() {
                    if flags[y * w + x] {
                        *px = two_stage_median(&img.window_at(x, y));
                    }
                }
            });
            buf
        }
    };
    GrayImage::new(w, h, pixels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn win(rows: [[u8; 3]; 3]) -> Window3 {
        Window3::from_rows(rows)
    }

    #[test]
    fn sort5_network_is_complete() {
        // Zero-one principle: a comparator network sorts everything iff it
        // sorts all 0/1 inputs.
        for bits in 0u8..32 {
            let v: [u8; 5] = std::array::from_fn(|i| (bits >> i) & 1);
            let s = sort5(v);
            assert!(s.windows(2).all(|p| p[0] <= p[1]), "{v:?} -> {s:?}");
        }
    }

    #[test]
    fn avg2_rounds_half_up() {
        assert_eq!(avg2(120, 200), 160);
        assert_eq!(avg2(0, 1), 1);
        assert_eq!(avg2(254, 255), 255);
        assert_eq!(avg2(255, 255), 255);
        assert_eq!(avg2(0, 0), 0);
    }

    #[test]
    fn non_extreme_median() {
        let w = win([[10, 20, 30], [40, 0, 60], [70, 80, 90]]);
        assert_eq!(two_stage_median(&w), 40);
    }

    #[test]
    fn pepper_median_averages_upper_pair() {
        let w = win([[0, 0, 100], [0, 0, 200], [255, 120, 0]]);
        assert_eq!(two_stage_median(&w), 160);
    }

    #[test]
    fn salt_median_averages_lower_pair() {
        // a: {255,255,255,10,255} -> 255; b: {20,255,255,255,255} -> b3 = 255
        // -> avg(b1, b2) = avg(20, 255) = 138 (half-up)
        let w = win([[255, 20, 255], [255, 255, 255], [10, 255, 255]]);
        assert_eq!(two_stage_median(&w), 138);
    }

    #[test]
    fn all_extreme_degenerate_windows() {
        assert_eq!(two_stage_median(&Window3::new([0; 9])), 0);
        assert_eq!(two_stage_median(&Window3::new([255; 9])), 255);
    }

    #[test]
    fn reduce_identity_on_empty_mask() {
        let img = GrayImage::from_fn(9, 7, |x, y| (x * 40 + y) as u8).unwrap();
        for p in [ScanPolicy::Progressive, ScanPolicy::Snapshot] {
            assert_eq!(reduce(&img, &NoiseMask::like(&img), p).unwrap(), img);
        }
    }

    #[test]
    fn reduce_single_flagged_pixel() {
        let img = GrayImage::from_rows(&[[10u8, 20, 30], [40, 0, 60], [70, 80, 90]]).unwrap();
        let mut mask = NoiseMask::like(&img);
        mask.set(1, 1, true);
        for p in [ScanPolicy::Progressive, ScanPolicy::Snapshot] {
            let out = reduce(&img, &mask, p).unwrap();
            let mut want = img.pixels().to_vec();
            want[4] = 40;
            assert_eq!(out.pixels(), &want[..]);
        }
    }

    #[test]
    fn reduce_rejects_mismatched_mask() {
        let img = GrayImage::filled(3, 3, 1).unwrap();
        let mask = NoiseMask::new(3, 4);
        assert!(matches!(
            reduce(&img, &mask, ScanPolicy::Progressive),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn progressive_reads_restored_neighbors() {
        // Two adjacent flagged pixels: the second one sees the restored first
        // under progressive, the raw impulse under snapshot.
        let img =
            GrayImage::from_rows(&[[50u8, 50, 50, 50], [50, 0, 0, 50], [50, 50, 50, 50]]).unwrap();
        let mut mask = NoiseMask::like(&img);
        mask.set(1, 1, true);
        mask.set(2, 1, true);
        let prog = reduce(&img, &mask, ScanPolicy::Progressive).unwrap();
        let snap = reduce(&img, &mask, ScanPolicy::Snapshot).unwrap();
        assert_eq!(prog.get(1, 1), 50);
        assert_eq!(prog.get(2, 1), 50);
        assert_eq!(snap.get(2, 1), 50);

        // Dense pepper run along a row: snapshot leaves the middle unresolved
        // windows to the averaging branch, progressive propagates.
        let img = GrayImage::from_rows(&[[0u8, 0, 0, 0, 0], [0, 0, 0, 0, 0], [90, 90, 90, 90, 90]])
            .unwrap();
        let mask =
            NoiseMask::from_flags(5, 3, img.pixels().iter().map(|&v| v == 0).collect()).unwrap();
        let prog = reduce(&img, &mask, ScanPolicy::Progressive).unwrap();
        let snap = reduce(&img, &mask, ScanPolicy::Snapshot).unwrap();
        assert_ne!(prog, snap);
    }

    #[test]
    fn policy_parse_and_display() {
        for p in [ScanPolicy::Progressive, ScanPolicy::Snapshot] {
            assert_eq!(p.to_string().parse::<ScanPolicy>().unwrap(), p);
        }
        assert!("raster".parse::<ScanPolicy>().is_err());
        assert_eq!(ScanPolicy::default(), ScanPolicy::Progressive);
    }

    proptest! {
        #[test]
        fn unflagged_pixels_untouched(
            px in prop::collection::vec(any::<u8>(), 48),
            flags in prop::collection::vec(any::<bool>(), 48),
            snapshot in any::<bool>(),
        ) {
            let img = GrayImage::new(8, 6, px).unwrap();
            let mask = NoiseMask::from_flags(8, 6, flags).unwrap();
            let policy = if snapshot { ScanPolicy::Snapshot } else { ScanPolicy::Progressive };
            let out = reduce(&img, &mask, policy).unwrap();
            for i in 0..48 {
                if !mask.flags()[i] {
                    prop_assert_eq!(out.pixels()[i], img.pixels()[i]);
                }
            }
        }

        #[test]
        fn non_extreme_result_is_plain_median(v in prop::array::uniform9(any::<u8>())) {
            let w = Window3::new(v);
            let mut a = [v[4], v[0], v[2], v[6], v[8]];
            a.sort();
            let mut b = [v[1], v[3], v[5], v[7], a[2]];
            b.sort();
            if b[2] != 0 && b[2] != 255 {
                prop_assert_eq!(two_stage_median(&w), b[2]);
            }
        }
    }
}
