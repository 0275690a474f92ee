//! MSE / PSNR and detector scoring.

use std::io;

use crate::error::{check_dims, Result};
use crate::image::{GrayImage, NoiseMask};

/// Peak value of an 8-bit sample.
pub const PEAK: f64 = 255.0;

/// Sum of squared differences, exact.
fn sse(a: &GrayImage, b: &GrayImage) -> Result<u64> {
    check_dims(a.dimensions(), b.dimensions())?;
    Ok(a.pixels()
        .iter()
        .zip(b.pixels())
        .map(|(&x, &y)| {
            let d = u64::from(x.abs_diff(y));
            d * d
        })
        .sum())
}

/// Mean squared error over all pixels.
pub fn mse(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    Ok(sse(a, b)? as f64 / a.len() as f64)
}

/// Converts an MSE to decibels; zero error maps to `f64::INFINITY`.
pub fn psnr_from_mse(mse: f64) -> f64 {
    if mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (PEAK * PEAK / mse).log10()
    }
}

/// Peak signal-to-noise ratio in dB, `f64::INFINITY` for identical images.
pub fn psnr(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    mse(a, b).map(psnr_from_mse)
}

/// Precision and recall of `predicted` against `truth`. An empty
/// denominator yields 1.0.
pub fn detector_score(predicted: &NoiseMask, truth: &NoiseMask) -> Result<(f64, f64)> {
    check_dims(predicted.dimensions(), truth.dimensions())?;
    let (mut tp, mut fp, mut fun) = (0usize, 0usize, 0usize);
    for (&p, &t) in predicted.flags().iter().zip(truth.flags()) {
        match (p, t) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fun += 1,
            (false, false) => {}
        }
    }
    let ratio = |num: usize, den: usize| {
        if den == 0 {
            1.0
        } else {
            num as f64 / den as f64
        }
    };
    Ok((ratio(tp, tp + fp), ratio(tp, tp + fun)))
}

/// One row of a benchmark table.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub filter: String,
    pub density: f64,
    pub mse: f64,
    /// `f64::INFINITY` when `mse == 0`.
    pub psnr_db: f64,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
}

impl MetricsReport {
    pub fn new(
        filter: impl Into<String>,
        density: f64,
        clean: &GrayImage,
        processed: &GrayImage,
    ) -> Result<Self> {
        let mse = mse(clean, processed)?;
        Ok(Self {
            filter: filter.into(),
            density,
            mse,
            psnr_db: psnr_from_mse(mse),
            precision: None,
            recall: None,
        })
    }

    pub fn with_detector(mut self, precision: f64, recall: f64) -> Self {
        self.precision = Some(precision);
        self.recall = Some(recall);
        self
    }

    /// CSV fields in [`CSV_HEADER`] order.
    pub fn csv_fields(&self) -> [String; 6] {
        let opt = |v: Option<f64>| v.map(|v| format!("{v:.6}")).unwrap_or_default();
        [
            self.filter.clone(),
            format!("{}", self.density),
            format!("{:.6}", self.mse),
            format_psnr(self.psnr_db),
            opt(self.precision),
            opt(self.recall),
        ]
    }
}

/// `inf` for the infinite marker, four decimals otherwise.
pub fn format_psnr(db: f64) -> String {
    if db.is_infinite() {
        "inf".to_string()
    } else {
        format!("{db:.4}")
    }
}

pub const CSV_HEADER: [&str; 6] = ["filter", "density", "mse", "psnr_db", "precision", "recall"];

/// Writes `reports` as CSV with a header row.
pub fn write_csv<W: io::Write>(reports: &[MetricsReport], out: W) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in reports {
        w.write_record(r.csv_fields())?;
    }
    w.flush()
}
