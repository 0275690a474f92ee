//! Density-sweep benchmark harness.
//!
//! For each density the clean image is corrupted once with seed
//! `base_seed + density_index`, every requested filter is applied to the
//! same corrupted image, and each result is scored against the clean image.
//! Rows come back ordered by density, then by the requested filter order,
//! regardless of how the work was scheduled.

use std::io;

use crate::baselines::AmfConfig;
use crate::detect::{classify, DetectorConfig};
use crate::enhance::std_dev;
use crate::error::{Error, Result};
use crate::image::{GrayImage, NoiseMask};
use crate::metrics::{detector_score, format_psnr, psnr, MetricsReport};
use crate::noise::{inject, NoiseSpec};
use crate::par;
use crate::pipeline::{denoise, DenoiseConfig, Filter};

/// 0.1, 0.2, ..., 0.9.
pub fn default_densities() -> Vec<f64> {
    (1..=9).map(|k| f64::from(k) / 10.0).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub densities: Vec<f64>,
    pub filters: Vec<Filter>,
    pub seed: u64,
    pub salt_fraction: f64,
    pub denoise: DenoiseConfig,
    pub amf: AmfConfig,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            densities: default_densities(),
            filters: Filter::ALL.to_vec(),
            seed: 0,
            salt_fraction: 0.5,
            denoise: DenoiseConfig::default(),
            amf: AmfConfig::default(),
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.densities.is_empty() {
            return Err(Error::InvalidConfig(
                "sweep needs at least one density".into(),
            ));
        }
        if let Some(d) = self.densities.iter().find(|d| !(**d > 0.0 && **d <= 1.0)) {
            return Err(Error::InvalidConfig(format!(
                "sweep density {d} outside (0, 1]"
            )));
        }
        if self.filters.is_empty() {
            return Err(Error::InvalidConfig(
                "sweep needs at least one filter".into(),
            ));
        }
        self.denoise.validate()
    }

    /// Noise parameters for the density at `index`.
    pub fn noise_spec(&self, index: usize) -> Result<NoiseSpec> {
        NoiseSpec::with_salt_fraction(
            self.densities[index],
            self.salt_fraction,
            self.seed.wrapping_add(index as u64),
        )
    }
}

/// Corrupted input for one density, with its ground truth.
#[derive(Debug, Clone)]
pub struct NoisyCase {
    pub density: f64,
    pub noisy: GrayImage,
    pub truth: NoiseMask,
    /// Standard deviation of the corrupted image, the enhancement gate input.
    pub sigma: f64,
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub reports: Vec<MetricsReport>,
    pub cases: Vec<NoisyCase>,
}

impl SweepOutcome {
    pub fn write_csv<W: io::Write>(&self, out: W) -> io::Result<()> {
        crate::metrics::write_csv(&self.reports, out)
    }

    /// Reports for one filter, in density order.
    pub fn filter_rows(&self, filter: Filter) -> Vec<&MetricsReport> {
        self.reports
            .iter()
            .filter(|r| r.filter == filter.name())
            .collect()
    }
}

/// Corrupts `clean` at every density of `spec`.
pub fn corrupt_all(clean: &GrayImage, spec: &SweepSpec) -> Result<Vec<NoisyCase>> {
    spec.validate()?;
    let noise = (0..spec.densities.len())
        .map(|i| spec.noise_spec(i))
        .collect::<Result<Vec<_>>>()?;
    Ok(par::map_range(noise.len(), |i| {
        let (noisy, truth) = inject(clean, &noise[i]);
        let sigma = std_dev(&noisy);
        NoisyCase {
            density: noise[i].density(),
            noisy,
            truth,
            sigma,
        }
    }))
}

/// Runs the full sweep.
pub fn run_sweep(clean: &GrayImage, spec: &SweepSpec) -> Result<SweepOutcome> {
    let cases = corrupt_all(clean, spec)?;
    let nf = spec.filters.len();
    let reports = par::map_range(cases.len() * nf, |job| {
        let case = &cases[job / nf];
        let filter = spec.filters[job % nf];
        let (out, mask) = filter.apply(&case.noisy, &spec.denoise, &spec.amf)?;
        let report = MetricsReport::new(filter.name(), case.density, clean, &out)?;
        Ok(match mask {
            Some(mask) => {
                let (p, r) = detector_score(&mask, &case.truth)?;
                report.with_detector(p, r)
            }
            None => report,
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(SweepOutcome { reports, cases })
}

/// One point of a MAG-threshold calibration run.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdPoint {
    pub mag_threshold: f64,
    pub density: f64,
    pub precision: f64,
    pub recall: f64,
    pub psnr_db: f64,
}

/// Scores the detector and the full scheme for every (threshold, density)
/// pair, keeping the rest of `spec.denoise` fixed.
pub fn threshold_sweep(
    clean: &GrayImage,
    spec: &SweepSpec,
    thresholds: &[f64],
) -> Result<Vec<ThresholdPoint>> {
    let cases = corrupt_all(clean, spec)?;
    let configs = thresholds
        .iter()
        .map(|&t| DetectorConfig::new(t))
        .collect::<Result<Vec<_>>>()?;
    let nd = cases.len();
    par::map_range(configs.len() * nd, |job| {
        let detector = configs[job / nd];
        let case = &cases[job % nd];
        let mask = classify(&case.noisy, &detector);
        let (precision, recall) = detector_score(&mask, &case.truth)?;
        let cfg = DenoiseConfig {
            detector,
            ..spec.denoise
        };
        let (out, _) = denoise(&case.noisy, &cfg)?;
        Ok(ThresholdPoint {
            mag_threshold: detector.mag_threshold,
            density: case.density,
            precision,
            recall,
            psnr_db: psnr(clean, &out)?,
        })
    })
    .into_iter()
    .collect()
}

pub fn write_threshold_csv<W: io::Write>(points: &[ThresholdPoint], out: W) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["mag_threshold", "density", "precision", "recall", "psnr_db"])?;
    for p in points {
        w.write_record([
            format!("{}", p.mag_threshold),
            format!("{}", p.density),
            format!("{:.6}", p.precision),
            format!("{:.6}", p.recall),
            format_psnr(p.psnr_db),
        ])?;
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scene() -> GrayImage {
        GrayImage::from_fn(48, 40, |x, y| {
            let base = if (x / 12 + y / 10) % 2 == 0 { 70 } else { 170 };
            (base + (x * 3 + y * 2) % 25) as u8
        })
        .unwrap()
    }

    #[test]
    fn default_density_grid() {
        let d = default_densities();
        assert_eq!(d.len(), 9);
        assert_eq!(d[0], 0.1);
        assert_eq!(d[2], 0.3);
        assert_eq!(d[8], 0.9);
    }

    #[test]
    fn spec_validation() {
        let mut s = SweepSpec::default();
        assert!(s.validate().is_ok());
        s.densities = vec![];
        assert!(s.validate().is_err());
        s.densities = vec![0.0];
        assert!(s.validate().is_err());
        s.densities = vec![1.2];
        assert!(s.validate().is_err());
        s.densities = vec![1.0];
        s.filters.clear();
        assert!(s.validate().is_err());
    }

    #[test]
    fn passthrough_row_scores_corrupted_image() {
        let clean = scene();
        let spec = SweepSpec {
            densities: vec![0.1],
            filters: vec![Filter::None],
            seed: 5,
            ..Default::default()
        };
        let out = run_sweep(&clean, &spec).unwrap();
        assert_eq!(out.reports.len(), 1);
        let (noisy, _) = inject(&clean, &NoiseSpec::new(0.1, 5).unwrap());
        assert_eq!(out.reports[0].psnr_db, psnr(&clean, &noisy).unwrap());
        assert_eq!(out.reports[0].precision, None);
    }

    #[test]
    fn rows_follow_density_then_filter_order() {
        let spec = SweepSpec {
            densities: vec![0.2, 0.6],
            filters: vec![Filter::Smf, Filter::Proposed],
            seed: 1,
            ..Default::default()
        };
        let out = run_sweep(&scene(), &spec).unwrap();
        let keys: Vec<_> = out
            .reports
            .iter()
            .map(|r| (r.density, r.filter.as_str()))
            .collect();
        assert_eq!(
            keys,
            vec![
                (0.2, "smf"),
                (0.2, "proposed"),
                (0.6, "smf"),
                (0.6, "proposed")
            ]
        );
        assert!(out.reports[1].precision.is_some());
        assert_eq!(out.cases.len(), 2);
    }

    #[test]
    fn seeds_are_offset_by_density_index() {
        let spec = SweepSpec {
            densities: vec![0.5, 0.5],
            filters: vec![Filter::None],
            seed: 100,
            ..Default::default()
        };
        let cases = corrupt_all(&scene(), &spec).unwrap();
        assert_eq!(
            cases[0].noisy,
            inject(&scene(), &NoiseSpec::new(0.5, 100).unwrap()).0
        );
        assert_eq!(
            cases[1].noisy,
            inject(&scene(), &NoiseSpec::new(0.5, 101).unwrap()).0
        );
    }

    #[test]
    fn threshold_sweep_covers_grid() {
        let spec = SweepSpec {
            densities: vec![0.3, 0.7],
            ..Default::default()
        };
        let pts = threshold_sweep(&scene(), &spec, &[10.0, 40.0, 80.0]).unwrap();
        assert_eq!(pts.len(), 6);
        // Recall can only fall as the threshold rises.
        for d in [0.3, 0.7] {
            let recalls: Vec<_> = pts
                .iter()
                .filter(|p| p.density == d)
                .map(|p| p.recall)
                .collect();
            assert!(recalls.windows(2).all(|w| w[1] <= w[0]));
        }
        let mut buf = Vec::new();
        write_threshold_csv(&pts, &mut buf).unwrap();
        assert!(String::from_utf8(buf)
            .unwrap()
            .starts_with("mag_threshold,density,precision,recall,psnr_db\n10,0.3,"));
    }
}
