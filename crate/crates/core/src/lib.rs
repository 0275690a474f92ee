//! Adaptive salt-and-pepper noise reduction for 8-bit grayscale images.
//!
//! The scheme runs in three phases:
//!
//! 1. [`detect`]: pixels holding an impulse value (0 or 255) whose mean
//!    absolute gradient against their 3×3 neighbors exceeds a threshold are
//!    flagged as noise candidates.
//! 2. [`reduce`]: every candidate is replaced by a two-stage median, first
//!    over the center and diagonal neighbors, then over that result and the
//!    edge-adjacent neighbors.
//! 3. [`enhance`]: if the corrupted input's standard deviation is high,
//!    the restored image is smoothed with a directional filter that averages
//!    the most similar pair in each corner of the 3×3 mask.
//!
//! [`pipeline::denoise`] composes the three. The crate also ships a seeded
//! noise injector ([`noise`]), SMF/AMF reference filters ([`baselines`]),
//! PSNR scoring ([`metrics`]), binary PGM I/O ([`pgm`]) and a density-sweep
//! harness ([`sweep`]).
//!
//! With the default `parallel` feature, row-independent passes run on
//! rayon's thread pool. Results are identical with and without it.

pub mod baselines;
pub mod detect;
pub mod enhance;
pub mod error;
pub mod image;
pub mod metrics;
pub mod noise;
mod par;
pub mod pgm;
pub mod pipeline;
pub mod reduce;
pub mod sweep;

pub use baselines::{amf, smf, AmfConfig};
pub use detect::{classify, mag, DetectorConfig};
pub use enhance::{directional_pixel, enhance, std_dev, EnhanceConfig, EnhanceMode};
pub use error::{Error, Result};
pub use image::{GrayImage, NoiseMask, Window3};
pub use metrics::{detector_score, mse, psnr, MetricsReport};
pub use noise::{inject, NoiseSpec, SplitMix64};
pub use par::is_parallel;
pub use pgm::{read_pgm, read_pgm_file, write_pgm, write_pgm_file};
pub use pipeline::{denoise, DenoiseConfig, Filter};
pub use reduce::{reduce, two_stage_median, ScanPolicy};
pub use sweep::{run_sweep, SweepSpec};
