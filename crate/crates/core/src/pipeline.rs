//! The three-phase scheme: detect, reduce, enhance. Also the filter
//! selector used by the benchmark harness and the CLI.

use std::fmt;
use std::str::FromStr;

use crate::baselines::{amf, smf, AmfConfig};
use crate::detect::{classify, DetectorConfig};
use crate::enhance::{enhance, EnhanceConfig};
use crate::error::{Error, Result};
use crate::image::{GrayImage, NoiseMask};
use crate::reduce::{reduce, ScanPolicy};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DenoiseConfig {
    pub detector: DetectorConfig,
    pub scan: ScanPolicy,
    pub enhance: EnhanceConfig,
}

impl DenoiseConfig {
    pub fn validate(&self) -> Result<()> {
        self.detector.validate()?;
        self.enhance.validate()
    }
}

/// Runs detection, reduction and enhancement once each. Returns the output
/// image and the detection mask.
pub fn denoise(noisy: &GrayImage, cfg: &DenoiseConfig) -> Result<(GrayImage, NoiseMask)> {
    cfg.validate()?;
    let mask = classify(noisy, &cfg.detector);
    let restored = reduce(noisy, &mask, cfg.scan)?;
    let out = enhance(&restored, noisy, &cfg.enhance)?;
    Ok((out, mask))
}

/// Filters available to the CLI and the sweep harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Filter {
    Proposed,
    Smf,
    Amf,
    /// Passthrough; scores the corrupted image itself.
    None,
}

impl Filter {
    pub const ALL: [Filter; 4] = [Filter::Proposed, Filter::Smf, Filter::Amf, Filter::None];

    pub fn name(&self) -> &'static str {
        match self {
            Filter::Proposed => "proposed",
            Filter::Smf => "smf",
            Filter::Amf => "amf",
            Filter::None => "none",
        }
    }

    /// Applies the filter. Only `Proposed` yields a detection mask.
    pub fn apply(
        &self,
        noisy: &GrayImage,
        cfg: &DenoiseConfig,
        amf_cfg: &AmfConfig,
    ) -> Result<(GrayImage, Option<NoiseMask>)> {
        Ok(match self {
            Filter::Proposed => {
                let (out, mask) = denoise(noisy, cfg)?;
                (out, Some(mask))
            }
            Filter::Smf => (smf(noisy), None),
            Filter::Amf => (amf(noisy, amf_cfg), None),
            Filter::None => (noisy.clone(), None),
        })
    }
}

impl fmt::Display for Filter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Filter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Filter::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown filter {s:?}")))
    }
}
