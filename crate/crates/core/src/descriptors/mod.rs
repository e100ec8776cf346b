//! Frame-level feature extraction.
//!
//! Six descriptors of the visual content of a single frame: four color
//! histogram descriptors (GCH, BIC, CCV, ACC) over a uniformly quantized RGB
//! space, and two grayscale texture/shape descriptors (GFD, HWD). Every
//! extractor is a pure function of the image and configuration, so batch
//! extraction can run data-parallel with no ordering requirement.

mod color;
mod gfd;
mod hwd;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::Image;

pub use color::{extract_acc, extract_bic, extract_ccv, extract_gch, quantize_channel};
pub use gfd::extract_gfd;
pub use hwd::extract_hwd;

/// The descriptor families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Descriptor {
    Acc,
    Ccv,
    Bic,
    Gch,
    Gfd,
    Hwd,
}

impl Descriptor {
    pub const ALL: [Descriptor; 6] = [
        Descriptor::Acc,
        Descriptor::Ccv,
        Descriptor::Bic,
        Descriptor::Gch,
        Descriptor::Gfd,
        Descriptor::Hwd,
    ];

    /// Stable byte code used by the binary file formats.
    pub fn code(self) -> u8 {
        match self {
            Descriptor::Acc => 0,
            Descriptor::Ccv => 1,
            Descriptor::Bic => 2,
            Descriptor::Gch => 3,
            Descriptor::Gfd => 4,
            Descriptor::Hwd => 5,
        }
    }

    pub fn from_code(code: u8) -> Option<Descriptor> {
        Descriptor::ALL.into_iter().find(|d| d.code() == code)
    }

    pub fn name(self) -> &'static str {
        match self {
            Descriptor::Acc => "acc",
            Descriptor::Ccv => "ccv",
            Descriptor::Bic => "bic",
            Descriptor::Gch => "gch",
            Descriptor::Gfd => "gfd",
            Descriptor::Hwd => "hwd",
        }
    }

    /// Output length under `cfg`.
    pub fn feature_len(self, cfg: &DescriptorConfig) -> usize {
        match self {
            Descriptor::Acc => cfg.acc_colors() * cfg.acc_distances.len(),
            Descriptor::Ccv => 2 * cfg.ccv_colors(),
            Descriptor::Bic => 2 * cfg.bic_colors(),
            Descriptor::Gch => cfg.gch_colors(),
            Descriptor::Gfd => cfg.gfd_radial * cfg.gfd_angular,
            Descriptor::Hwd => 3 * cfg.hwd_levels + 1,
        }
    }
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Descriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Descriptor::ALL
            .into_iter()
            .find(|d| d.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::config(format!("unknown descriptor `{s}`")))
    }
}

/// Extraction parameters. The defaults match the common configurations of
/// the descriptors' original formulations; every knob is exposed so that
/// experiments can sweep them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DescriptorConfig {
    pub gch_bins_per_channel: usize,
    pub bic_bins_per_channel: usize,
    pub ccv_bins_per_channel: usize,
    /// Coherence threshold as a fraction of image area.
    pub ccv_tau_fraction: f64,
    /// Chessboard distances probed by the correlogram.
    pub acc_distances: Vec<usize>,
    pub acc_bins_per_channel: usize,
    pub gfd_radial: usize,
    pub gfd_angular: usize,
    pub gfd_resize: usize,
    pub hwd_levels: usize,
    pub hwd_resize: usize,
}

impl Default for DescriptorConfig {
    fn default() -> Self {
        DescriptorConfig {
            gch_bins_per_channel: 4,
            bic_bins_per_channel: 4,
            ccv_bins_per_channel: 4,
            ccv_tau_fraction: 0.01,
            acc_distances: vec![1, 3, 5, 7],
            acc_bins_per_channel: 4,
            gfd_radial: 4,
            gfd_angular: 9,
            gfd_resize: 64,
            hwd_levels: 3,
            hwd_resize: 64,
        }
    }
}

impl DescriptorConfig {
    pub fn gch_colors(&self) -> usize {
        self.gch_bins_per_channel.pow(3)
    }

    pub fn bic_colors(&self) -> usize {
        self.bic_bins_per_channel.pow(3)
    }

    pub fn ccv_colors(&self) -> usize {
        self.ccv_bins_per_channel.pow(3)
    }

    pub fn acc_colors(&self) -> usize {
        self.acc_bins_per_channel.pow(3)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("gch_bins_per_channel", self.gch_bins_per_channel),
            ("bic_bins_per_channel", self.bic_bins_per_channel),
            ("ccv_bins_per_channel", self.ccv_bins_per_channel),
            ("acc_bins_per_channel", self.acc_bins_per_channel),
            ("gfd_radial", self.gfd_radial),
            ("gfd_angular", self.gfd_angular),
            ("gfd_resize", self.gfd_resize),
            ("hwd_levels", self.hwd_levels),
            ("hwd_resize", self.hwd_resize),
        ] {
            if v < 1 {
                return Err(Error::config(format!("{name} must be >= 1")));
            }
        }
        if !(self.ccv_tau_fraction > 0.0 && self.ccv_tau_fraction < 1.0) {
            return Err(Error::config("ccv_tau_fraction must lie in (0, 1)"));
        }
        if self.acc_distances.is_empty() {
            return Err(Error::config("acc_distances must be nonempty"));
        }
        if self.acc_distances.iter().any(|&d| d < 1) {
            return Err(Error::config("acc_distances must all be >= 1"));
        }
        hwd::validate_hwd(self)?;
        Ok(())
    }
}

/// Descriptor output: the descriptor identity plus a fixed-length vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub descriptor: Descriptor,
    pub values: Vec<f64>,
}

impl FeatureVector {
    pub fn new(descriptor: Descriptor, values: Vec<f64>) -> Self {
        FeatureVector { descriptor, values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Dispatch to the extractor selected by `which`.
pub fn extract(img: &Image, which: Descriptor, cfg: &DescriptorConfig) -> Result<FeatureVector> {
    match which {
        Descriptor::Acc => extract_acc(img, cfg),
        Descriptor::Ccv => extract_ccv(img, cfg),
        Descriptor::Bic => extract_bic(img, cfg),
        Descriptor::Gch => extract_gch(img, cfg),
        Descriptor::Gfd => extract_gfd(img, cfg),
        Descriptor::Hwd => extract_hwd(img, cfg),
    }
}

pub(crate) fn require_nonempty(img: &Image) -> Result<()> {
    if img.is_empty() {
        return Err(Error::invalid_input(
            "cannot extract features from a zero-area image",
        ));
    }
    Ok(())
}
