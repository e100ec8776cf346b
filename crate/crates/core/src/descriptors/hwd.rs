//! Haar wavelet descriptor: a multi-level averaging Haar decomposition of
//! the grayscale frame, summarized as the mean absolute coefficient of each
//! detail band plus the mean of the final approximation.
//!
//! The averaging convention (`(a + b) / 2`, `(a - b) / 2`) keeps a constant
//! image constant through every level, so its detail bands are exactly zero.

use crate::descriptors::{require_nonempty, Descriptor, DescriptorConfig, FeatureVector};
use crate::error::{Error, Result};
use crate::image::{gray_resized, Image};

pub(super) fn validate_hwd(cfg: &DescriptorConfig) -> Result<()> {
    if !cfg.hwd_resize.is_power_of_two() {
        return Err(Error::config(format!(
            "hwd_resize must be a power of two, got {}",
            cfg.hwd_resize
        )));
    }
    if (1usize << cfg.hwd_levels) > cfg.hwd_resize {
        return Err(Error::config(format!(
            "hwd_levels = {} does not fit a {}x{} plane",
            cfg.hwd_levels, cfg.hwd_resize, cfg.hwd_resize
        )));
    }
    Ok(())
}

/// One decomposition step on an `s` x `s` plane. Returns the half-size
/// approximation and the mean absolute value of the horizontal, vertical and
/// diagonal detail bands.
fn decompose(plane: &[f64], s: usize) -> (Vec<f64>, [f64; 3]) {
    let half = s / 2;
    let mut approx = Vec::with_capacity(half * half);
    let mut sums = [0.0f64; 3];
    for by in 0..half {
        for bx in 0..half {
            let a = plane[2 * by * s + 2 * bx];
            let b = plane[2 * by * s + 2 * bx + 1];
            let c = plane[(2 * by + 1) * s + 2 * bx];
            let d = plane[(2 * by + 1) * s + 2 * bx + 1];
            approx.push((a + b + c + d) / 4.0);
            sums[0] += ((a - b + c - d) / 4.0).abs();
            sums[1] += ((a + b - c - d) / 4.0).abs();
            sums[2] += ((a - b - c + d) / 4.0).abs();
        }
    }
    let count = (half * half) as f64;
    (approx, [sums[0] / count, sums[1] / count, sums[2] / count])
}

pub fn extract_hwd(img: &Image, cfg: &DescriptorConfig) -> Result<FeatureVector> {
    require_nonempty(img)?;
    validate_hwd(cfg)?;

    let mut plane = gray_resized(img, cfg.hwd_resize);
    let mut size = cfg.hwd_resize;
    let mut values = Vec::with_capacity(3 * cfg.hwd_levels + 1);
    for _ in 0..cfg.hwd_levels {
        let (approx, bands) = decompose(&plane, size);
        values.extend_from_slice(&bands);
        plane = approx;
        size /= 2;
    }
    let approx_mean = plane.iter().sum::<f64>() / plane.len() as f64;
    values.push(approx_mean);

    Ok(FeatureVector::new(Descriptor::Hwd, values))
}
