//! Generic Fourier descriptor: a 2-D Fourier transform of the grayscale
//! frame resampled on a polar grid about its intensity centroid.
//!
//! The polar grid uses the inscribed radius (the centroid's distance to the
//! nearest image edge), so every sample lies in-bounds and a 90-degree
//! rotation of the frame permutes the angular axis without touching pixel
//! values. Magnitudes are normalized by the DC term, which makes the
//! descriptor invariant to rotation and to global intensity scaling.

use std::f64::consts::TAU;

use crate::descriptors::{require_nonempty, Descriptor, DescriptorConfig, FeatureVector};
use crate::error::Result;
use crate::image::{gray_resized, sample_bilinear, Image};

/// Polar grid resolution. Both axes oversample the kept coefficients
/// (`gfd_radial` x `gfd_angular`), and the angular count divides 360 degrees
/// evenly into quarter turns.
const RADIAL_SAMPLES: usize = 64;
const ANGULAR_SAMPLES: usize = 64;

pub fn extract_gfd(img: &Image, cfg: &DescriptorConfig) -> Result<FeatureVector> {
    require_nonempty(img)?;
    let size = cfg.gfd_resize;
    let plane = gray_resized(img, size);
    let out_len = cfg.gfd_radial * cfg.gfd_angular;

    let mass: f64 = plane.iter().sum();
    if mass == 0.0 {
        return Ok(FeatureVector::new(Descriptor::Gfd, vec![0.0; out_len]));
    }

    let mut cx = 0.0;
    let mut cy = 0.0;
    for y in 0..size {
        for x in 0..size {
            let v = plane[y * size + x];
            cx += x as f64 * v;
            cy += y as f64 * v;
        }
    }
    cx /= mass;
    cy /= mass;

    let edge = (size - 1) as f64;
    let max_radius = cx.min(cy).min(edge - cx).min(edge - cy);

    let mut polar = vec![0.0; RADIAL_SAMPLES * ANGULAR_SAMPLES];
    for k in 0..RADIAL_SAMPLES {
        let r = (k as f64 + 0.5) / RADIAL_SAMPLES as f64 * max_radius;
        for t in 0..ANGULAR_SAMPLES {
            let theta = TAU * t as f64 / ANGULAR_SAMPLES as f64;
            let x = cx + r * theta.cos();
            let y = cy + r * theta.sin();
            polar[k * ANGULAR_SAMPLES + t] = sample_bilinear(&plane, size, size, x, y);
        }
    }

    let polar_mass: f64 = polar.iter().sum();
    if polar_mass == 0.0 {
        return Ok(FeatureVector::new(Descriptor::Gfd, vec![0.0; out_len]));
    }

    // Separable direct DFT: angular pass first, then radial.
    let mut angular = vec![(0.0, 0.0); RADIAL_SAMPLES * cfg.gfd_angular];
    for k in 0..RADIAL_SAMPLES {
        for phi in 0..cfg.gfd_angular {
            let mut re = 0.0;
            let mut im = 0.0;
            for t in 0..ANGULAR_SAMPLES {
                let v = polar[k * ANGULAR_SAMPLES + t];
                let a = -TAU * (t * phi) as f64 / ANGULAR_SAMPLES as f64;
                re += v * a.cos();
                im += v * a.sin();
            }
            angular[k * cfg.gfd_angular + phi] = (re, im);
        }
    }

    let mut values = vec![0.0; out_len];
    for rho in 0..cfg.gfd_radial {
        for phi in 0..cfg.gfd_angular {
            let mut re = 0.0;
            let mut im = 0.0;
            for k in 0..RADIAL_SAMPLES {
                let (ar, ai) = angular[k * cfg.gfd_angular + phi];
                let a = -TAU * (k * rho) as f64 / RADIAL_SAMPLES as f64;
                let (s, c) = a.sin_cos();
                re += ar * c - ai * s;
                im += ar * s + ai * c;
            }
            values[rho * cfg.gfd_angular + phi] = (re * re + im * im).sqrt() / polar_mass;
        }
    }

    Ok(FeatureVector::new(Descriptor::Gfd, values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_image(size: usize, seed: u64, max: u8) -> Image {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pixels = (0..size * size)
            .map(|_| {
                [
                    rng.random_range(0..=max),
                    rng.random_range(0..=max),
                    rng.random_range(0..=max),
                ]
            })
            .collect();
        Image::new(size, size, pixels).unwrap()
    }

    /// 90-degree clockwise rotation of a square image.
    fn rot90(img: &Image) -> Image {
        let n = img.width();
        let mut pixels = vec![[0u8; 3]; n * n];
        for y in 0..n {
            for x in 0..n {
                pixels[y * n + x] = img.pixel(y, n - 1 - x);
            }
        }
        Image::new(n, n, pixels).unwrap()
    }

    #[test]
    fn constant_image_is_dc_only() {
        let img = Image::filled(32, 32, [120, 120, 120]);
        let fv = extract_gfd(&img, &DescriptorConfig::default()).unwrap();
        assert!((fv.values[0] - 1.0).abs() < 1e-12);
        for &v in &fv.values[1..] {
            assert!(v.abs() < 1e-10, "non-DC coefficient {v} on a constant image");
        }
    }

    #[test]
    fn black_image_is_all_zero() {
        let img = Image::filled(16, 16, [0, 0, 0]);
        let fv = extract_gfd(&img, &DescriptorConfig::default()).unwrap();
        assert_eq!(fv.values, vec![0.0; 36]);
    }

    #[test]
    fn values_lie_in_unit_interval() {
        for seed in 0..4 {
            let img = random_image(24, seed, 255);
            let fv = extract_gfd(&img, &DescriptorConfig::default()).unwrap();
            for &v in &fv.values {
                assert!((0.0..=1.0 + 1e-12).contains(&v), "out of range: {v}");
            }
            assert!((fv.values[0] - 1.0).abs() < 1e-12, "DC term normalizes to 1");
        }
    }

    #[test]
    fn quarter_turn_leaves_descriptor_unchanged() {
        let img = random_image(64, 5, 255);
        let cfg = DescriptorConfig::default();
        let a = extract_gfd(&img, &cfg).unwrap();
        let b = extract_gfd(&rot90(&img), &cfg).unwrap();
        for (x, y) in a.values.iter().zip(b.values.iter()) {
            assert!((x - y).abs() < 1e-6, "{x} vs {y}");
        }
    }

    #[test]
    fn intensity_doubling_is_exactly_invariant() {
        let img = random_image(32, 9, 127);
        let doubled_pixels: Vec<[u8; 3]> = img
            .pixels()
            .iter()
            .map(|p| [p[0] * 2, p[1] * 2, p[2] * 2])
            .collect();
        let doubled = Image::new(32, 32, doubled_pixels).unwrap();
        let cfg = DescriptorConfig::default();
        let a = extract_gfd(&img, &cfg).unwrap();
        let b = extract_gfd(&doubled, &cfg).unwrap();
        assert_eq!(a.values, b.values);
    }

    #[test]
    fn off_center_mass_shows_angular_energy() {
        // A bright square in one corner breaks angular symmetry, so some
        // non-DC angular coefficient must carry energy.
        let mut img = Image::filled(64, 64, [10, 10, 10]);
        for y in 0..16 {
            for x in 0..16 {
                img.pixels_mut()[y * 64 + x] = [250, 250, 250];
            }
        }
        let fv = extract_gfd(&img, &DescriptorConfig::default()).unwrap();
        let angular_energy: f64 = fv.values[1..9].iter().sum();
        assert!(angular_energy > 1e-3);
    }
}
