//! Synthetic genre-coded corpus generator.
//!
//! Each genre owns a hue on the color wheel; frames of a video are that hue
//! with seeded perturbations scaled by a single noise knob: hue jitter per
//! frame, uniform per-pixel channel noise, and a few random rectangles. At
//! noise 0 every frame of a genre is the same flat color, so color
//! histograms are identical by construction; raising the noise moves the
//! genres toward each other, degrading classifier accuracy monotonically.

use std::path::{Path, PathBuf};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::classifier::derive_seed;
use crate::error::{Error, Result};
use crate::image::Image;
use crate::manifest::{DatasetManifest, Split};

#[derive(Debug, Clone, PartialEq)]
pub struct SynthSpec {
    pub genres: usize,
    pub videos_per_genre: usize,
    pub frames_per_video: usize,
    /// 0 = flat genre colors, 1 = heavy perturbation.
    pub noise: f64,
    pub seed: u64,
    pub frame_size: usize,
    pub train_fraction: f64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        SynthSpec {
            genres: 6,
            videos_per_genre: 20,
            frames_per_video: 20,
            noise: 0.1,
            seed: 7,
            frame_size: 64,
            train_fraction: 0.4,
        }
    }
}

impl SynthSpec {
    pub fn validate(&self) -> Result<()> {
        if self.genres < 2 {
            return Err(Error::config("synthetic corpus needs at least 2 genres"));
        }
        if self.videos_per_genre < 1 || self.frames_per_video < 1 {
            return Err(Error::config("videos and frames per video must be >= 1"));
        }
        if !(0.0..=1.0).contains(&self.noise) {
            return Err(Error::config("noise must lie in [0, 1]"));
        }
        if self.frame_size < 8 {
            return Err(Error::config("frame size must be >= 8"));
        }
        let train = self.train_videos_per_genre();
        if train < 1 || train >= self.videos_per_genre {
            return Err(Error::config(format!(
                "train fraction {} leaves no usable split for {} videos per genre",
                self.train_fraction, self.videos_per_genre
            )));
        }
        Ok(())
    }

    pub fn train_videos_per_genre(&self) -> usize {
        (self.train_fraction * self.videos_per_genre as f64).round() as usize
    }
}

/// HSV (h in degrees, s and v in [0,1]) to RGB bytes.
fn hsv_to_rgb(h: f64, s: f64, v: f64) -> [u8; 3] {
    let h = h.rem_euclid(360.0);
    let c = v * s;
    let x = c * (1.0 - ((h / 60.0) % 2.0 - 1.0).abs());
    let m = v - c;
    let (r, g, b) = match h as u32 / 60 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    [
        ((r + m) * 255.0).round() as u8,
        ((g + m) * 255.0).round() as u8,
        ((b + m) * 255.0).round() as u8,
    ]
}

fn render_frame(spec: &SynthSpec, genre: usize, rng: &mut ChaCha8Rng) -> Image {
    let size = spec.frame_size;
    let base_hue = genre as f64 * 360.0 / spec.genres as f64;
    let jitter: f64 = rng.random_range(-1.0..1.0) * spec.noise * 90.0;
    let base = hsv_to_rgb(base_hue + jitter, 0.85, 0.9);
    let mut img = Image::filled(size, size, base);

    let shapes = (spec.noise * 30.0).round() as usize;
    for _ in 0..shapes {
        let color = [rng.random::<u8>(), rng.random::<u8>(), rng.random::<u8>()];
        let w = rng.random_range(2..=size / 2);
        let h = rng.random_range(2..=size / 2);
        let x0 = rng.random_range(0..size);
        let y0 = rng.random_range(0..size);
        for y in y0..(y0 + h).min(size) {
            for x in x0..(x0 + w).min(size) {
                img.pixels_mut()[y * size + x] = color;
            }
        }
    }

    let amplitude = spec.noise * 255.0;
    if amplitude > 0.0 {
        for p in img.pixels_mut() {
            for c in p.iter_mut() {
                let delta = rng.random_range(-1.0..1.0) * amplitude;
                *c = (*c as f64 + delta).round().clamp(0.0, 255.0) as u8;
            }
        }
    }
    img
}

pub fn video_id(genre: usize, video: usize) -> String {
    format!("g{genre:02}_v{video:03}")
}

pub fn genre_name(genre: usize) -> String {
    format!("genre{genre:02}")
}

/// Generates frames and a manifest under `out_dir`. Refuses to write into a
/// nonempty directory unless `force` is set.
pub fn generate(spec: &SynthSpec, out_dir: impl AsRef<Path>, force: bool) -> Result<DatasetManifest> {
    spec.validate()?;
    let out_dir = out_dir.as_ref();
    if out_dir.exists() {
        let occupied = std::fs::read_dir(out_dir)
            .map_err(|e| Error::io(out_dir, e))?
            .next()
            .is_some();
        if occupied && !force {
            return Err(Error::invalid_input(format!(
                "output directory {} is not empty; pass --force to overwrite",
                out_dir.display()
            )));
        }
    }

    let train_count = spec.train_videos_per_genre();
    let mut videos = Vec::new();
    for g in 0..spec.genres {
        for v in 0..spec.videos_per_genre {
            let split = if v < train_count {
                Split::Train
            } else {
                Split::Test
            };
            videos.push((g, v, split));
        }
    }

    videos
        .par_iter()
        .enumerate()
        .map(|(index, &(g, v, _))| {
            let id = video_id(g, v);
            let dir = out_dir.join("frames").join(&id);
            std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(spec.seed, index as u64));
            for f in 0..spec.frames_per_video {
                let img = render_frame(spec, g, &mut rng);
                img.save_png(dir.join(format!("frame_{f:06}.png")))?;
            }
            Ok(())
        })
        .collect::<Result<Vec<()>>>()?;

    let rows: Vec<(String, String, Split, PathBuf)> = videos
        .iter()
        .map(|&(g, v, split)| {
            let id = video_id(g, v);
            let dir = out_dir.join("frames").join(&id);
            (id, genre_name(g), split, dir)
        })
        .collect();
    let manifest = DatasetManifest::from_rows(rows)?;
    manifest.save(out_dir.join("manifest.csv"))?;
    Ok(manifest)
}
