//! Raster frame type and the shared grayscale/resampling helpers.
//!
//! All descriptor math runs on this plain RGB8 buffer so that outputs are
//! bit-reproducible across platforms: grayscale uses fixed weights and the
//! bilinear resampler is written in lerp form, which maps constant inputs to
//! bit-identical constant outputs.

use std::path::Path;

use crate::error::{Error, Result};

/// Decoded RGB frame, row-major, 8 bits per channel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Image {
    width: usize,
    height: usize,
    pixels: Vec<[u8; 3]>,
}

impl Image {
    /// Wrap a row-major pixel buffer. The buffer length must equal
    /// `width * height`; zero-area images are representable but rejected by
    /// every descriptor.
    pub fn new(width: usize, height: usize, pixels: Vec<[u8; 3]>) -> Result<Self> {
        if pixels.len() != width * height {
            return Err(Error::invalid_input(format!(
                "pixel buffer length {} does not match {}x{}",
                pixels.len(),
                width,
                height
            )));
        }
        Ok(Image {
            width,
            height,
            pixels,
        })
    }

    /// Image filled with a single color.
    pub fn filled(width: usize, height: usize, color: [u8; 3]) -> Self {
        Image {
            width,
            height,
            pixels: vec![color; width * height],
        }
    }

    /// Decode a PNG or JPEG file to RGB8.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let img = image::open(path).map_err(|e| Error::Image {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        let rgb = img.to_rgb8();
        let (w, h) = (rgb.width() as usize, rgb.height() as usize);
        let pixels = rgb.pixels().map(|p| p.0).collect();
        Image::new(w, h, pixels)
    }

    /// Encode to PNG.
    pub fn save_png(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut buf = image::RgbImage::new(self.width as u32, self.height as u32);
        for (i, p) in self.pixels.iter().enumerate() {
            let x = (i % self.width) as u32;
            let y = (i / self.width) as u32;
            buf.put_pixel(x, y, image::Rgb(*p));
        }
        buf.save_with_format(path, image::ImageFormat::Png)
            .map_err(|e| Error::Image {
                path: path.to_path_buf(),
                message: e.to_string(),
            })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixel_count(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    /// Pixel at (x, y); callers guarantee bounds.
    #[inline]
    pub fn pixel(&self, x: usize, y: usize) -> [u8; 3] {
        debug_assert!(x < self.width && y < self.height);
        self.pixels[y * self.width + x]
    }

    pub fn pixels(&self) -> &[[u8; 3]] {
        &self.pixels
    }

    pub fn pixels_mut(&mut self) -> &mut [[u8; 3]] {
        &mut self.pixels
    }
}

/// Fixed luma weights; shared by every grayscale consumer so outputs are
/// reproducible across platforms.
#[inline]
pub fn luma(p: [u8; 3]) -> f64 {
    0.299 * p[0] as f64 + 0.587 * p[1] as f64 + 0.114 * p[2] as f64
}

/// Grayscale plane in [0, 255], row-major.
pub fn grayscale(img: &Image) -> Vec<f64> {
    img.pixels().iter().map(|&p| luma(p)).collect()
}

#[inline]
fn lerp(a: f64, b: f64, t: f64) -> f64 {
    // a + t*(b-a) returns `a` bit-exactly when a == b, which keeps constant
    // fields constant through resampling.
    a + t * (b - a)
}

/// Bilinear sample of a row-major plane at continuous coordinates, with
/// clamping at the borders. Pixel centers sit at integer coordinates.
pub fn sample_bilinear(plane: &[f64], width: usize, height: usize, x: f64, y: f64) -> f64 {
    let xc = x.clamp(0.0, (width - 1) as f64);
    let yc = y.clamp(0.0, (height - 1) as f64);
    let x0 = xc.floor() as usize;
    let y0 = yc.floor() as usize;
    let x1 = (x0 + 1).min(width - 1);
    let y1 = (y0 + 1).min(height - 1);
    let fx = xc - x0 as f64;
    let fy = yc - y0 as f64;
    let top = lerp(plane[y0 * width + x0], plane[y0 * width + x1], fx);
    let bot = lerp(plane[y1 * width + x0], plane[y1 * width + x1], fx);
    lerp(top, bot, fy)
}

/// Bilinear resize of a grayscale plane using the pixel-center convention
/// (`src = (dst + 0.5) * scale - 0.5`). Resizing to the input size is the
/// identity.
pub fn resize_bilinear(
    plane: &[f64],
    width: usize,
    height: usize,
    out_w: usize,
    out_h: usize,
) -> Vec<f64> {
    assert!(width > 0 && height > 0 && out_w > 0 && out_h > 0);
    if width == out_w && height == out_h {
        return plane.to_vec();
    }
    let sx = width as f64 / out_w as f64;
    let sy = height as f64 / out_h as f64;
    let mut out = Vec::with_capacity(out_w * out_h);
    for j in 0..out_h {
        let y = (j as f64 + 0.5) * sy - 0.5;
        for i in 0..out_w {
            let x = (i as f64 + 0.5) * sx - 0.5;
            out.push(sample_bilinear(plane, width, height, x, y));
        }
    }
    out
}

/// Grayscale plane resized to `size` x `size`.
pub fn gray_resized(img: &Image, size: usize) -> Vec<f64> {
    let gray = grayscale(img);
    resize_bilinear(&gray, img.width(), img.height(), size, size)
}
