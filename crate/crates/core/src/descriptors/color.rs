//! Color descriptors over a uniformly quantized RGB space.
//!
//! GCH, BIC, CCV and ACC share the same quantizer, so the two-part
//! histograms of BIC and CCV always sum, color by color, to the plain GCH
//! counts on the same binning.

use crate::descriptors::{require_nonempty, Descriptor, DescriptorConfig, FeatureVector};
use crate::error::Result;
use crate::image::Image;

/// Uniform per-channel quantization: floor(v * bins / 256).
#[inline]
pub fn quantize_channel(v: u8, bins: usize) -> usize {
    v as usize * bins / 256
}

#[inline]
fn quantize_color(p: [u8; 3], bins: usize) -> usize {
    (quantize_channel(p[0], bins) * bins + quantize_channel(p[1], bins)) * bins
        + quantize_channel(p[2], bins)
}

fn quantized_plane(img: &Image, bins: usize) -> Vec<usize> {
    img.pixels().iter().map(|&p| quantize_color(p, bins)).collect()
}

/// Global Color Histogram: fraction of pixels per quantized color.
pub fn extract_gch(img: &Image, cfg: &DescriptorConfig) -> Result<FeatureVector> {
    require_nonempty(img)?;
    let bins = cfg.gch_bins_per_channel;
    let mut counts = vec![0u64; bins.pow(3)];
    for p in img.pixels() {
        counts[quantize_color(*p, bins)] += 1;
    }
    let total = img.pixel_count() as f64;
    let values = counts.iter().map(|&c| c as f64 / total).collect();
    Ok(FeatureVector::new(Descriptor::Gch, values))
}

/// Border/Interior pixel Classification: a pixel is interior iff every
/// in-bounds 4-neighbor shares its quantized color. The output concatenates
/// the border histogram and the interior histogram, both normalized by the
/// total pixel count, so the whole vector sums to 1.
pub fn extract_bic(img: &Image, cfg: &DescriptorConfig) -> Result<FeatureVector> {
    require_nonempty(img)?;
    let bins = cfg.bic_bins_per_channel;
    let colors = bins.pow(3);
    let (w, h) = (img.width(), img.height());
    let q = quantized_plane(img, bins);

    let mut border = vec![0u64; colors];
    let mut interior = vec![0u64; colors];
    for y in 0..h {
        for x in 0..w {
            let c = q[y * w + x];
            let mut is_interior = true;
            if x > 0 && q[y * w + x - 1] != c {
                is_interior = false;
            }
            if is_interior && x + 1 < w && q[y * w + x + 1] != c {
                is_interior = false;
            }
            if is_interior && y > 0 && q[(y - 1) * w + x] != c {
                is_interior = false;
            }
            if is_interior && y + 1 < h && q[(y + 1) * w + x] != c {
                is_interior = false;
            }
            if is_interior {
                interior[c] += 1;
            } else {
                border[c] += 1;
            }
        }
    }

    let total = img.pixel_count() as f64;
    let values = border
        .iter()
        .chain(interior.iter())
        .map(|&c| c as f64 / total)
        .collect();
    Ok(FeatureVector::new(Descriptor::Bic, values))
}

/// Color Coherence Vector: a pixel is coherent iff its 8-connected
/// same-color component has at least `ceil(tau * area)` pixels. The output
/// concatenates the coherent histogram and the incoherent histogram, both
/// normalized by the total pixel count.
pub fn extract_ccv(img: &Image, cfg: &DescriptorConfig) -> Result<FeatureVector> {
    require_nonempty(img)?;
    let bins = cfg.ccv_bins_per_channel;
    let colors = bins.pow(3);
    let (w, h) = (img.width(), img.height());
    let q = quantized_plane(img, bins);
    let n = w * h;

    // Union-find over same-color 8-neighbors; linking up-left, up, up-right
    // and left covers every 8-adjacency once.
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    fn union(parent: &mut [usize], a: usize, b: usize) {
        let ra = find(parent, a);
        let rb = find(parent, b);
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            if x > 0 && q[i - 1] == q[i] {
                union(&mut parent, i, i - 1);
            }
            if y > 0 {
                let up = i - w;
                if q[up] == q[i] {
                    union(&mut parent, i, up);
                }
                if x > 0 && q[up - 1] == q[i] {
                    union(&mut parent, i, up - 1);
                }
                if x + 1 < w && q[up + 1] == q[i] {
                    union(&mut parent, i, up + 1);
                }
            }
        }
    }

    let mut component_size = vec![0u64; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        component_size[r] += 1;
    }

    let threshold = (cfg.ccv_tau_fraction * n as f64).ceil() as u64;
    let mut coherent = vec![0u64; colors];
    let mut incoherent = vec![0u64; colors];
    for i in 0..n {
        let r = find(&mut parent, i);
        if component_size[r] >= threshold {
            coherent[q[i]] += 1;
        } else {
            incoherent[q[i]] += 1;
        }
    }

    let total = n as f64;
    let values = coherent
        .iter()
        .chain(incoherent.iter())
        .map(|&c| c as f64 / total)
        .collect();
    Ok(FeatureVector::new(Descriptor::Ccv, values))
}

/// Cells at chessboard distance exactly `d` from the origin.
fn ring_offsets(d: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::with_capacity(8 * d as usize);
    for dx in -d..=d {
        out.push((dx, -d));
        out.push((dx, d));
    }
    for dy in (-d + 1)..=(d - 1) {
        out.push((-d, dy));
        out.push((d, dy));
    }
    out
}

/// Auto Color Correlogram: entry (c, d) is the probability that a pixel at
/// chessboard distance d from a pixel of quantized color c also has color c,
/// over all ordered in-bounds pixel pairs. Layout is color-major: index =
/// color * |distances| + distance_index. Colors with no valid pair at a
/// distance (absent colors included) yield 0.
pub fn extract_acc(img: &Image, cfg: &DescriptorConfig) -> Result<FeatureVector> {
    require_nonempty(img)?;
    let bins = cfg.acc_bins_per_channel;
    let colors = bins.pow(3);
    let distances = &cfg.acc_distances;
    let (w, h) = (img.width() as i64, img.height() as i64);
    let q = quantized_plane(img, bins);

    let n_d = distances.len();
    let mut same = vec![0u64; colors * n_d];
    let mut valid = vec![0u64; colors * n_d];
    for (di, &d) in distances.iter().enumerate() {
        let ring = ring_offsets(d as i64);
        for y in 0..h {
            for x in 0..w {
                let c = q[(y * w + x) as usize];
                let slot = c * n_d + di;
                for &(dx, dy) in &ring {
                    let (nx, ny) = (x + dx, y + dy);
                    if nx < 0 || ny < 0 || nx >= w || ny >= h {
                        continue;
                    }
                    valid[slot] += 1;
                    if q[(ny * w + nx) as usize] == c {
                        same[slot] += 1;
                    }
                }
            }
        }
    }

    let values = same
        .iter()
        .zip(valid.iter())
        .map(|(&s, &v)| if v == 0 { 0.0 } else { s as f64 / v as f64 })
        .collect();
    Ok(FeatureVector::new(Descriptor::Acc, values))
}
