//! Photometric augmentation: Gaussian blur and per-channel affine jitter.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::raster::RasterImage;

use super::style::AugmentRanges;

/// Concrete augmentation values. Application is a pure function of the
/// image and these parameters; use [`AugmentParams::sample`] to draw them
/// from the documented ranges.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AugmentParams {
    /// Gaussian blur sigma in pixels; 0 disables the blur pass.
    pub sigma: f64,
    /// Per-channel multiplicative gain.
    pub gain: [f64; 3],
    /// Per-channel additive bias in gray levels.
    pub bias: [f64; 3],
}

impl AugmentParams {
    pub fn identity() -> Self {
        Self {
            sigma: 0.0,
            gain: [1.0; 3],
            bias: [0.0; 3],
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn sample<R: Rng>(rng: &mut R, ranges: &AugmentRanges) -> Self {
        let u = |rng: &mut R, (a, b): (f64, f64)| rng.gen_range(a..=b);
        Self {
            sigma: u(rng, ranges.sigma),
            gain: [u(rng, ranges.gain), u(rng, ranges.gain), u(rng, ranges.gain)],
            bias: [u(rng, ranges.bias), u(rng, ranges.bias), u(rng, ranges.bias)],
        }
    }
}

/// Normalized 1-D Gaussian kernel with radius `ceil(3 sigma)`.
fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    let radius = (3.0 * sigma).ceil().max(1.0) as i64;
    let mut k = Vec::with_capacity((2 * radius + 1) as usize);
    let denom = 2.0 * sigma * sigma;
    for i in -radius..=radius {
        k.push((-(i * i) as f64 / denom).exp());
    }
    let sum: f64 = k.iter().sum();
    for v in &mut k {
        *v /= sum;
    }
    k
}

/// Separable Gaussian blur with clamp-to-edge handling; values are kept in
/// f64 between the passes and rounded once at the end.
fn blur(img: &RasterImage, sigma: f64) -> RasterImage {
    let kernel = gaussian_kernel(sigma);
    let radius = (kernel.len() / 2) as i64;
    let (w, h) = (img.width() as i64, img.height() as i64);

    let mut horiz = vec![[0.0f64; 3]; (w * h) as usize];
    for y in 0..h {
        for x in 0..w {
            let mut acc = [0.0; 3];
            for (j, &kv) in kernel.iter().enumerate() {
                let sx = (x + j as i64 - radius).clamp(0, w - 1);
                let p = img.get(sx as u32, y as u32);
                for c in 0..3 {
                    acc[c] += kv * p[c] as f64;
                }
            }
            horiz[(y * w + x) as usize] = acc;
        }
    }

    let mut out = RasterImage::new(img.width(), img.height(), [0, 0, 0]).expect("nonempty");
    for y in 0..h {
        for x in 0..w {
            let mut acc = [0.0; 3];
            for (j, &kv) in kernel.iter().enumerate() {
                let sy = (y + j as i64 - radius).clamp(0, h - 1);
                let p = horiz[(sy * w + x) as usize];
                for c in 0..3 {
                    acc[c] += kv * p[c];
                }
            }
            out.put(
                x as u32,
                y as u32,
                [
                    acc[0].round().clamp(0.0, 255.0) as u8,
                    acc[1].round().clamp(0.0, 255.0) as u8,
                    acc[2].round().clamp(0.0, 255.0) as u8,
                ],
            );
        }
    }
    out
}

/// Blur followed by per-channel affine jitter, clamped to `[0, 255]`.
pub fn augment(img: &RasterImage, params: &AugmentParams) -> RasterImage {
    let blurred;
    let base = if params.sigma > 0.0 {
        blurred = blur(img, params.sigma);
        &blurred
    } else {
        img
    };
    if params.gain == [1.0; 3] && params.bias == [0.0; 3] {
        return base.clone();
    }
    let mut out = base.clone();
    for y in 0..out.height() {
        for x in 0..out.width() {
            let p = base.get(x, y);
            let mut q = [0u8; 3];
            for c in 0..3 {
                q[c] = (p[c] as f64 * params.gain[c] + params.bias[c])
                    .round()
                    .clamp(0.0, 255.0) as u8;
            }
            out.put(x, y, q);
        }
    }
    out
}
