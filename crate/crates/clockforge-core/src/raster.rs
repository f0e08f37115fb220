//! Plain RGB raster images with the sampling helpers the pipeline needs.
//!
//! Pixel centers sit at integer coordinates, so sampling at exact integers
//! reproduces the stored pixel bit-for-bit. Bilinear interpolation is
//! evaluated in factored lerp form, which makes it exactly equivariant to a
//! constant brightness shift — the reader's jitter-invariance relies on that.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RasterError {
    #[error("image dimensions {0}x{1} must be at least 1x1")]
    EmptyImage(u32, u32),
}

/// An owned 8-bit RGB image, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RasterImage {
    width: u32,
    height: u32,
    data: Vec<u8>,
}

impl RasterImage {
    pub fn new(width: u32, height: u32, fill: [u8; 3]) -> Result<Self, RasterError> {
        if width == 0 || height == 0 {
            return Err(RasterError::EmptyImage(width, height));
        }
        let mut data = Vec::with_capacity((width * height * 3) as usize);
        for _ in 0..width * height {
            data.extend_from_slice(&fill);
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn from_raw(width: u32, height: u32, data: Vec<u8>) -> Result<Self, RasterError> {
        if width == 0 || height == 0 || data.len() != (width * height * 3) as usize {
            return Err(RasterError::EmptyImage(width, height));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn as_raw(&self) -> &[u8] {
        &self.data
    }

    #[inline]
    pub fn get(&self, x: u32, y: u32) -> [u8; 3] {
        let i = ((y * self.width + x) * 3) as usize;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    #[inline]
    pub fn put(&mut self, x: u32, y: u32, rgb: [u8; 3]) {
        let i = ((y * self.width + x) * 3) as usize;
        self.data[i..i + 3].copy_from_slice(&rgb);
    }

    #[inline]
    fn get_or(&self, x: i64, y: i64, fill: [u8; 3]) -> [u8; 3] {
        if x < 0 || y < 0 || x >= self.width as i64 || y >= self.height as i64 {
            fill
        } else {
            self.get(x as u32, y as u32)
        }
    }

    /// Bilinear sample at a real-valued coordinate; reads outside the image
    /// contribute `fill`.
    pub fn sample_bilinear(&self, x: f64, y: f64, fill: [u8; 3]) -> [f64; 3] {
        let x0 = x.floor();
        let y0 = y.floor();
        let fx = x - x0;
        let fy = y - y0;
        let (xi, yi) = (x0 as i64, y0 as i64);
        let p00 = self.get_or(xi, yi, fill);
        let p10 = self.get_or(xi + 1, yi, fill);
        let p01 = self.get_or(xi, yi + 1, fill);
        let p11 = self.get_or(xi + 1, yi + 1, fill);
        let mut out = [0.0; 3];
        for c in 0..3 {
            let top = lerp(p00[c] as f64, p10[c] as f64, fx);
            let bot = lerp(p01[c] as f64, p11[c] as f64, fx);
            out[c] = lerp(top, bot, fy);
        }
        out
    }

    /// Integer Rec.601 luma scaled by 1000: `299 R + 587 G + 114 B`.
    ///
    /// Kept in integer form so a uniform bias of `b` gray levels shifts every
    /// value by exactly `1000 b`, making relative thresholds shift-invariant.
    #[inline]
    pub fn luma1000(&self, x: u32, y: u32) -> u32 {
        let [r, g, b] = self.get(x, y);
        299 * r as u32 + 587 * g as u32 + 114 * b as u32
    }

    /// Luma plane as f64 in gray levels (luma1000 / 1000).
    pub fn luma_plane(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity((self.width * self.height) as usize);
        for y in 0..self.height {
            for x in 0..self.width {
                out.push(self.luma1000(x, y) as f64 / 1000.0);
            }
        }
        out
    }

    /// Bilinear sample of the ×1000 integer luma. Exactly shift-equivariant.
    pub fn sample_luma1000(&self, x: f64, y: f64, fill1000: f64) -> f64 {
        let x0 = x.floor();
        let y0 = y.floor();
        let fx = x - x0;
        let fy = y - y0;
        let (xi, yi) = (x0 as i64, y0 as i64);
        let l = |dx: i64, dy: i64| -> f64 {
            let (px, py) = (xi + dx, yi + dy);
            if px < 0 || py < 0 || px >= self.width as i64 || py >= self.height as i64 {
                fill1000
            } else {
                self.luma1000(px as u32, py as u32) as f64
            }
        };
        let top = lerp(l(0, 0), l(1, 0), fx);
        let bot = lerp(l(0, 1), l(1, 1), fx);
        lerp(top, bot, fy)
    }

    /// Quarter-turn clockwise rotation by exact pixel permutation.
    pub fn rotate90_cw(&self) -> RasterImage {
        let (w, h) = (self.height, self.width);
        let mut out = RasterImage::new(w, h, [0, 0, 0]).expect("nonempty");
        for y in 0..h {
            for x in 0..w {
                out.put(x, y, self.get(y, self.height - 1 - x));
            }
        }
        out
    }
}

#[inline]
fn lerp(a: f64, b: f64, t: f64) -> f64 {
    a + t * (b - a)
}

/// Mean squared error between two images of equal size over an interior
/// region that excludes `margin` pixels on every side.
pub fn interior_mse(a: &RasterImage, b: &RasterImage, margin: u32) -> f64 {
    assert_eq!((a.width, a.height), (b.width, b.height));
    let mut sum = 0.0;
    let mut n = 0u64;
    for y in margin..a.height - margin {
        for x in margin..a.width - margin {
            let pa = a.get(x, y);
            let pb = b.get(x, y);
            for c in 0..3 {
                let d = pa[c] as f64 - pb[c] as f64;
                sum += d * d;
                n += 1;
            }
        }
    }
    sum / n as f64
}

/// Peak signal-to-noise ratio in dB for 8-bit images (infinite when equal).
pub fn psnr(mse: f64) -> f64 {
    if mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (255.0 * 255.0 / mse).log10()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampling_at_integers_is_exact() {
        let mut img = RasterImage::new(4, 3, [10, 20, 30]).unwrap();
        img.put(2, 1, [200, 100, 50]);
        assert_eq!(img.sample_bilinear(2.0, 1.0, [0, 0, 0]), [200.0, 100.0, 50.0]);
        assert_eq!(img.get(2, 1), [200, 100, 50]);
    }

    #[test]
    fn sampling_outside_returns_fill() {
        let img = RasterImage::new(2, 2, [100, 100, 100]).unwrap();
        assert_eq!(img.sample_bilinear(-5.0, 0.0, [7, 8, 9]), [7.0, 8.0, 9.0]);
    }

    #[test]
    fn bilinear_is_shift_equivariant() {
        let mut a = RasterImage::new(3, 3, [50, 60, 70]).unwrap();
        a.put(1, 1, [90, 10, 200]);
        let mut b = a.clone();
        for y in 0..3 {
            for x in 0..3 {
                let p = b.get(x, y);
                b.put(x, y, [p[0] + 13, p[1] + 13, p[2] + 13]);
            }
        }
        for &(x, y) in &[(0.25, 0.75), (1.5, 0.5), (0.9, 1.1)] {
            let sa = a.sample_luma1000(x, y, 0.0);
            let sb = b.sample_luma1000(x, y, 13_000.0);
            assert_eq!(sb, sa + 13_000.0);
        }
    }

    #[test]
    fn rotate90_permutes_pixels() {
        let mut img = RasterImage::new(2, 2, [0, 0, 0]).unwrap();
        img.put(0, 0, [1, 1, 1]); // A
        img.put(1, 0, [2, 2, 2]); // B
        img.put(0, 1, [3, 3, 3]); // C
        img.put(1, 1, [4, 4, 4]); // D
        let r = img.rotate90_cw();
        assert_eq!(r.get(1, 0), [1, 1, 1]);
        assert_eq!(r.get(1, 1), [2, 2, 2]);
        assert_eq!(r.get(0, 0), [3, 3, 3]);
        assert_eq!(r.get(0, 1), [4, 4, 4]);
    }
}
