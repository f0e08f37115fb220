//! 3×3 projective transforms and inverse-mapping image warps.
//!
//! A homography has 8 degrees of freedom; matrices are stored row-major and
//! kept canonical with the bottom-right element equal to 1. Warping is
//! destination-sampled: each output pixel is pulled from the source through
//! the inverse transform with bilinear interpolation.

use nalgebra::{Matrix3, SMatrix, SVector};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::raster::RasterImage;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum HomographyError {
    #[error("homography is singular (|det| = {0:.3e})")]
    SingularHomography(f64),
    #[error("projective denominator vanished at ({0}, {1})")]
    DegeneratePoint(f64, f64),
    #[error("degenerate point configuration for DLT")]
    DegenerateConfiguration,
    #[error("bottom-right element must be nonzero to canonicalize")]
    NonCanonical,
}

const DET_EPS: f64 = 1e-9;
const DENOM_EPS: f64 = 1e-9;

/// A plane projective transform, row-major, canonical with `h[8] == 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 9]", into = "[f64; 9]")]
pub struct Homography {
    m: [f64; 9],
}

impl TryFrom<[f64; 9]> for Homography {
    type Error = HomographyError;
    fn try_from(m: [f64; 9]) -> Result<Self, Self::Error> {
        Homography::from_elements(m)
    }
}

impl From<Homography> for [f64; 9] {
    fn from(h: Homography) -> [f64; 9] {
        h.m
    }
}

impl Homography {
    pub fn identity() -> Self {
        Self {
            m: [1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0],
        }
    }

    /// Builds from row-major elements, rescaling so `h[8] == 1` and checking
    /// invertibility of the canonical matrix.
    pub fn from_elements(m: [f64; 9]) -> Result<Self, HomographyError> {
        if m[8].abs() < DENOM_EPS {
            return Err(HomographyError::NonCanonical);
        }
        let mut out = [0.0; 9];
        for (o, v) in out.iter_mut().zip(m.iter()) {
            *o = v / m[8];
        }
        out[8] = 1.0;
        let det = Matrix3::from_row_slice(&out).determinant();
        if det.abs() < DET_EPS {
            return Err(HomographyError::SingularHomography(det.abs()));
        }
        Ok(Self { m: out })
    }

    pub fn translation(tx: f64, ty: f64) -> Self {
        Self {
            m: [1.0, 0.0, tx, 0.0, 1.0, ty, 0.0, 0.0, 1.0],
        }
    }

    pub fn scale(sx: f64, sy: f64) -> Self {
        Self {
            m: [sx, 0.0, 0.0, 0.0, sy, 0.0, 0.0, 0.0, 1.0],
        }
    }

    /// Clockwise rotation (in image coordinates, y down) about a pivot.
    pub fn rotation_about(cx: f64, cy: f64, degrees: f64) -> Self {
        let (s, c) = crate::timecore::sin_cos_deg(degrees);
        let m = [
            c,
            -s,
            cx - c * cx + s * cy,
            s,
            c,
            cy - s * cx - c * cy,
            0.0,
            0.0,
            1.0,
        ];
        Self { m }
    }

    /// Maps the `[-1, 1]` unit grid onto `[0, size]` pixel space: the left
    /// conjugating factor `[[s, 0, st], [0, s, st], [0, 0, 1]]` with
    /// `s = size / 2`, `t = 1`.
    pub fn unit_grid_to_pixels(size: u32) -> Self {
        let s = size as f64 / 2.0;
        Self {
            m: [s, 0.0, s, 0.0, s, s, 0.0, 0.0, 1.0],
        }
    }

    pub fn elements(&self) -> [f64; 9] {
        self.m
    }

    pub fn at(&self, row: usize, col: usize) -> f64 {
        self.m[row * 3 + col]
    }

    pub fn determinant(&self) -> f64 {
        Matrix3::from_row_slice(&self.m).determinant()
    }

    /// `self · other` (apply `other` first, then `self`).
    pub fn compose(&self, other: &Homography) -> Result<Homography, HomographyError> {
        let p = Matrix3::from_row_slice(&self.m) * Matrix3::from_row_slice(&other.m);
        let mut m = [0.0; 9];
        for r in 0..3 {
            for c in 0..3 {
                m[r * 3 + c] = p[(r, c)];
            }
        }
        Homography::from_elements(m)
    }

    pub fn inverse(&self) -> Result<Homography, HomographyError> {
        let inv = Matrix3::from_row_slice(&self.m)
            .try_inverse()
            .ok_or(HomographyError::SingularHomography(0.0))?;
        let mut m = [0.0; 9];
        for r in 0..3 {
            for c in 0..3 {
                m[r * 3 + c] = inv[(r, c)];
            }
        }
        Homography::from_elements(m)
    }

    /// Projects a point, or `None` when the denominator vanishes.
    #[inline]
    pub fn project(&self, x: f64, y: f64) -> Option<(f64, f64)> {
        let m = &self.m;
        let w = m[6] * x + m[7] * y + m[8];
        if w.abs() < DENOM_EPS {
            return None;
        }
        Some((
            (m[0] * x + m[1] * y + m[2]) / w,
            (m[3] * x + m[4] * y + m[5]) / w,
        ))
    }
}

/// Applies the projective sampling equation to one point.
pub fn warp_point(h: &Homography, p: (f64, f64)) -> Result<(f64, f64), HomographyError> {
    h.project(p.0, p.1)
        .ok_or(HomographyError::DegeneratePoint(p.0, p.1))
}

/// Conjugates a unit-grid homography into pixel space:
/// `[[s,0,st],[0,s,st],[0,0,1]] · H · [[1/s,0,-t],[0,1/s,-t],[0,0,1]]`
/// with `s = image_size / 2` and `t = 1`.
///
/// The product is expanded symbolically so the cancellations are exact —
/// the identity maps to the identity bit-for-bit.
pub fn normalize_to_unit_grid(h: &Homography, image_size: u32) -> Homography {
    let s = image_size as f64 / 2.0;
    let t = 1.0;
    let [a, b, c, d, e, f, g, hh, i] = h.m;
    // Left factor folds t·row3 into rows 1 and 2 and scales by s; the right
    // factor divides columns 1-2 by s and subtracts t times their sum from
    // column 3. Factoring the s·(1/s) pairs out keeps the algebra exact.
    let r1 = [a + t * g, b + t * hh, c + t * i];
    let r2 = [d + t * g, e + t * hh, f + t * i];
    let m = [
        r1[0],
        r1[1],
        s * (r1[2] - t * r1[0] - t * r1[1]),
        r2[0],
        r2[1],
        s * (r2[2] - t * r2[0] - t * r2[1]),
        g / s,
        hh / s,
        i - t * g - t * hh,
    ];
    // The conjugation of an invertible matrix stays invertible; canonical
    // rescale cannot fail because N33 of an h33=1 input stays near 1 for
    // the transforms this crate produces.
    Homography::from_elements(m).expect("conjugation preserves invertibility")
}

/// Inverse of [`normalize_to_unit_grid`].
pub fn denormalize_from_unit_grid(h: &Homography, image_size: u32) -> Homography {
    let s = image_size as f64 / 2.0;
    let t = 1.0;
    let left = Matrix3::new(1.0 / s, 0.0, -t, 0.0, 1.0 / s, -t, 0.0, 0.0, 1.0);
    let right = Matrix3::new(s, 0.0, s * t, 0.0, s, s * t, 0.0, 0.0, 1.0);
    let p = left * Matrix3::from_row_slice(&h.m) * right;
    let mut m = [0.0; 9];
    for r in 0..3 {
        for c in 0..3 {
            m[r * 3 + c] = p[(r, c)];
        }
    }
    Homography::from_elements(m).expect("conjugation preserves invertibility")
}

/// Estimates the homography sending `src[i]` to `dst[i]` from four
/// correspondences (direct linear transform).
///
/// Both point sets are first mapped into the unit square by a similarity to
/// condition the 8×8 system; no three of the source points may be collinear.
pub fn solve_dlt(
    src: &[(f64, f64); 4],
    dst: &[(f64, f64); 4],
) -> Result<Homography, HomographyError> {
    let (t_src, src_n) = condition(src)?;
    let (t_dst, dst_n) = condition(dst)?;

    let mut a = SMatrix::<f64, 8, 8>::zeros();
    let mut b = SVector::<f64, 8>::zeros();
    for k in 0..4 {
        let (x, y) = src_n[k];
        let (u, v) = dst_n[k];
        let r = 2 * k;
        a[(r, 0)] = x;
        a[(r, 1)] = y;
        a[(r, 2)] = 1.0;
        a[(r, 6)] = -u * x;
        a[(r, 7)] = -u * y;
        b[r] = u;
        a[(r + 1, 3)] = x;
        a[(r + 1, 4)] = y;
        a[(r + 1, 5)] = 1.0;
        a[(r + 1, 6)] = -v * x;
        a[(r + 1, 7)] = -v * y;
        b[r + 1] = v;
    }
    let h = a
        .lu()
        .solve(&b)
        .ok_or(HomographyError::DegenerateConfiguration)?;
    let hn = Matrix3::new(h[0], h[1], h[2], h[3], h[4], h[5], h[6], h[7], 1.0);

    // Undo the conditioning: H = T_dst⁻¹ · Hn · T_src.
    let t_dst_inv = t_dst
        .try_inverse()
        .ok_or(HomographyError::DegenerateConfiguration)?;
    let full = t_dst_inv * hn * t_src;
    let mut m = [0.0; 9];
    for r in 0..3 {
        for c in 0..3 {
            m[r * 3 + c] = full[(r, c)];
        }
    }
    Homography::from_elements(m).map_err(|_| HomographyError::DegenerateConfiguration)
}

/// Similarity mapping a point set into the unit square (translate the
/// bounding-box corner to the origin, scale the longer side to 1).
fn condition(pts: &[(f64, f64); 4]) -> Result<(Matrix3<f64>, [(f64, f64); 4]), HomographyError> {
    let min_x = pts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let max_x = pts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let min_y = pts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let max_y = pts.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let span = (max_x - min_x).max(max_y - min_y);
    if !span.is_finite() || span < 1e-12 {
        return Err(HomographyError::DegenerateConfiguration);
    }
    let s = 1.0 / span;
    let t = Matrix3::new(s, 0.0, -min_x * s, 0.0, s, -min_y * s, 0.0, 0.0, 1.0);
    let mut out = [(0.0, 0.0); 4];
    for (o, p) in out.iter_mut().zip(pts.iter()) {
        *o = ((p.0 - min_x) * s, (p.1 - min_y) * s);
    }
    Ok((t, out))
}

/// Ranges for random perspective generation on the unit square.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PerspectiveParams {
    /// Max corner displacement, as a fraction of the square side, per axis.
    pub corner_shift: f64,
    /// Max in-plane rotation magnitude in degrees, composed after the
    /// corner-displacement warp.
    pub rotation_deg: f64,
}

impl Default for PerspectiveParams {
    fn default() -> Self {
        Self {
            corner_shift: 0.15,
            rotation_deg: 30.0,
        }
    }
}

const UNIT_CORNERS: [(f64, f64); 4] = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)];

/// Random perspective on the unit square: the four corners are displaced by
/// i.i.d. uniform offsets and a global rotation about (0.5, 0.5) is composed
/// in. Resamples on near-singular draws, up to 100 attempts.
pub fn random_homography(seed: u64, params: &PerspectiveParams) -> Homography {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_homography_with(&mut rng, params)
}

/// As [`random_homography`] but drawing from a caller-provided rng.
pub fn random_homography_with<R: Rng>(rng: &mut R, params: &PerspectiveParams) -> Homography {
    for _ in 0..100 {
        let d = params.corner_shift;
        let mut dst = UNIT_CORNERS;
        if d > 0.0 {
            for corner in dst.iter_mut() {
                corner.0 += rng.gen_range(-d..=d);
                corner.1 += rng.gen_range(-d..=d);
            }
        }
        let rot = if params.rotation_deg > 0.0 {
            rng.gen_range(-params.rotation_deg..=params.rotation_deg)
        } else {
            0.0
        };
        let Ok(warp) = solve_dlt(&UNIT_CORNERS, &dst) else {
            continue;
        };
        let Ok(h) = Homography::rotation_about(0.5, 0.5, rot).compose(&warp) else {
            continue;
        };
        if h.determinant().abs() > 1e-6 && h.inverse().is_ok() {
            return h;
        }
    }
    panic!("random_homography failed to draw an invertible transform in 100 attempts");
}

/// Transfers a unit-square homography into the pixel frame of a
/// `size`×`size` image: `S · H · S⁻¹` with `S = diag(size, size, 1)`.
pub fn unit_square_to_pixel_frame(h: &Homography, size: u32) -> Homography {
    let s = size as f64;
    let scale = Homography::scale(s, s);
    let unscale = Homography::scale(1.0 / s, 1.0 / s);
    scale
        .compose(h)
        .and_then(|m| m.compose(&unscale))
        .expect("similarity conjugation preserves invertibility")
}

/// Warps an image by `h` into an `out_width`×`out_height` canvas.
///
/// Destination-sampled: each output pixel is bilinearly read from the source
/// at the inverse-mapped location; reads outside the source produce `fill`.
pub fn warp_image_filled(
    src: &RasterImage,
    h: &Homography,
    out_width: u32,
    out_height: u32,
    fill: [u8; 3],
) -> Result<RasterImage, HomographyError> {
    let inv = h.inverse()?;
    let mut out = RasterImage::new(out_width, out_height, fill).expect("nonempty output");
    for y in 0..out_height {
        for x in 0..out_width {
            match inv.project(x as f64, y as f64) {
                Some((sx, sy)) => {
                    let v = src.sample_bilinear(sx, sy, fill);
                    out.put(
                        x,
                        y,
                        [
                            v[0].round().clamp(0.0, 255.0) as u8,
                            v[1].round().clamp(0.0, 255.0) as u8,
                            v[2].round().clamp(0.0, 255.0) as u8,
                        ],
                    );
                }
                None => out.put(x, y, fill),
            }
        }
    }
    Ok(out)
}

/// [`warp_image_filled`] with a black fill.
pub fn warp_image(
    src: &RasterImage,
    h: &Homography,
    out_width: u32,
    out_height: u32,
) -> Result<RasterImage, HomographyError> {
    warp_image_filled(src, h, out_width, out_height, [0, 0, 0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn warp_point_examples() {
        let id = Homography::identity();
        assert_eq!(warp_point(&id, (5.0, 7.0)).unwrap(), (5.0, 7.0));

        let t = Homography::translation(3.0, -2.0);
        assert_eq!(warp_point(&t, (0.0, 0.0)).unwrap(), (3.0, -2.0));

        let s = Homography::scale(2.0, 2.0);
        assert_eq!(warp_point(&s, (1.0, 1.0)).unwrap(), (2.0, 2.0));
    }

    #[test]
    fn degenerate_point_reported() {
        // Row 3 = (1, 0, 0): the line x = 0 maps to infinity.
        let h = Homography::from_elements([1.0, 0.0, 0.5, 0.0, 1.0, 0.0, 1.0, 0.0, 1e-12])
            .err()
            .is_some();
        assert!(h, "h33 ~ 0 must be rejected at construction");
        let h =
            Homography::from_elements([1.0, 0.0, 0.5, 0.0, 1.0, 0.0, -1.0, 0.0, 1.0]).unwrap();
        assert!(matches!(
            warp_point(&h, (1.0, 0.0)),
            Err(HomographyError::DegeneratePoint(_, _))
        ));
    }

    #[test]
    fn inverse_roundtrips_points() {
        let h = Homography::from_elements([1.1, 0.1, 4.0, -0.05, 0.9, -2.0, 1e-4, -2e-4, 1.0])
            .unwrap();
        let inv = h.inverse().unwrap();
        for &(x, y) in &[(0.0, 0.0), (10.0, 5.0), (-3.0, 7.5), (100.0, 100.0)] {
            let (u, v) = warp_point(&h, (x, y)).unwrap();
            let (bx, by) = warp_point(&inv, (u, v)).unwrap();
            assert_relative_eq!(bx, x, epsilon = 1e-6);
            assert_relative_eq!(by, y, epsilon = 1e-6);
        }
    }

    #[test]
    fn normalize_identity_is_exact() {
        let n = normalize_to_unit_grid(&Homography::identity(), 224);
        assert_eq!(n.elements(), Homography::identity().elements());
    }

    #[test]
    fn normalize_roundtrip() {
        let h = Homography::from_elements([0.9, 0.2, 10.0, -0.1, 1.1, -6.0, 3e-4, 1e-4, 1.0])
            .unwrap();
        let back = denormalize_from_unit_grid(&normalize_to_unit_grid(&h, 224), 224);
        for (a, b) in back.elements().iter().zip(h.elements().iter()) {
            assert_relative_eq!(a, b, epsilon = 1e-9);
        }
    }

    #[test]
    fn normalize_respects_composition() {
        let h1 = Homography::from_elements([1.0, 0.1, 5.0, 0.0, 0.95, -3.0, 2e-4, 0.0, 1.0])
            .unwrap();
        let h2 = Homography::rotation_about(112.0, 112.0, 20.0);
        let lhs = normalize_to_unit_grid(&h1.compose(&h2).unwrap(), 224);
        let rhs = normalize_to_unit_grid(&h1, 224)
            .compose(&normalize_to_unit_grid(&h2, 224))
            .unwrap();
        for (a, b) in lhs.elements().iter().zip(rhs.elements().iter()) {
            assert_relative_eq!(a, b, epsilon = 1e-9);
        }
    }

    #[test]
    fn unit_grid_corner_maps_to_pixel_origin() {
        let l = Homography::unit_grid_to_pixels(224);
        assert_eq!(warp_point(&l, (-1.0, -1.0)).unwrap(), (0.0, 0.0));
        assert_eq!(warp_point(&l, (1.0, 1.0)).unwrap(), (224.0, 224.0));
    }

    #[test]
    fn dlt_examples() {
        let square = UNIT_CORNERS;
        let id = solve_dlt(&square, &square).unwrap();
        for (a, b) in id.elements().iter().zip(Homography::identity().elements()) {
            assert_relative_eq!(*a, b, epsilon = 1e-9);
        }

        let shifted = [(2.0, 1.0), (3.0, 1.0), (3.0, 2.0), (2.0, 2.0)];
        let t = solve_dlt(&square, &shifted).unwrap();
        for (a, b) in t
            .elements()
            .iter()
            .zip(Homography::translation(2.0, 1.0).elements())
        {
            assert_relative_eq!(*a, b, epsilon = 1e-9);
        }
    }

    #[test]
    fn dlt_random_quads_interpolate() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let jitter = |rng: &mut ChaCha8Rng| rng.gen_range(-0.2..0.2);
            let src = UNIT_CORNERS;
            let mut dst = UNIT_CORNERS;
            for c in dst.iter_mut() {
                c.0 += jitter(&mut rng);
                c.1 += jitter(&mut rng);
            }
            let h = solve_dlt(&src, &dst).unwrap();
            for k in 0..4 {
                let (u, v) = warp_point(&h, src[k]).unwrap();
                assert!((u - dst[k].0).abs() < 1e-6);
                assert!((v - dst[k].1).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn dlt_collinear_rejected() {
        let src = [(0.0, 0.0), (1.0, 1.0), (2.0, 2.0), (0.0, 1.0)];
        assert!(solve_dlt(&src, &UNIT_CORNERS).is_err());
    }

    #[test]
    fn random_homography_zero_displacement_is_identity() {
        let h = random_homography(
            1,
            &PerspectiveParams {
                corner_shift: 0.0,
                rotation_deg: 0.0,
            },
        );
        for (a, b) in h.elements().iter().zip(Homography::identity().elements()) {
            assert_relative_eq!(*a, b, epsilon = 1e-9);
        }
    }

    #[test]
    fn random_homography_deterministic() {
        let p = PerspectiveParams::default();
        assert_eq!(random_homography(42, &p).elements(), random_homography(42, &p).elements());
    }

    #[test]
    fn random_homography_bounded_corners() {
        let p = PerspectiveParams {
            corner_shift: 0.15,
            rotation_deg: 0.0,
        };
        for seed in 0..50 {
            let h = random_homography(seed, &p);
            for corner in UNIT_CORNERS {
                let (u, v) = warp_point(&h, corner).unwrap();
                assert!((u - corner.0).abs() <= 0.15 + 1e-6);
                assert!((v - corner.1).abs() <= 0.15 + 1e-6);
            }
        }
    }

    #[test]
    fn warp_image_identity_is_bit_exact() {
        let mut img = RasterImage::new(16, 12, [3, 4, 5]).unwrap();
        img.put(5, 7, [200, 20, 2]);
        img.put(0, 0, [9, 90, 200]);
        let out = warp_image(&img, &Homography::identity(), 16, 12).unwrap();
        assert_eq!(out, img);
    }

    #[test]
    fn warp_image_rotation_matches_pixel_rotation() {
        let mut img = RasterImage::new(20, 20, [240, 240, 240]).unwrap();
        // Asymmetric content.
        for x in 2..12 {
            img.put(x, 4, [10, 10, 10]);
        }
        for y in 4..17 {
            img.put(3, y, [80, 120, 10]);
        }
        let w = 20.0;
        // Clockwise quarter turn: (x, y) -> (w-1-y, x).
        let h = Homography::from_elements([0.0, -1.0, w - 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0])
            .unwrap();
        let warped = warp_image(&img, &h, 20, 20).unwrap();
        let rotated = img.rotate90_cw();
        for y in 0..20 {
            for x in 0..20 {
                let a = warped.get(x, y);
                let b = rotated.get(x, y);
                for c in 0..3 {
                    assert!(a[c].abs_diff(b[c]) <= 1, "mismatch at ({x},{y})");
                }
            }
        }
    }

    #[test]
    fn serde_canonicalizes_h33() {
        let h: Homography = serde_json::from_str("[2.0,0.0,0.0,0.0,2.0,0.0,0.0,0.0,2.0]").unwrap();
        assert_eq!(h.elements(), Homography::identity().elements());
        let bad: Result<Homography, _> =
            serde_json::from_str("[1.0,0.0,0.0,0.0,1.0,0.0,0.0,0.0,0.0]");
        assert!(bad.is_err());
    }
}
