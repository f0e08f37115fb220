//! Hand shadows and random clutter lines.
//!
//! Artefacts are applied to an already-rendered frame at final resolution
//! with hard (aliased) rasterization: a pixel is touched iff its center lies
//! within half the stroke thickness of the segment. That makes the changed
//! pixel set exactly enumerable, which the tests rely on.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::raster::RasterImage;
use crate::timecore::{hand_angles, ClockTime};

use super::render::FaceGeometry;
use super::style::{ClockStyle, HandKind};

/// One straight clutter line in canvas pixel coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineArtefact {
    pub start: [f64; 2],
    pub end: [f64; 2],
    pub thickness: f64,
    pub color: [u8; 3],
}

/// A hand silhouette re-drawn at an offset and alpha-blended toward black.
///
/// Carries the resolved capsule of the source hand (center-anchored) so the
/// spec is self-contained: re-applying it to the same frame is exact without
/// access to the style that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HandShadow {
    pub hand: HandKind,
    pub angle_deg: f64,
    pub length_px: f64,
    pub back_px: f64,
    pub thickness_px: f64,
    pub center: [f64; 2],
    pub offset: [f64; 2],
    pub opacity: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ArtefactSpec {
    pub shadow: Option<HandShadow>,
    pub lines: Vec<LineArtefact>,
}

impl ArtefactSpec {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.shadow.is_none() && self.lines.is_empty()
    }

    pub fn validate(&self, canvas: u32) -> Result<(), String> {
        if let Some(s) = &self.shadow {
            if !(s.opacity > 0.0 && s.opacity <= 1.0) {
                return Err(format!("shadow opacity {} outside (0, 1]", s.opacity));
            }
        }
        if self.lines.len() > 5 {
            return Err(format!("{} clutter lines exceed the maximum of 5", self.lines.len()));
        }
        let half = canvas as f64 / 2.0;
        let reach = 1.5 * canvas as f64 / 2.0;
        for l in &self.lines {
            for p in [l.start, l.end] {
                if (p[0] - half).abs() > reach || (p[1] - half).abs() > reach {
                    return Err("line endpoint outside 1.5x canvas bounds".into());
                }
            }
        }
        Ok(())
    }

    /// Draws a random artefact configuration for a rendered clock: maybe a
    /// shadow beside one of the present hands, plus 0–5 clutter lines.
    pub fn sample<R: Rng>(rng: &mut R, style: &ClockStyle, time: ClockTime, canvas: u32) -> Self {
        let ranges = super::style::style_ranges();
        let geo = FaceGeometry::of(style, canvas);
        let angles = hand_angles(time);

        let shadow = if rng.gen_bool(ranges.shadow.prob) {
            let kinds = style.hand_kinds();
            let kind = kinds[rng.gen_range(0..kinds.len())];
            let (hand, angle) = match kind {
                HandKind::Hour => (&style.hour_hand, angles.hour_deg()),
                HandKind::Minute => (&style.minute_hand, angles.minute_deg()),
                HandKind::Second => {
                    let h = style.second_hand.as_ref().expect("present");
                    (&h.style, h.angle_deg)
                }
                HandKind::Alarm => {
                    let h = style.alarm_hand.as_ref().expect("present");
                    (&h.style, h.angle_deg)
                }
            };
            let mag = |rng: &mut R| {
                let m = rng.gen_range(ranges.shadow.offset.0..=ranges.shadow.offset.1);
                if rng.gen_bool(0.5) {
                    m
                } else {
                    -m
                }
            };
            Some(HandShadow {
                hand: kind,
                angle_deg: angle,
                length_px: hand.length * geo.inradius,
                back_px: hand.back_length * geo.inradius,
                thickness_px: hand.thickness * geo.px,
                center: [geo.cx, geo.cy],
                offset: [mag(rng), mag(rng)],
                opacity: rng.gen_range(ranges.shadow.opacity.0..=ranges.shadow.opacity.1),
            })
        } else {
            None
        };

        let count = rng.gen_range(0..=ranges.lines.max_count);
        let span = canvas as f64;
        let mut lines = Vec::with_capacity(count as usize);
        for _ in 0..count {
            lines.push(LineArtefact {
                start: [
                    rng.gen_range(-0.25 * span..=1.25 * span),
                    rng.gen_range(-0.25 * span..=1.25 * span),
                ],
                end: [
                    rng.gen_range(-0.25 * span..=1.25 * span),
                    rng.gen_range(-0.25 * span..=1.25 * span),
                ],
                thickness: rng.gen_range(ranges.lines.thickness.0..=ranges.lines.thickness.1),
                color: [rng.gen(), rng.gen(), rng.gen()],
            });
        }

        Self { shadow, lines }
    }
}

#[inline]
fn dist2_to_segment(px: f64, py: f64, a: [f64; 2], b: [f64; 2]) -> f64 {
    let dx = b[0] - a[0];
    let dy = b[1] - a[1];
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 {
        (((px - a[0]) * dx + (py - a[1]) * dy) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let ex = px - (a[0] + t * dx);
    let ey = py - (a[1] + t * dy);
    ex * ex + ey * ey
}

fn for_segment_pixels<F: FnMut(u32, u32)>(
    img: &RasterImage,
    a: [f64; 2],
    b: [f64; 2],
    half_w: f64,
    mut visit: F,
) {
    let pad = half_w + 1.0;
    let x0 = ((a[0].min(b[0]) - pad).floor().max(0.0)) as u32;
    let y0 = ((a[1].min(b[1]) - pad).floor().max(0.0)) as u32;
    let x1 = ((a[0].max(b[0]) + pad).ceil().min((img.width() - 1) as f64)) as u32;
    let y1 = ((a[1].max(b[1]) + pad).ceil().min((img.height() - 1) as f64)) as u32;
    let hw2 = half_w * half_w;
    for y in y0..=y1 {
        for x in x0..=x1 {
            if dist2_to_segment(x as f64, y as f64, a, b) <= hw2 {
                visit(x, y);
            }
        }
    }
}

/// Applies a spec to a frame: shadow first (blended toward black), then the
/// clutter lines painted opaquely on top. Pure in (image, spec).
pub fn apply_artefacts(img: &RasterImage, spec: &ArtefactSpec) -> RasterImage {
    let mut out = img.clone();
    if let Some(s) = &spec.shadow {
        let (dx, dy) = crate::timecore::clock_direction(s.angle_deg);
        let base = [s.center[0] + s.offset[0], s.center[1] + s.offset[1]];
        let tail = [base[0] - s.back_px * dx, base[1] - s.back_px * dy];
        let tip = [base[0] + s.length_px * dx, base[1] + s.length_px * dy];
        let keep = 1.0 - s.opacity;
        for_segment_pixels(img, tail, tip, s.thickness_px / 2.0, |x, y| {
            let p = out.get(x, y);
            out.put(
                x,
                y,
                [
                    (p[0] as f64 * keep).round() as u8,
                    (p[1] as f64 * keep).round() as u8,
                    (p[2] as f64 * keep).round() as u8,
                ],
            );
        });
    }
    for l in &spec.lines {
        for_segment_pixels(img, l.start, l.end, l.thickness / 2.0, |x, y| {
            out.put(x, y, l.color);
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synclock::style::simple_style;

    #[test]
    fn empty_spec_is_identity() {
        let mut img = RasterImage::new(32, 32, [120, 130, 140]).unwrap();
        img.put(5, 6, [1, 2, 3]);
        assert_eq!(apply_artefacts(&img, &ArtefactSpec::empty()), img);
    }

    #[test]
    fn line_changes_exactly_the_capsule_pixels() {
        let img = RasterImage::new(48, 48, [200, 200, 200]).unwrap();
        let line = LineArtefact {
            start: [10.0, 10.0],
            end: [38.0, 30.0],
            thickness: 2.0,
            color: [10, 20, 30],
        };
        let spec = ArtefactSpec {
            shadow: None,
            lines: vec![line],
        };
        let out = apply_artefacts(&img, &spec);
        for y in 0..48u32 {
            for x in 0..48u32 {
                let d2 = dist2_to_segment(x as f64, y as f64, line.start, line.end);
                let changed = out.get(x, y) != img.get(x, y);
                assert_eq!(
                    changed,
                    d2 <= 1.0,
                    "pixel ({x},{y}) at distance {} wrong",
                    d2.sqrt()
                );
                if changed {
                    assert_eq!(out.get(x, y), [10, 20, 30]);
                }
            }
        }
    }

    #[test]
    fn full_opacity_shadow_is_black_on_the_silhouette() {
        let style = simple_style();
        let time = ClockTime::new(10, 31).unwrap();
        let img = crate::synclock::render_clock(&style, time, 224);
        let geo_r = 0.85 * 112.0;
        let shadow = HandShadow {
            hand: HandKind::Minute,
            angle_deg: hand_angles(time).minute_deg(),
            length_px: style.minute_hand.length * geo_r,
            back_px: style.minute_hand.back_length * geo_r,
            thickness_px: style.minute_hand.thickness,
            center: [111.5, 111.5],
            offset: [8.0, 5.0],
            opacity: 1.0,
        };
        let spec = ArtefactSpec {
            shadow: Some(shadow),
            lines: vec![],
        };
        let out = apply_artefacts(&img, &spec);
        // Every silhouette pixel must be exactly black.
        let (dx, dy) = crate::timecore::clock_direction(shadow.angle_deg);
        let base = [111.5 + 8.0, 111.5 + 5.0];
        let tip = [base[0] + shadow.length_px * dx, base[1] + shadow.length_px * dy];
        let tail = [base[0] - shadow.back_px * dx, base[1] - shadow.back_px * dy];
        let mut covered = 0;
        for_segment_pixels(&img, tail, tip, shadow.thickness_px / 2.0, |x, y| {
            assert_eq!(out.get(x, y), [0, 0, 0]);
            covered += 1;
        });
        assert!(covered > 50, "silhouette unexpectedly small: {covered}");
    }

    #[test]
    fn sampled_specs_validate() {
        use rand_chacha::rand_core::SeedableRng;
        let style = simple_style();
        let time = ClockTime::new(4, 45).unwrap();
        for seed in 0..200 {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let spec = ArtefactSpec::sample(&mut rng, &style, time, 224);
            spec.validate(224).unwrap();
            assert!(spec.lines.len() <= 5);
        }
    }
}
