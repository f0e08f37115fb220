//! Fronto-parallel clock rasterizer.
//!
//! The scene is painted into a 4× supersampled buffer (solid colors, hard
//! membership tests) and box-downsampled, which anti-aliases every edge
//! deterministically. Membership tests are written so that geometry placed
//! at mirrored angles produces bitwise-mirrored coverage: angles go through
//! the folded trig in `timecore` and all distances are computed from squared
//! terms that negate cleanly.

use crate::raster::RasterImage;
use crate::timecore::{clock_direction, hand_angles, ClockTime};

use super::font;
use super::style::{ClockStyle, FaceShape, HandStyle, NumeralStyle, TickMode, REFERENCE_CANVAS};

const SS: u32 = 4;

/// Supersampled paint target in canvas coordinates (pixel centers at
/// integers; subpixel (u, v) sits at 0.25·u − 0.375).
struct SuperCanvas {
    side: u32,
    ss_side: u32,
    data: Vec<[u8; 3]>,
}

impl SuperCanvas {
    fn new(side: u32, fill: [u8; 3]) -> Self {
        let ss_side = side * SS;
        Self {
            side,
            ss_side,
            data: vec![fill; (ss_side * ss_side) as usize],
        }
    }

    #[inline]
    fn coord(i: u32) -> f64 {
        0.25 * i as f64 - 0.375
    }

    /// Paints every subpixel inside the canvas-space bbox for which the
    /// predicate returns a color.
    fn paint<F: FnMut(f64, f64) -> Option<[u8; 3]>>(
        &mut self,
        x0: f64,
        y0: f64,
        x1: f64,
        y1: f64,
        mut shade: F,
    ) {
        let lo = |v: f64| (((v + 0.375) * 4.0).floor() as i64).max(0) as u32;
        let hi = |v: f64, max: u32| ((((v + 0.375) * 4.0).ceil() as i64).max(0) as u32).min(max);
        let (u0, u1) = (lo(x0), hi(x1, self.ss_side.saturating_sub(1)));
        let (v0, v1) = (lo(y0), hi(y1, self.ss_side.saturating_sub(1)));
        for v in v0..=v1 {
            let y = Self::coord(v);
            let row = (v * self.ss_side) as usize;
            for u in u0..=u1 {
                if let Some(c) = shade(Self::coord(u), y) {
                    self.data[row + u as usize] = c;
                }
            }
        }
    }

    /// Box downsample with round-to-nearest.
    fn resolve(&self) -> RasterImage {
        let mut out = RasterImage::new(self.side, self.side, [0, 0, 0]).expect("nonempty");
        for py in 0..self.side {
            for px in 0..self.side {
                let mut acc = [0u32; 3];
                for sy in 0..SS {
                    let row = ((py * SS + sy) * self.ss_side) as usize;
                    for sx in 0..SS {
                        let p = self.data[row + (px * SS + sx) as usize];
                        acc[0] += p[0] as u32;
                        acc[1] += p[1] as u32;
                        acc[2] += p[2] as u32;
                    }
                }
                out.put(
                    px,
                    py,
                    [
                        ((acc[0] + 8) / 16) as u8,
                        ((acc[1] + 8) / 16) as u8,
                        ((acc[2] + 8) / 16) as u8,
                    ],
                );
            }
        }
        out
    }
}

#[inline]
fn dist2_to_segment(px: f64, py: f64, ax: f64, ay: f64, bx: f64, by: f64) -> f64 {
    let dx = bx - ax;
    let dy = by - ay;
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 {
        (((px - ax) * dx + (py - ay) * dy) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let cx = ax + t * dx;
    let cy = ay + t * dy;
    let ex = px - cx;
    let ey = py - cy;
    ex * ex + ey * ey
}

#[inline]
fn in_triangle(px: f64, py: f64, a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> bool {
    let cross = |o: (f64, f64), p: (f64, f64), q: (f64, f64)| {
        (p.0 - o.0) * (q.1 - o.1) - (p.1 - o.1) * (q.0 - o.0)
    };
    let d1 = cross(a, b, (px, py));
    let d2 = cross(b, c, (px, py));
    let d3 = cross(c, a, (px, py));
    let has_neg = d1 < 0.0 || d2 < 0.0 || d3 < 0.0;
    let has_pos = d1 > 0.0 || d2 > 0.0 || d3 > 0.0;
    !(has_neg && has_pos)
}

/// Face geometry in canvas units, derived from style and render size.
pub(crate) struct FaceGeometry {
    pub cx: f64,
    pub cy: f64,
    /// Nominal radius: half of face_size × canvas.
    pub radius: f64,
    /// Inradius = min distance from center to the face boundary; hand
    /// lengths scale against this so the minute hand stays the longest
    /// drawn hand for every face shape.
    pub inradius: f64,
    shape: FaceShape,
    /// Scale from 224-reference pixels to canvas pixels.
    pub px: f64,
}

impl FaceGeometry {
    pub fn of(style: &ClockStyle, size: u32) -> Self {
        let cx = (size - 1) as f64 / 2.0;
        let radius = style.face_size * size as f64 / 2.0;
        let inradius = match style.face_shape {
            FaceShape::Circle => radius,
            FaceShape::Ellipse => ELLIPSE_RATIO * radius,
            FaceShape::RoundedSquare => RSQ_HALF_RATIO * radius,
        };
        Self {
            cx,
            cy: cx,
            radius,
            inradius,
            shape: style.face_shape,
            px: size as f64 / REFERENCE_CANVAS as f64,
        }
    }

    /// Distance from the center to the face outline along a clock direction.
    pub fn boundary_radius(&self, angle_deg: f64) -> f64 {
        let (dx, dy) = clock_direction(angle_deg);
        match self.shape {
            FaceShape::Circle => self.radius,
            FaceShape::Ellipse => {
                let a = self.radius;
                let b = ELLIPSE_RATIO * self.radius;
                1.0 / ((dx / a) * (dx / a) + (dy / b) * (dy / b)).sqrt()
            }
            FaceShape::RoundedSquare => {
                // Monotone SDF along the ray: bisect to the zero crossing.
                let half = RSQ_HALF_RATIO * self.radius;
                let corner = RSQ_CORNER_RATIO * half;
                let sdf = |r: f64| rsq_sdf(r * dx, r * dy, half, corner);
                let mut lo = 0.0;
                let mut hi = half * 1.6;
                for _ in 0..48 {
                    let mid = 0.5 * (lo + hi);
                    if sdf(mid) <= 0.0 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                0.5 * (lo + hi)
            }
        }
    }

    pub fn point_at(&self, angle_deg: f64, r: f64) -> (f64, f64) {
        let (dx, dy) = clock_direction(angle_deg);
        (self.cx + r * dx, self.cy + r * dy)
    }
}

const ELLIPSE_RATIO: f64 = 0.8;
const RSQ_HALF_RATIO: f64 = 0.92;
const RSQ_CORNER_RATIO: f64 = 0.3;

/// Signed distance to a rounded square centered at the origin.
fn rsq_sdf(dx: f64, dy: f64, half: f64, corner: f64) -> f64 {
    let qx = dx.abs() - (half - corner);
    let qy = dy.abs() - (half - corner);
    let ox = qx.max(0.0);
    let oy = qy.max(0.0);
    (ox * ox + oy * oy).sqrt() + qx.max(qy).min(0.0) - corner
}

fn paint_face(canvas: &mut SuperCanvas, geo: &FaceGeometry, style: &ClockStyle) {
    let bt = style.border_thickness * geo.px;
    let (cx, cy) = (geo.cx, geo.cy);
    let reach = geo.radius + 1.0;
    let face = style.face_color;
    let border = style.border_color;
    match geo.shape {
        FaceShape::Circle => {
            let r_out2 = geo.radius * geo.radius;
            let r_in = (geo.radius - bt).max(0.0);
            let r_in2 = r_in * r_in;
            canvas.paint(cx - reach, cy - reach, cx + reach, cy + reach, |x, y| {
                let dx = x - cx;
                let dy = y - cy;
                let d2 = dx * dx + dy * dy;
                if d2 > r_out2 {
                    None
                } else if d2 > r_in2 {
                    Some(border)
                } else {
                    Some(face)
                }
            });
        }
        FaceShape::Ellipse => {
            let a = geo.radius;
            let b = ELLIPSE_RATIO * geo.radius;
            let (ai, bi) = ((a - bt).max(0.0), (b - bt).max(0.0));
            canvas.paint(cx - reach, cy - reach, cx + reach, cy + reach, |x, y| {
                let dx = x - cx;
                let dy = y - cy;
                let outer = (dx / a) * (dx / a) + (dy / b) * (dy / b);
                if outer > 1.0 {
                    return None;
                }
                let inner = if ai > 0.0 && bi > 0.0 {
                    (dx / ai) * (dx / ai) + (dy / bi) * (dy / bi)
                } else {
                    2.0
                };
                if inner > 1.0 {
                    Some(border)
                } else {
                    Some(face)
                }
            });
        }
        FaceShape::RoundedSquare => {
            let half = RSQ_HALF_RATIO * geo.radius;
            let corner = RSQ_CORNER_RATIO * half;
            canvas.paint(cx - reach, cy - reach, cx + reach, cy + reach, |x, y| {
                let s = rsq_sdf(x - cx, y - cy, half, corner);
                if s > 0.0 {
                    None
                } else if s > -bt {
                    Some(border)
                } else {
                    Some(face)
                }
            });
        }
    }
}

fn paint_capsule(canvas: &mut SuperCanvas, a: (f64, f64), b: (f64, f64), half_w: f64, color: [u8; 3]) {
    let pad = half_w + 0.5;
    let (x0, x1) = (a.0.min(b.0) - pad, a.0.max(b.0) + pad);
    let (y0, y1) = (a.1.min(b.1) - pad, a.1.max(b.1) + pad);
    let hw2 = half_w * half_w;
    canvas.paint(x0, y0, x1, y1, |x, y| {
        if dist2_to_segment(x, y, a.0, a.1, b.0, b.1) <= hw2 {
            Some(color)
        } else {
            None
        }
    });
}

fn paint_triangle(canvas: &mut SuperCanvas, a: (f64, f64), b: (f64, f64), c: (f64, f64), color: [u8; 3]) {
    let xs = [a.0, b.0, c.0];
    let ys = [a.1, b.1, c.1];
    let min = |v: [f64; 3]| v.iter().fold(f64::INFINITY, |m, &x| m.min(x));
    let max = |v: [f64; 3]| v.iter().fold(f64::NEG_INFINITY, |m, &x| m.max(x));
    canvas.paint(min(xs) - 0.5, min(ys) - 0.5, max(xs) + 0.5, max(ys) + 0.5, |x, y| {
        if in_triangle(x, y, a, b, c) {
            Some(color)
        } else {
            None
        }
    });
}

fn paint_ticks(canvas: &mut SuperCanvas, geo: &FaceGeometry, style: &ClockStyle) {
    let (count, step_deg) = match style.tick_mode {
        TickMode::None => return,
        TickMode::HourOnly => (12u32, 30.0),
        TickMode::EveryMinute => (60u32, 6.0),
    };
    let bt = style.border_thickness * geo.px;
    for k in 0..count {
        let angle = step_deg * k as f64;
        let is_hour_mark = style.tick_mode == TickMode::EveryMinute && k % 5 == 0;
        let len = style.tick_length * geo.px * if is_hour_mark { 1.6 } else { 1.0 };
        let half_w = 0.5 * style.tick_thickness * geo.px * if is_hour_mark { 1.5 } else { 1.0 };
        let outer_r = geo.boundary_radius(angle) - bt - style.tick_gap * geo.px;
        let inner_r = (outer_r - len).max(0.0);
        if outer_r <= 0.0 {
            continue;
        }
        let a = geo.point_at(angle, inner_r);
        let b = geo.point_at(angle, outer_r);
        paint_capsule(canvas, a, b, half_w, style.tick_color);
    }
}

fn paint_text(
    canvas: &mut SuperCanvas,
    text: &str,
    center: (f64, f64),
    height: f64,
    stroke_w: f64,
    color: [u8; 3],
) {
    let total_w = font::text_width(text) * height;
    let mut pen_x = center.0 - total_w / 2.0;
    let base_y = center.1 + height / 2.0;
    for ch in text.chars() {
        let Some(g) = font::glyph(ch) else { continue };
        for stroke in g.strokes {
            for pair in stroke.windows(2) {
                let (x0, y0) = pair[0];
                let (x1, y1) = pair[1];
                paint_capsule(
                    canvas,
                    (pen_x + x0 * height, base_y - y0 * height),
                    (pen_x + x1 * height, base_y - y1 * height),
                    stroke_w / 2.0,
                    color,
                );
            }
        }
        pen_x += (g.width + font::LETTER_SPACING) * height;
    }
}

fn paint_numerals(canvas: &mut SuperCanvas, geo: &FaceGeometry, style: &ClockStyle) {
    if style.numerals == NumeralStyle::None {
        return;
    }
    let bt = style.border_thickness * geo.px;
    let height = style.font_size * geo.px;
    let stroke = style.font_thickness * geo.px;
    for n in 1..=12u8 {
        let angle = 30.0 * n as f64;
        let r = geo.boundary_radius(angle) - bt - style.numeral_gap * geo.px - height / 2.0;
        if r <= 0.0 {
            continue;
        }
        let center = geo.point_at(angle, r);
        let label = match style.numerals {
            NumeralStyle::Arabic => n.to_string(),
            NumeralStyle::Roman => font::roman(n).to_string(),
            NumeralStyle::None => unreachable!(),
        };
        paint_text(canvas, &label, center, height, stroke, style.numeral_color);
    }
}

fn paint_hand(canvas: &mut SuperCanvas, geo: &FaceGeometry, hand: &HandStyle, angle_deg: f64) {
    let len = hand.length * geo.inradius;
    let back = hand.back_length * geo.inradius;
    let tip = geo.point_at(angle_deg, len);
    let tail = geo.point_at(angle_deg, -back);
    paint_capsule(canvas, tail, tip, hand.thickness * geo.px / 2.0, hand.color);
    if hand.arrow && hand.arrow_tip_length > 0.0 {
        let apex = geo.point_at(angle_deg, len + hand.arrow_tip_length * geo.px);
        let (dx, dy) = clock_direction(angle_deg);
        // Perpendicular in-plane, scaled to half the arrow width.
        let half = hand.arrow_size * geo.px / 2.0;
        let b = (tip.0 - dy * half, tip.1 + dx * half);
        let c = (tip.0 + dy * half, tip.1 - dx * half);
        paint_triangle(canvas, apex, b, c, hand.color);
    }
}

/// Renders a fronto-parallel clock: '12' at the top, hands at the angles the
/// time dictates, extra hands (if styled) at their fixed recorded angles.
/// Deterministic in all inputs.
pub fn render_clock(style: &ClockStyle, time: ClockTime, size: u32) -> RasterImage {
    assert!(size >= 16, "canvas too small to draw a clock");
    let geo = FaceGeometry::of(style, size);
    let mut canvas = SuperCanvas::new(size, style.background_color);

    paint_face(&mut canvas, &geo, style);
    paint_ticks(&mut canvas, &geo, style);
    paint_numerals(&mut canvas, &geo, style);

    let angles = hand_angles(time);
    if let Some(alarm) = &style.alarm_hand {
        paint_hand(&mut canvas, &geo, &alarm.style, alarm.angle_deg);
    }
    paint_hand(&mut canvas, &geo, &style.hour_hand, angles.hour_deg());
    paint_hand(&mut canvas, &geo, &style.minute_hand, angles.minute_deg());
    if let Some(second) = &style.second_hand {
        paint_hand(&mut canvas, &geo, &second.style, second.angle_deg);
    }

    canvas.resolve()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synclock::style::{simple_style, StylePreset};
    use crate::synclock::sample_style;

    fn t(h: u8, m: u8) -> ClockTime {
        ClockTime::new(h, m).unwrap()
    }

    /// Dark-run length in pixels walking from the center along a clock
    /// direction, with a one-sample gap tolerance for anti-aliased borders.
    fn dark_run(img: &RasterImage, cx: f64, cy: f64, angle: f64, max_r: f64, thresh: f64) -> f64 {
        let (dx, dy) = clock_direction(angle);
        let mut last_dark = 0.0;
        let mut gap = 0;
        let mut r = 1.0;
        while r <= max_r {
            let l = img.sample_luma1000(cx + r * dx, cy + r * dy, 255_000.0);
            if l < thresh {
                last_dark = r;
                gap = 0;
            } else {
                gap += 1;
                if gap > 2 {
                    break;
                }
            }
            r += 1.0;
        }
        last_dark
    }

    #[test]
    fn six_oclock_hands_lie_on_the_vertical_axis() {
        let style = simple_style();
        let img = render_clock(&style, t(6, 0), 224);
        let c = 111.5;
        let geo_r = 0.85 * 112.0;
        let thresh = 130_000.0;
        // Minute hand points up (0°), hour hand points down (180°).
        let up = dark_run(&img, c, c, 0.0, geo_r, thresh);
        let down = dark_run(&img, c, c, 180.0, geo_r, thresh);
        let right = dark_run(&img, c, c, 90.0, geo_r, thresh);
        assert!(up > 0.75 * geo_r, "minute run {up}");
        assert!(down > 0.40 * geo_r && down < 0.62 * geo_r, "hour run {down}");
        assert!(right < 0.25 * geo_r, "no hand to the right, got {right}");
    }

    #[test]
    fn mirror_symmetry_at_quarter_hours() {
        let mut style = simple_style();
        style.numerals = NumeralStyle::None;
        let a = render_clock(&style, t(3, 0), 224);
        let b = render_clock(&style, t(9, 0), 224);
        let mut max_diff = 0u8;
        for y in 0..224 {
            for x in 0..224 {
                let pa = a.get(x, y);
                let pb = b.get(223 - x, y);
                for c in 0..3 {
                    max_diff = max_diff.max(pa[c].abs_diff(pb[c]));
                }
            }
        }
        assert!(max_diff <= 1, "mirror asymmetry of {max_diff} gray levels");
    }

    #[test]
    fn rendering_is_deterministic() {
        let style = sample_style(7, StylePreset::Full);
        let a = render_clock(&style, t(10, 31), 224);
        let b = render_clock(&style, t(10, 31), 224);
        assert_eq!(a, b);
    }

    #[test]
    fn all_shapes_render_without_panic() {
        for seed in 0..12 {
            let style = sample_style(seed, StylePreset::Full);
            let img = render_clock(&style, t(4, 45), 128);
            assert_eq!((img.width(), img.height()), (128, 128));
        }
    }
}
