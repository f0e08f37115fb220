//! Clock style parameters and their sampling.
//!
//! Every visual knob of the generator lives in [`ClockStyle`]. The `full`
//! preset draws each field uniformly from the ranges in
//! `data/style_ranges.json` (versioned and shipped with the crate); the
//! `simple` preset is one fixed clean design used by the geometric-reader
//! tests. Pixel-valued fields are expressed at the 224-pixel reference
//! canvas and scale with the render size.

use std::sync::OnceLock;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Reference canvas side all pixel-valued style fields are expressed at.
pub const REFERENCE_CANVAS: u32 = 224;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FaceShape {
    Circle,
    RoundedSquare,
    Ellipse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TickMode {
    None,
    HourOnly,
    EveryMinute,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NumeralStyle {
    None,
    Arabic,
    Roman,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HandKind {
    Hour,
    Minute,
    Second,
    Alarm,
}

/// Appearance of one hand. Lengths are fractions of the face radius,
/// thickness and arrow dimensions are reference-canvas pixels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HandStyle {
    pub length: f64,
    pub back_length: f64,
    pub thickness: f64,
    pub color: [u8; 3],
    pub arrow: bool,
    pub arrow_tip_length: f64,
    pub arrow_size: f64,
}

/// An extra (unlabeled) hand: its style plus the fixed angle it is drawn at.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtraHand {
    pub style: HandStyle,
    pub angle_deg: f64,
}

/// The full parameter vector controlling one synthetic clock's appearance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClockStyle {
    pub background_color: [u8; 3],
    pub face_size: f64,
    pub face_shape: FaceShape,
    pub face_color: [u8; 3],
    pub border_thickness: f64,
    pub border_color: [u8; 3],
    pub tick_mode: TickMode,
    pub tick_gap: f64,
    pub tick_length: f64,
    pub tick_thickness: f64,
    pub tick_color: [u8; 3],
    pub numerals: NumeralStyle,
    pub numeral_gap: f64,
    pub font_size: f64,
    pub font_thickness: f64,
    pub numeral_color: [u8; 3],
    pub hour_hand: HandStyle,
    pub minute_hand: HandStyle,
    pub second_hand: Option<ExtraHand>,
    pub alarm_hand: Option<ExtraHand>,
}

impl ClockStyle {
    /// Hands present in draw order (alarm under hour under minute under second).
    pub fn hand_kinds(&self) -> Vec<HandKind> {
        let mut kinds = vec![HandKind::Hour, HandKind::Minute];
        if self.second_hand.is_some() {
            kinds.push(HandKind::Second);
        }
        if self.alarm_hand.is_some() {
            kinds.push(HandKind::Alarm);
        }
        kinds
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(0.5..=0.95).contains(&self.face_size) {
            return Err(format!("face_size {} outside [0.5, 0.95]", self.face_size));
        }
        if self.minute_hand.length < self.hour_hand.length + 0.1 {
            return Err("minute hand must be at least 10% of the radius longer".into());
        }
        for h in [&self.hour_hand, &self.minute_hand] {
            if h.length <= 0.0 || h.thickness <= 0.0 {
                return Err("hand lengths and thicknesses must be positive".into());
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StylePreset {
    Simple,
    Full,
}

impl std::str::FromStr for StylePreset {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "simple" => Ok(StylePreset::Simple),
            "full" => Ok(StylePreset::Full),
            other => Err(format!("unknown preset '{other}' (expected simple|full)")),
        }
    }
}

// ---------------------------------------------------------------------------
// Sampling ranges (versioned config embedded at build time)
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Deserialize)]
pub struct HandRanges {
    #[serde(default)]
    pub present_prob: f64,
    pub length: (f64, f64),
    pub back_length: (f64, f64),
    pub thickness: (f64, f64),
    pub arrow_prob: f64,
    pub arrow_tip_length: (f64, f64),
    pub arrow_size: (f64, f64),
}

#[derive(Debug, Clone, Deserialize)]
pub struct ShadowRanges {
    pub prob: f64,
    pub offset: (f64, f64),
    pub opacity: (f64, f64),
}

#[derive(Debug, Clone, Deserialize)]
pub struct LineRanges {
    pub max_count: u32,
    pub thickness: (f64, f64),
}

#[derive(Debug, Clone, Deserialize)]
pub struct AugmentRanges {
    pub sigma: (f64, f64),
    pub gain: (f64, f64),
    pub bias: (f64, f64),
}

#[derive(Debug, Clone, Deserialize)]
pub struct StyleRanges {
    pub format_version: String,
    pub face_size: (f64, f64),
    pub border_thickness: (f64, f64),
    pub tick_gap: (f64, f64),
    pub tick_length: (f64, f64),
    pub tick_thickness: (f64, f64),
    pub numeral_gap: (f64, f64),
    pub font_size: (f64, f64),
    pub font_thickness: (f64, f64),
    pub hour_hand: HandRanges,
    pub minute_hand: HandRanges,
    pub second_hand: HandRanges,
    pub alarm_hand: HandRanges,
    pub shadow: ShadowRanges,
    pub lines: LineRanges,
    pub augment: AugmentRanges,
}

static RANGES: OnceLock<StyleRanges> = OnceLock::new();

/// The shipped sampling ranges.
pub fn style_ranges() -> &'static StyleRanges {
    RANGES.get_or_init(|| {
        let raw = include_str!("../../data/style_ranges.json");
        let ranges: StyleRanges =
            serde_json::from_str(raw).expect("embedded style_ranges.json is valid");
        // The reader's hand disambiguation depends on this gap.
        assert!(
            ranges.minute_hand.length.0 >= ranges.hour_hand.length.1 + 0.1,
            "minute hand range must stay >= 10% radius above the hour hand range"
        );
        ranges
    })
}

fn uniform<R: Rng>(rng: &mut R, range: (f64, f64)) -> f64 {
    if range.0 == range.1 {
        range.0
    } else {
        rng.gen_range(range.0..=range.1)
    }
}

fn color<R: Rng>(rng: &mut R) -> [u8; 3] {
    [rng.gen(), rng.gen(), rng.gen()]
}

fn hand<R: Rng>(rng: &mut R, r: &HandRanges, color_rgb: [u8; 3]) -> HandStyle {
    HandStyle {
        length: uniform(rng, r.length),
        back_length: uniform(rng, r.back_length),
        thickness: uniform(rng, r.thickness),
        color: color_rgb,
        arrow: rng.gen_bool(r.arrow_prob),
        arrow_tip_length: uniform(rng, r.arrow_tip_length),
        arrow_size: uniform(rng, r.arrow_size),
    }
}

/// Samples a style deterministically from a seed.
pub fn sample_style(seed: u64, preset: StylePreset) -> ClockStyle {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_style_with(&mut rng, preset)
}

/// Samples a style from a caller-provided rng stream.
pub fn sample_style_with<R: Rng>(rng: &mut R, preset: StylePreset) -> ClockStyle {
    match preset {
        StylePreset::Simple => simple_style(),
        StylePreset::Full => full_style(rng),
    }
}

fn full_style<R: Rng>(rng: &mut R) -> ClockStyle {
    let r = style_ranges();
    let face_shape = match rng.gen_range(0..3) {
        0 => FaceShape::Circle,
        1 => FaceShape::RoundedSquare,
        _ => FaceShape::Ellipse,
    };
    let tick_mode = match rng.gen_range(0..3) {
        0 => TickMode::None,
        1 => TickMode::HourOnly,
        _ => TickMode::EveryMinute,
    };
    let numerals = match rng.gen_range(0..3) {
        0 => NumeralStyle::None,
        1 => NumeralStyle::Arabic,
        _ => NumeralStyle::Roman,
    };
    // Hand color shared across hour/minute most of the time, like real clocks.
    let main_hand_color = color(rng);
    let style = ClockStyle {
        background_color: color(rng),
        face_size: uniform(rng, r.face_size),
        face_shape,
        face_color: color(rng),
        border_thickness: uniform(rng, r.border_thickness),
        border_color: color(rng),
        tick_mode,
        tick_gap: uniform(rng, r.tick_gap),
        tick_length: uniform(rng, r.tick_length),
        tick_thickness: uniform(rng, r.tick_thickness),
        tick_color: color(rng),
        numerals,
        numeral_gap: uniform(rng, r.numeral_gap),
        font_size: uniform(rng, r.font_size),
        font_thickness: uniform(rng, r.font_thickness),
        numeral_color: color(rng),
        hour_hand: hand(rng, &r.hour_hand, main_hand_color),
        minute_hand: hand(rng, &r.minute_hand, main_hand_color),
        second_hand: if rng.gen_bool(r.second_hand.present_prob) {
            let c = color(rng);
            Some(ExtraHand {
                style: hand(rng, &r.second_hand, c),
                angle_deg: rng.gen_range(0.0..360.0),
            })
        } else {
            None
        },
        alarm_hand: if rng.gen_bool(r.alarm_hand.present_prob) {
            let c = color(rng);
            Some(ExtraHand {
                style: hand(rng, &r.alarm_hand, c),
                angle_deg: rng.gen_range(0.0..360.0),
            })
        } else {
            None
        },
    };
    debug_assert!(style.validate().is_ok());
    style
}

/// The fixed clean design: white circular face, black hour/minute hands,
/// every-minute ticks, arabic numerals, no extra hands. Color levels keep
/// at least 10 gray levels of headroom so a ±10 brightness jitter never
/// clips.
pub fn simple_style() -> ClockStyle {
    let dark = [25, 25, 25];
    let ink = [40, 40, 40];
    ClockStyle {
        background_color: [190, 190, 190],
        face_size: 0.85,
        face_shape: FaceShape::Circle,
        face_color: [242, 242, 242],
        border_thickness: 4.0,
        border_color: ink,
        tick_mode: TickMode::EveryMinute,
        tick_gap: 4.0,
        tick_length: 6.0,
        tick_thickness: 1.6,
        tick_color: ink,
        numerals: NumeralStyle::Arabic,
        numeral_gap: 14.0,
        font_size: 18.0,
        font_thickness: 2.0,
        numeral_color: ink,
        hour_hand: HandStyle {
            length: 0.5,
            back_length: 0.1,
            thickness: 6.0,
            color: dark,
            arrow: false,
            arrow_tip_length: 0.0,
            arrow_size: 0.0,
        },
        minute_hand: HandStyle {
            length: 0.82,
            back_length: 0.1,
            thickness: 4.4,
            color: dark,
            arrow: false,
            arrow_tip_length: 0.0,
            arrow_size: 0.0,
        },
        second_hand: None,
        alarm_hand: None,
    }
}
