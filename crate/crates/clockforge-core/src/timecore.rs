//! Time representation, 720-way class encoding, and hand-angle geometry.
//!
//! A clock face shows one of 720 distinguishable times (12 hours × 60
//! minutes). [`TimeClass`] is the flat index `hour * 60 + minute`; the class
//! space is cyclic, 719 (11:59) wraps to 0 (0:00). Angles are measured in
//! degrees, clockwise, with 0° at the 12 mark: this makes
//! `minute = angle / 6` exact and matches the visual convention.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Number of distinguishable clock readings (12 hours × 60 minutes).
pub const CLASS_COUNT: u16 = 720;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum TimeError {
    #[error("hour {0} out of range 0..=11")]
    HourOutOfRange(u32),
    #[error("minute {0} out of range 0..=59")]
    MinuteOutOfRange(u32),
    #[error("class index {0} out of range 0..=719")]
    ClassOutOfRange(u32),
}

/// An exact clock reading: hour in `[0, 11]`, minute in `[0, 59]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawClockTime", into = "RawClockTime")]
pub struct ClockTime {
    hour: u8,
    minute: u8,
}

#[derive(Serialize, Deserialize)]
struct RawClockTime {
    hour: u8,
    minute: u8,
}

impl TryFrom<RawClockTime> for ClockTime {
    type Error = TimeError;
    fn try_from(raw: RawClockTime) -> Result<Self, TimeError> {
        ClockTime::new(raw.hour, raw.minute)
    }
}

impl From<ClockTime> for RawClockTime {
    fn from(t: ClockTime) -> Self {
        RawClockTime {
            hour: t.hour,
            minute: t.minute,
        }
    }
}

impl ClockTime {
    pub fn new(hour: u8, minute: u8) -> Result<Self, TimeError> {
        if hour > 11 {
            return Err(TimeError::HourOutOfRange(hour as u32));
        }
        if minute > 59 {
            return Err(TimeError::MinuteOutOfRange(minute as u32));
        }
        Ok(Self { hour, minute })
    }

    pub fn hour(&self) -> u8 {
        self.hour
    }

    pub fn minute(&self) -> u8 {
        self.minute
    }
}

impl std::fmt::Display for ClockTime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{:02}", self.hour, self.minute)
    }
}

/// A time quantized to one of the 720 classes.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default,
)]
#[serde(transparent)]
pub struct TimeClass(u16);

impl TimeClass {
    pub fn new(index: u16) -> Result<Self, TimeError> {
        if index >= CLASS_COUNT {
            return Err(TimeError::ClassOutOfRange(index as u32));
        }
        Ok(Self(index))
    }

    /// Reduces an arbitrary integer into the cyclic class space.
    pub fn wrap(value: i64) -> Self {
        Self(value.rem_euclid(CLASS_COUNT as i64) as u16)
    }

    pub fn index(&self) -> u16 {
        self.0
    }
}

impl From<ClockTime> for TimeClass {
    fn from(t: ClockTime) -> Self {
        encode_time(t)
    }
}

impl From<TimeClass> for ClockTime {
    fn from(c: TimeClass) -> Self {
        decode_class(c)
    }
}

/// Hand directions in degrees clockwise from the 12 mark, reduced to `[0, 360)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HandAngles {
    hour_deg: f64,
    minute_deg: f64,
}

impl HandAngles {
    pub fn new(hour_deg: f64, minute_deg: f64) -> Self {
        Self {
            hour_deg: hour_deg.rem_euclid(360.0),
            minute_deg: minute_deg.rem_euclid(360.0),
        }
    }

    pub fn hour_deg(&self) -> f64 {
        self.hour_deg
    }

    pub fn minute_deg(&self) -> f64 {
        self.minute_deg
    }

    /// The same reading with the two hand roles exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            hour_deg: self.minute_deg,
            minute_deg: self.hour_deg,
        }
    }
}

/// `hour * 60 + minute`.
pub fn encode_time(t: ClockTime) -> TimeClass {
    TimeClass(t.hour as u16 * 60 + t.minute as u16)
}

/// Inverse of [`encode_time`].
pub fn decode_class(c: TimeClass) -> ClockTime {
    ClockTime {
        hour: (c.0 / 60) as u8,
        minute: (c.0 % 60) as u8,
    }
}

/// Hand directions for a time: the minute hand moves 6°/minute, the hour
/// hand 30°/hour plus a 0.5°/minute drift.
pub fn hand_angles(t: ClockTime) -> HandAngles {
    HandAngles {
        hour_deg: 30.0 * t.hour as f64 + 0.5 * t.minute as f64,
        minute_deg: 6.0 * t.minute as f64,
    }
}

/// Decodes measured hand angles into ranked time candidates.
///
/// Rank 1 treats the angles as (hour hand, minute hand); rank 2 is the same
/// decoding with the two angles swapped, covering the hand-swap ambiguity of
/// visually similar hands. The hour decode subtracts the minute-induced
/// drift before rounding, otherwise times past :24 land on the wrong hour.
/// For exact angles produced by [`hand_angles`], rank 1 is exact.
pub fn angles_to_time(a: HandAngles) -> [TimeClass; 2] {
    [decode_direct(a), decode_direct(a.swapped())]
}

fn decode_direct(a: HandAngles) -> TimeClass {
    let minute = (a.minute_deg / 6.0).round().rem_euclid(60.0) as i64 % 60;
    let hour = ((a.hour_deg - 0.5 * minute as f64) / 30.0)
        .round()
        .rem_euclid(12.0) as i64
        % 12;
    TimeClass::wrap(hour * 60 + minute)
}

/// Shortest distance between two classes on the 720-cycle, in minutes.
pub fn circular_distance(a: TimeClass, b: TimeClass) -> u16 {
    let d = a.0.abs_diff(b.0);
    d.min(CLASS_COUNT - d)
}

/// Shortest signed angular distance `a - b` on the circle, in `(-180, 180]`.
pub fn angle_difference_deg(a: f64, b: f64) -> f64 {
    let mut d = (a - b).rem_euclid(360.0);
    if d > 180.0 {
        d -= 360.0;
    }
    d
}

/// Sine and cosine of an angle given in degrees, folded to the first
/// quadrant before evaluation so that mirror-symmetric angles yield exactly
/// negated coordinates (for example sin(360 − d) == -sin(d) bitwise).
/// Cardinal angles return exact 0/±1.
pub fn sin_cos_deg(deg: f64) -> (f64, f64) {
    let d = deg.rem_euclid(360.0);
    if d == 0.0 {
        return (0.0, 1.0);
    }
    if d == 90.0 {
        return (1.0, 0.0);
    }
    if d == 180.0 {
        return (0.0, -1.0);
    }
    if d == 270.0 {
        return (-1.0, 0.0);
    }
    if d < 90.0 {
        let r = d.to_radians();
        (r.sin(), r.cos())
    } else if d < 180.0 {
        let r = (180.0 - d).to_radians();
        (r.sin(), -r.cos())
    } else if d < 270.0 {
        let r = (d - 180.0).to_radians();
        (-r.sin(), -r.cos())
    } else {
        let r = (360.0 - d).to_radians();
        (-r.sin(), r.cos())
    }
}

/// Unit vector of a clock-hand direction in image coordinates (x right,
/// y down): 0° points up toward the 12 mark, 90° points right.
pub fn clock_direction(deg: f64) -> (f64, f64) {
    let (s, c) = sin_cos_deg(deg);
    (s, -c)
}

/// All 720 classes in index order.
pub fn all_classes() -> impl Iterator<Item = TimeClass> {
    (0..CLASS_COUNT).map(TimeClass)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(h: u8, m: u8) -> ClockTime {
        ClockTime::new(h, m).unwrap()
    }

    #[test]
    fn encode_examples() {
        assert_eq!(encode_time(t(0, 0)).index(), 0);
        assert_eq!(encode_time(t(11, 59)).index(), 719);
        assert_eq!(encode_time(t(10, 31)).index(), 631);
    }

    #[test]
    fn decode_examples() {
        assert_eq!(decode_class(TimeClass::new(0).unwrap()), t(0, 0));
        assert_eq!(decode_class(TimeClass::new(719).unwrap()), t(11, 59));
        assert_eq!(decode_class(TimeClass::new(390).unwrap()), t(6, 30));
    }

    #[test]
    fn construction_rejects_out_of_range() {
        assert!(ClockTime::new(12, 0).is_err());
        assert!(ClockTime::new(0, 60).is_err());
        assert!(TimeClass::new(720).is_err());
    }

    #[test]
    fn roundtrip_exhaustive() {
        for c in all_classes() {
            assert_eq!(encode_time(decode_class(c)), c);
        }
    }

    #[test]
    fn hand_angle_examples() {
        let a = hand_angles(t(3, 0));
        assert_eq!((a.hour_deg(), a.minute_deg()), (90.0, 0.0));
        let a = hand_angles(t(0, 30));
        assert_eq!((a.hour_deg(), a.minute_deg()), (15.0, 180.0));
        let a = hand_angles(t(10, 31));
        assert_eq!((a.hour_deg(), a.minute_deg()), (315.5, 186.0));
    }

    #[test]
    fn angles_to_time_examples() {
        let [r1, _] = angles_to_time(HandAngles::new(90.0, 0.0));
        assert_eq!(decode_class(r1), t(3, 0));

        // Swapped reading of 10:31's hands: minute = round(315.5/6) = 53,
        // hour = round((186 - 26.5)/30) = 5.
        let [r1, r2] = angles_to_time(HandAngles::new(315.5, 186.0));
        assert_eq!(decode_class(r1), t(10, 31));
        assert_eq!(decode_class(r2), t(5, 53));
    }

    #[test]
    fn reading_inverse_exhaustive() {
        for c in all_classes() {
            let time = decode_class(c);
            let [r1, _] = angles_to_time(hand_angles(time));
            assert_eq!(r1, c, "rank-1 decode failed for {time}");
        }
    }

    #[test]
    fn swap_double_application_stays_close() {
        // The swapped decode loses up to half a rounding step per stage, so
        // exact involution is unattainable; the double swap must still come
        // back to within 3 minutes of the original class, with the hour
        // recovered whenever the result is not adjacent to an hour boundary.
        let mut max_dist = 0;
        for c in all_classes() {
            let time = decode_class(c);
            let [_, swapped] = angles_to_time(hand_angles(time));
            let [_, back] = angles_to_time(hand_angles(decode_class(swapped)));
            let d = circular_distance(back, c);
            max_dist = max_dist.max(d);
        }
        assert!(max_dist <= 3, "double swap drifted by {max_dist} minutes");
    }

    #[test]
    fn circular_distance_examples() {
        let c = |i: u16| TimeClass::new(i).unwrap();
        assert_eq!(circular_distance(c(719), c(0)), 1);
        assert_eq!(circular_distance(c(0), c(360)), 360);
        assert_eq!(circular_distance(c(100), c(97)), 3);
    }

    #[test]
    fn circular_distance_symmetric_and_bounded() {
        let cases = [(0u16, 719u16), (1, 700), (359, 1), (360, 0), (123, 456)];
        for (a, b) in cases {
            let (a, b) = (TimeClass::new(a).unwrap(), TimeClass::new(b).unwrap());
            assert_eq!(circular_distance(a, b), circular_distance(b, a));
            assert!(circular_distance(a, b) <= 360);
        }
        for c in all_classes() {
            assert_eq!(circular_distance(c, c), 0);
        }
    }

    #[test]
    fn triangle_inequality_sampled() {
        // Sampled triples across the cycle; step 37 is coprime with 720 so
        // the sweep visits a spread of combinations.
        for i in (0..720u16).step_by(37) {
            for j in (0..720u16).step_by(53) {
                for k in (0..720u16).step_by(91) {
                    let (a, b, c) = (TimeClass(i), TimeClass(j), TimeClass(k));
                    assert!(
                        circular_distance(a, c) <= circular_distance(a, b) + circular_distance(b, c)
                    );
                }
            }
        }
    }

    #[test]
    fn folded_trig_is_mirror_exact() {
        for deg in [0.0, 12.5, 45.0, 90.0, 101.25, 186.0, 270.0, 315.5, 359.5] {
            let (s, c) = sin_cos_deg(deg);
            let (sm, cm) = sin_cos_deg(360.0 - deg);
            assert_eq!(s, -sm, "sin mirror at {deg}");
            assert_eq!(c, cm, "cos mirror at {deg}");
        }
        assert_eq!(sin_cos_deg(180.0), (0.0, -1.0));
        assert_eq!(clock_direction(0.0), (0.0, -1.0));
        assert_eq!(clock_direction(90.0), (1.0, 0.0));
    }

    #[test]
    fn serde_rejects_invalid_time() {
        let ok: Result<ClockTime, _> = serde_json::from_str(r#"{"hour":10,"minute":31}"#);
        assert_eq!(ok.unwrap(), t(10, 31));
        let bad: Result<ClockTime, _> = serde_json::from_str(r#"{"hour":12,"minute":0}"#);
        assert!(bad.is_err());
    }
}
