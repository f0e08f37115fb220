//! Cyclic RANSAC over per-frame time predictions.
//!
//! Time in a steady video advances linearly, so predictions plotted against
//! frame index follow a line — except that the 720-minute class space wraps,
//! turning the line into a sawtooth. Two sampled points are assumed to lie
//! in the same period: their minimal-|slope| lift fixes the candidate line,
//! the modulo-720 reduction rectifies it, and inliers are counted under
//! circular distance. The winner is refined by least squares on unwrapped
//! inliers. Videos are accepted only when the inlier ratio and the fitted
//! time span clear their thresholds (0.7, 10 minutes, ±3-minute margin).

use std::collections::BTreeSet;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::timecore::{circular_distance, TimeClass, CLASS_COUNT};

const PERIOD: f64 = CLASS_COUNT as f64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("a prediction series needs at least 2 entries, got {0}")]
    TooShort(usize),
    #[error("frame indices must be strictly increasing (entry {0})")]
    NonIncreasing(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum FitError {
    #[error("no candidate model reached 2 inliers within the iteration budget")]
    FitFailed,
}

/// Per-frame predictions for one video; frame indices strictly increase.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(u64, TimeClass)>", into = "Vec<(u64, TimeClass)>")]
pub struct PredictionSeries {
    entries: Vec<(u64, TimeClass)>,
}

impl TryFrom<Vec<(u64, TimeClass)>> for PredictionSeries {
    type Error = SeriesError;
    fn try_from(entries: Vec<(u64, TimeClass)>) -> Result<Self, SeriesError> {
        PredictionSeries::new(entries)
    }
}

impl From<PredictionSeries> for Vec<(u64, TimeClass)> {
    fn from(s: PredictionSeries) -> Self {
        s.entries
    }
}

impl PredictionSeries {
    pub fn new(entries: Vec<(u64, TimeClass)>) -> Result<Self, SeriesError> {
        if entries.len() < 2 {
            return Err(SeriesError::TooShort(entries.len()));
        }
        for (i, pair) in entries.windows(2).enumerate() {
            if pair[1].0 <= pair[0].0 {
                return Err(SeriesError::NonIncreasing(i + 1));
            }
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[(u64, TimeClass)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Last frame index minus first (the series' frame extent).
    pub fn frame_extent(&self) -> u64 {
        self.entries.last().unwrap().0 - self.entries.first().unwrap().0
    }
}

/// A fitted sawtooth: the value at frame `f` is `(intercept + slope·f) mod 720`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SawtoothFit {
    /// Minutes per frame; any sign.
    pub slope: f64,
    /// Minutes, reported modulo 720.
    pub intercept: f64,
    pub inlier_mask: Vec<bool>,
    pub inlier_ratio: f64,
    pub iterations_used: u32,
}

impl SawtoothFit {
    fn raw_value(&self, frame: u64) -> f64 {
        self.intercept + self.slope * frame as f64
    }
}

/// Model value at a frame, rounded and wrapped into the class space.
pub fn sawtooth_value(fit: &SawtoothFit, frame: u64) -> TimeClass {
    TimeClass::wrap(fit.raw_value(frame).round() as i64)
}

/// Marks entries within `margin` minutes (circular, inclusive) of the model.
pub fn count_inliers(
    series: &PredictionSeries,
    fit: &SawtoothFit,
    margin: u16,
) -> (Vec<bool>, f64) {
    let mask: Vec<bool> = series
        .entries
        .iter()
        .map(|&(frame, pred)| circular_distance(pred, sawtooth_value(fit, frame)) <= margin)
        .collect();
    let ratio = mask.iter().filter(|&&b| b).count() as f64 / mask.len() as f64;
    (mask, ratio)
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RansacConfig {
    pub iterations: u32,
    /// Inclusive inlier margin in minutes.
    pub margin: u16,
    pub seed: u64,
}

impl Default for RansacConfig {
    fn default() -> Self {
        Self {
            iterations: 10_000,
            margin: 3,
            seed: 0,
        }
    }
}

/// Difference `b - a` lifted into `(-360, 360]`: the smallest-magnitude slope
/// numerator consistent with both points lying in the same period.
fn wrapped_difference(a: i64, b: i64) -> f64 {
    let d = (b - a).rem_euclid(CLASS_COUNT as i64);
    if d > 360 {
        (d - CLASS_COUNT as i64) as f64
    } else {
        d as f64
    }
}

/// Fits a sawtooth by RANSAC with two-point same-period sampling.
///
/// Each iteration samples two distinct entries, lifts their difference to
/// the minimal-|slope| same-period interpretation, scores the candidate by
/// inlier count (ties prefer smaller |slope|, then the earlier iteration),
/// and the winner is polished by least squares on unwrapped inliers — kept
/// only if it does not lose inliers.
pub fn fit_sawtooth_ransac(
    series: &PredictionSeries,
    config: &RansacConfig,
) -> Result<SawtoothFit, FitError> {
    let entries = series.entries();
    let n = entries.len();
    let frames: Vec<f64> = entries.iter().map(|&(f, _)| f as f64).collect();
    let preds: Vec<i64> = entries.iter().map(|&(_, p)| p.index() as i64).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut best: Option<(usize, f64, f64, f64)> = None; // (inliers, |slope|, slope, intercept)

    let count_for = |slope: f64, intercept: f64| -> usize {
        let margin = config.margin as i64;
        let mut count = 0;
        for (f, p) in frames.iter().zip(preds.iter()) {
            let model = (intercept + slope * f).round() as i64;
            let d = (p - model).rem_euclid(CLASS_COUNT as i64);
            if d <= margin || d >= CLASS_COUNT as i64 - margin {
                count += 1;
            }
        }
        count
    };

    for _ in 0..config.iterations {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n);
        while j == i {
            j = rng.gen_range(0..n);
        }
        let (a, b) = if entries[i].0 < entries[j].0 {
            (i, j)
        } else {
            (j, i)
        };
        let df = frames[b] - frames[a];
        let slope = wrapped_difference(preds[a], preds[b]) / df;
        let intercept = preds[a] as f64 - slope * frames[a];
        let inliers = count_for(slope, intercept);
        let better = match &best {
            None => true,
            Some(&(bi, babs, _, _)) => {
                inliers > bi || (inliers == bi && slope.abs() < babs)
            }
        };
        if better {
            best = Some((inliers, slope.abs(), slope, intercept));
        }
    }

    let (best_count, _, slope, intercept) = best.ok_or(FitError::FitFailed)?;
    if best_count < 2 {
        return Err(FitError::FitFailed);
    }

    let mut fit = SawtoothFit {
        slope,
        intercept: intercept.rem_euclid(PERIOD),
        inlier_mask: Vec::new(),
        inlier_ratio: 0.0,
        iterations_used: config.iterations,
    };
    let (mask, ratio) = count_inliers(series, &fit, config.margin);

    if let Some(refined) = refine_least_squares(series, &fit, &mask) {
        let (r_mask, r_ratio) = count_inliers(series, &refined, config.margin);
        let r_count = r_mask.iter().filter(|&&b| b).count();
        if r_count >= mask.iter().filter(|&&b| b).count() {
            return Ok(SawtoothFit {
                inlier_mask: r_mask,
                inlier_ratio: r_ratio,
                ..refined
            });
        }
    }

    fit.inlier_mask = mask;
    fit.inlier_ratio = ratio;
    Ok(fit)
}

/// Least squares on inlier predictions unwrapped along the current model.
fn refine_least_squares(
    series: &PredictionSeries,
    fit: &SawtoothFit,
    mask: &[bool],
) -> Option<SawtoothFit> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (&(frame, pred), &keep) in series.entries().iter().zip(mask.iter()) {
        if !keep {
            continue;
        }
        let raw = fit.raw_value(frame);
        // Lift the prediction into the period the model passes through.
        let k = ((raw - pred.index() as f64) / PERIOD).round();
        xs.push(frame as f64);
        ys.push(pred.index() as f64 + PERIOD * k);
    }
    if xs.len() < 2 {
        return None;
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(ys.iter()) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx <= 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = (my - slope * mx).rem_euclid(PERIOD);
    Some(SawtoothFit {
        slope,
        intercept,
        inlier_mask: Vec::new(),
        inlier_ratio: 0.0,
        iterations_used: fit.iterations_used,
    })
}

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, Hash,
)]
#[serde(rename_all = "snake_case")]
pub enum RejectReason {
    LowInlierRatio,
    SpanTooSmall,
    FitFailed,
}

/// Outcome of the video filter; accepted iff no reasons.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AcceptanceDecision {
    pub accepted: bool,
    pub reasons: BTreeSet<RejectReason>,
}

impl AcceptanceDecision {
    fn from_reasons(reasons: BTreeSet<RejectReason>) -> Self {
        Self {
            accepted: reasons.is_empty(),
            reasons,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AcceptThresholds {
    /// Minimum inlier ratio (inclusive).
    pub min_inlier_ratio: f64,
    /// Minimum fitted time span over the video, in minutes (inclusive).
    pub min_span_minutes: f64,
}

impl Default for AcceptThresholds {
    fn default() -> Self {
        Self {
            min_inlier_ratio: 0.7,
            min_span_minutes: 10.0,
        }
    }
}

/// Applies the video filter to a fit outcome. `frame_extent` is the series'
/// last frame index minus its first; the span is measured from the fitted
/// slope (robust to outliers), as `|slope| · frame_extent`.
pub fn accept_video(
    fit: Result<&SawtoothFit, FitError>,
    frame_extent: u64,
    thresholds: &AcceptThresholds,
) -> AcceptanceDecision {
    let mut reasons = BTreeSet::new();
    match fit {
        Err(_) => {
            reasons.insert(RejectReason::FitFailed);
        }
        Ok(fit) => {
            if fit.inlier_ratio < thresholds.min_inlier_ratio {
                reasons.insert(RejectReason::LowInlierRatio);
            }
            let span = fit.slope.abs() * frame_extent as f64;
            if span < thresholds.min_span_minutes {
                reasons.insert(RejectReason::SpanTooSmall);
            }
        }
    }
    AcceptanceDecision::from_reasons(reasons)
}

/// Replaces every entry's label with the fitted model value (inliers and
/// outliers alike — the fitted line is the label source).
pub fn calibrate(series: &PredictionSeries, fit: &SawtoothFit) -> PredictionSeries {
    let entries = series
        .entries()
        .iter()
        .map(|&(frame, _)| (frame, sawtooth_value(fit, frame)))
        .collect();
    PredictionSeries::new(entries).expect("calibration preserves the frame axis")
}

/// Scatter plot of a series with the fitted sawtooth overlaid, as an SVG
/// document. Inliers and outliers are colored differently; the model line
/// breaks at period wraps.
pub fn render_fit_svg(series: &PredictionSeries, fit: &SawtoothFit) -> String {
    let (w, h) = (800.0, 420.0);
    let (ml, mr, mt, mb) = (56.0, 16.0, 16.0, 40.0);
    let plot_w = w - ml - mr;
    let plot_h = h - mt - mb;
    let f0 = series.entries().first().unwrap().0 as f64;
    let f1 = series.entries().last().unwrap().0 as f64;
    let fspan = (f1 - f0).max(1.0);
    let x = |frame: f64| ml + (frame - f0) / fspan * plot_w;
    let y = |class: f64| mt + (1.0 - class / PERIOD) * plot_h;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" \
         viewBox=\"0 0 {w} {h}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "<rect x=\"{ml}\" y=\"{mt}\" width=\"{plot_w}\" height=\"{plot_h}\" \
         fill=\"none\" stroke=\"#888\"/>\n"
    ));
    for tick in [0, 180, 360, 540, 720] {
        let ty = y(tick as f64);
        svg.push_str(&format!(
            "<line x1=\"{ml}\" y1=\"{ty:.2}\" x2=\"{:.2}\" y2=\"{ty:.2}\" \
             stroke=\"#ddd\"/><text x=\"8\" y=\"{:.2}\" font-size=\"12\">{tick}</text>\n",
            ml + plot_w,
            ty + 4.0
        ));
    }

    // Model polyline, split where the sawtooth wraps.
    let steps = 400;
    let mut segment: Vec<(f64, f64)> = Vec::new();
    let mut flush = |seg: &mut Vec<(f64, f64)>, out: &mut String| {
        if seg.len() > 1 {
            let pts: Vec<String> = seg.iter().map(|(a, b)| format!("{a:.2},{b:.2}")).collect();
            out.push_str(&format!(
                "<polyline points=\"{}\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\"/>\n",
                pts.join(" ")
            ));
        }
        seg.clear();
    };
    let mut prev: Option<f64> = None;
    for i in 0..=steps {
        let frame = f0 + fspan * i as f64 / steps as f64;
        let value = (fit.intercept + fit.slope * frame).rem_euclid(PERIOD);
        if let Some(p) = prev {
            if (value - p).abs() > PERIOD / 2.0 {
                flush(&mut segment, &mut svg);
            }
        }
        segment.push((x(frame), y(value)));
        prev = Some(value);
    }
    flush(&mut segment, &mut svg);

    for (&(frame, pred), &inlier) in series.entries().iter().zip(fit.inlier_mask.iter()) {
        let color = if inlier { "#2ca02c" } else { "#d62728" };
        svg.push_str(&format!(
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.5\" fill=\"{color}\"/>\n",
            x(frame as f64),
            y(pred.index() as f64)
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{ml}\" y=\"{:.2}\" font-size=\"12\">slope {:.4} min/frame, inliers {:.1}%</text>\n",
        h - 12.0,
        fit.slope,
        100.0 * fit.inlier_ratio
    ));
    svg.push_str("</svg>\n");
    svg
}
