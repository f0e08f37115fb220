//! Synthetic timelapse sequences: one clock advancing at a fixed rate, with
//! optional planted outlier frames and mild per-frame photometric jitter.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::raster::RasterImage;
use crate::timecore::{decode_class, TimeClass};

use super::augment::{augment, AugmentParams};
use super::render::render_clock;
use super::style::ClockStyle;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TimelapseConfig {
    pub style: ClockStyle,
    pub start: TimeClass,
    /// Clock minutes advanced per frame.
    pub rate: f64,
    pub frames: u32,
    /// Probability that a frame displays a uniformly random wrong time.
    pub outlier_fraction: f64,
    /// Scale of the per-frame photometric perturbation in [0, 1]; 0 renders
    /// every frame crisp and identical in style.
    pub jitter: f64,
    pub size: u32,
}

/// Per-frame ground truth for oracle use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimelapseTruth {
    /// Class actually displayed in the frame.
    pub shown: TimeClass,
    /// Class on the underlying linear model `round(start + rate·i) mod 720`.
    pub model: TimeClass,
    pub outlier: bool,
}

/// Renders the sequence. Frame `i` shows `round(start + rate·i) mod 720`
/// unless it is drawn as an outlier, in which case a uniformly random class
/// is displayed instead (the truth records both).
pub fn generate_timelapse(
    seed: u64,
    cfg: &TimelapseConfig,
) -> (Vec<RasterImage>, Vec<TimelapseTruth>) {
    assert!(cfg.rate > 0.0, "rate must be positive");
    assert!(
        (0.0..1.0).contains(&cfg.outlier_fraction),
        "outlier_fraction must lie in [0, 1)"
    );
    let mut frames = Vec::with_capacity(cfg.frames as usize);
    let mut truths = Vec::with_capacity(cfg.frames as usize);
    for i in 0..cfg.frames {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let model = TimeClass::wrap((cfg.start.index() as f64 + cfg.rate * i as f64).round() as i64);
        let outlier = cfg.outlier_fraction > 0.0 && rng.gen_bool(cfg.outlier_fraction);
        let shown = if outlier {
            TimeClass::wrap(rng.gen_range(0..720i64))
        } else {
            model
        };
        let mut img = render_clock(&cfg.style, decode_class(shown), cfg.size);
        if cfg.jitter > 0.0 {
            let j = cfg.jitter;
            let params = AugmentParams {
                sigma: rng.gen_range(0.0..=0.5 * j),
                gain: [
                    rng.gen_range(1.0 - 0.05 * j..=1.0 + 0.05 * j),
                    rng.gen_range(1.0 - 0.05 * j..=1.0 + 0.05 * j),
                    rng.gen_range(1.0 - 0.05 * j..=1.0 + 0.05 * j),
                ],
                bias: [
                    rng.gen_range(-6.0 * j..=6.0 * j),
                    rng.gen_range(-6.0 * j..=6.0 * j),
                    rng.gen_range(-6.0 * j..=6.0 * j),
                ],
            };
            img = augment(&img, &params);
        }
        frames.push(img);
        truths.push(TimelapseTruth {
            shown,
            model,
            outlier,
        });
    }
    (frames, truths)
}
