//! Procedural generator of labeled analog-clock images.
//!
//! A sample is produced by a fixed pipeline, each stage deterministic in the
//! master seed and sample index: style sampling → uniform random time →
//! fronto-parallel rendering → artefacts → random projective warp (recording
//! the ground-truth homography) → photometric augmentation. The record keeps
//! full provenance, so any sample regenerates bit-exactly.

mod artefacts;
mod augment;
mod font;
mod render;
mod style;
mod timelapse;

pub use artefacts::{apply_artefacts, ArtefactSpec, HandShadow, LineArtefact};
pub use augment::{augment, AugmentParams};
pub use render::render_clock;
pub use style::{
    sample_style, sample_style_with, simple_style, style_ranges, ClockStyle, ExtraHand, FaceShape,
    HandKind, HandStyle, NumeralStyle, StylePreset, StyleRanges, TickMode, REFERENCE_CANVAS,
};
pub use timelapse::{generate_timelapse, TimelapseConfig, TimelapseTruth};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::homography::{
    random_homography_with, unit_square_to_pixel_frame, warp_image_filled, Homography,
    PerspectiveParams,
};
use crate::raster::RasterImage;
use crate::timecore::{decode_class, ClockTime, TimeClass};

/// One generated sample with full provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct SynSample {
    pub image: RasterImage,
    pub time: ClockTime,
    /// Pixel-frame warp applied to the fronto-parallel render; identity for
    /// unwarped samples.
    pub homography: Homography,
    pub style: ClockStyle,
    pub artefacts: ArtefactSpec,
    pub augment: AugmentParams,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GenerateConfig {
    pub preset: StylePreset,
    pub size: u32,
    pub warp: bool,
    pub artefacts: bool,
    pub augment: bool,
    pub perspective: PerspectiveParams,
}

impl Default for GenerateConfig {
    fn default() -> Self {
        Self {
            preset: StylePreset::Full,
            size: 224,
            warp: true,
            artefacts: true,
            augment: true,
            perspective: PerspectiveParams::default(),
        }
    }
}

/// Generates the `index`-th sample of the dataset identified by `seed`.
///
/// Each sample owns an independent rng stream, so generation is order-free
/// and parallelizes without affecting the output.
pub fn generate_sample(seed: u64, index: u64, cfg: &GenerateConfig) -> SynSample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);

    let style = sample_style_with(&mut rng, cfg.preset);
    let time = decode_class(TimeClass::wrap(rng.gen_range(0..720i64)));
    let mut image = render_clock(&style, time, cfg.size);

    let artefact_spec = if cfg.artefacts {
        ArtefactSpec::sample(&mut rng, &style, time, cfg.size)
    } else {
        ArtefactSpec::empty()
    };
    if !artefact_spec.is_empty() {
        image = apply_artefacts(&image, &artefact_spec);
    }

    let homography = if cfg.warp {
        let unit = random_homography_with(&mut rng, &cfg.perspective);
        unit_square_to_pixel_frame(&unit, cfg.size)
    } else {
        Homography::identity()
    };
    if cfg.warp {
        image = warp_image_filled(&image, &homography, cfg.size, cfg.size, style.background_color)
            .expect("random homography is invertible");
    }

    let augment_params = if cfg.augment {
        AugmentParams::sample(&mut rng, &style_ranges().augment)
    } else {
        AugmentParams::identity()
    };
    if !augment_params.is_identity() {
        image = augment(&image, &augment_params);
    }

    SynSample {
        image,
        time,
        homography,
        style,
        artefacts: artefact_spec,
        augment: augment_params,
    }
}

/// Generates `n` samples sequentially. See [`generate_sample`] for the
/// per-sample contract; callers that want parallelism can fan out over the
/// index space themselves.
pub fn generate(seed: u64, n: u64, cfg: &GenerateConfig) -> Vec<SynSample> {
    (0..n).map(|i| generate_sample(seed, i, cfg)).collect()
}
