//! clockforge-core — analog clock toolkit: synthesis, reading, calibration.
//!
//! The crate is organized around five stages that compose into a pipeline:
//!
//! 1. **timecore** – time values, the 720-way class encoding, hand-angle
//!    geometry, and circular distance. Shared vocabulary of everything else.
//! 2. **homography** – 3×3 projective transforms, unit-grid normalization,
//!    inverse-mapping bilinear warps, and random perspective generation.
//! 3. **synclock** – procedural generator of labeled clock images with
//!    controllable style, artefacts, augmentation, and projective distortion.
//! 4. **georeader** – classical time reader (Sobel edges + Hough lines +
//!    hand extraction) producing ranked candidate readings.
//! 5. **uniformity** – cyclic RANSAC over per-frame video predictions:
//!    sawtooth fitting, inlier counting, accept/reject, recalibration.
//!
//! `evalkit` scores predictions against ground truth and `dataio` pins the
//! on-disk formats (PNG images, CSV labels/predictions/series, JSON reports).

pub mod dataio;
pub mod evalkit;
pub mod georeader;
pub mod homography;
pub mod raster;
pub mod synclock;
pub mod timecore;
pub mod uniformity;

pub use homography::{Homography, PerspectiveParams};
pub use raster::RasterImage;
pub use timecore::{ClockTime, HandAngles, TimeClass};
