//! Corpus composition, audio preprocessing, augmentation and evaluation for
//! audio deepfake detection.
//!
//! The crate is organised around the data flow of a detector experiment:
//!
//! * [`catalog`], [`preset`], [`manifest`] and [`validate`] turn inventories of
//!   source datasets into reproducible train/validation manifests for the four
//!   bundled training-data compositions.
//! * [`audio`] decodes WAV, resamples to 16 kHz and cuts fixed-length segments.
//! * [`augment`] implements RawBoost-style convolutive and impulsive noise.
//! * [`metrics`] scores detector outputs (balanced accuracy, EER, per-source
//!   breakdowns) and ships a heuristic reference scorer for smoke tests.
//! * [`report`] renders result tables and measures embedding separability.
//!
//! All randomness flows from explicit `u64` seeds through [`rng::SplitMix64`],
//! so every operation is reproducible across runs and platforms.

pub mod audio;
pub mod augment;
pub mod catalog;
pub mod error;
pub mod manifest;
pub mod metrics;
pub mod preset;
pub mod report;
pub mod rng;
pub mod stub;
pub mod validate;
pub mod vocab;

mod tsv;

pub use audio::{AudioClip, CropMode, PadMode, SegmentSpec};
pub use augment::{AugmentMode, AugmentationRecipe};
pub use catalog::{Catalog, CatalogEntry, Dataset, Label};
pub use error::{Error, Result};
pub use manifest::{Manifest, ManifestEntry, Split};
pub use metrics::{ConfusionCounts, EvalReport, ScoreRecord};
pub use preset::CompositionPreset;
pub use validate::ValidationReport;

/// Version stamped into every structured (JSON) output.
pub const FORMAT_VERSION: u32 = 1;
