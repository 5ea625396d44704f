//! Published results, kept as reference fixtures for the table renderers.
//!
//! Every number here was reported by the original authors for their trained
//! systems. None of them is computed by this crate.

use super::tables::{IterationResult, SourceTableRow};

/// `(iteration, frontend, task1, task2, task3, itw_ba, itw_eer_percent)`.
pub const PUBLISHED_ITERATIONS: [(u8, &str, f64, f64, f64, f64, f64); 6] = [
    (1, "AASIST", 0.531, 0.589, 0.492, 0.616, 35.61),
    (2, "WavLM", 0.745, 0.587, 0.478, 0.875, 8.46),
    (2, "MAE-AST", 0.607, 0.587, 0.597, 0.648, 24.79),
    (3, "WavLM", 0.766, 0.765, 0.518, 0.856, 12.05),
    (4, "WavLM", 0.810, 0.819, 0.496, 0.905, 8.42),
    (4, "MAE-AST", 0.640, 0.536, 0.623, 0.603, 39.9),
];

/// Task 1 per-source balanced accuracy, `(category, source, value)`.
pub const PUBLISHED_TASK1_SOURCES: [(&str, &str, f64); 32] = [
    ("pristine", "MandPod1", 0.87),
    ("pristine", "FleurGer", 0.87),
    ("pristine", "VSPSemi", 0.58),
    ("pristine", "YTPhone", 0.87),
    ("pristine", "VSPDoc", 0.84),
    ("pristine", "ArabCorpus", 0.87),
    ("pristine", "HQPod", 0.83),
    ("pristine", "JapSWave", 0.39),
    ("pristine", "Conf", 0.48),
    ("pristine", "VSPHomeMic", 0.87),
    ("pristine", "VSPProf", 0.84),
    ("pristine", "EngPod", 0.86),
    ("pristine", "FleurEng", 0.86),
    ("pristine", "DigCass", 0.71),
    ("pristine", "Dipco", 0.84),
    ("pristine", "Librivox", 0.69),
    ("pristine", "OldRadio", 0.69),
    ("pristine", "PhoneHome", 0.53),
    ("pristine", "RussAudiobook", 0.52),
    ("pristine", "MandPod2", 0.86),
    ("pristine", "RadioDrama", 0.81),
    ("generated", "elevenlabs", 0.64),
    ("generated", "fish", 0.81),
    ("generated", "hierspeech", 0.87),
    ("generated", "kokoro", 0.87),
    ("generated", "parler", 0.86),
    ("generated", "seamless", 0.76),
    ("generated", "style", 0.86),
    ("generated", "cartesia", 0.47),
    ("generated", "f5", 0.63),
    ("generated", "metavox", 0.58),
    ("generated", "zonos", 0.65),
];

/// Task 2 (processed) and task 3 (laundered) per-source balanced accuracy.
pub const PUBLISHED_TASK23_SOURCES: [(&str, &str, f64); 22] = [
    ("processed", "aac 16k", 0.80),
    ("processed", "encodec", 0.84),
    ("processed", "focalcodec", 0.83),
    ("processed", "mp3-aac-mp3", 0.84),
    ("processed", "mp3-aac 16k", 0.81),
    ("processed", "mp3 16k", 0.79),
    ("processed", "mp3 VBR", 0.79),
    ("processed", "noise", 0.52),
    ("processed", "opus 16k", 0.73),
    ("processed", "pitch shift", 0.81),
    ("processed", "resample down", 0.77),
    ("processed", "resample up", 0.76),
    ("processed", "sem-codec", 0.74),
    ("processed", "snac", 0.73),
    ("processed", "speech filt.", 0.79),
    ("processed", "time stret.", 0.85),
    ("processed", "vorbis 16k", 0.75),
    ("processed", "phone audio", 0.85),
    ("laundered", "car", 0.51),
    ("laundered", "played", 0.67),
    ("laundered", "reverb", 0.64),
    ("laundered", "all 3", 0.49),
];

pub fn published_iterations() -> Vec<IterationResult> {
    PUBLISHED_ITERATIONS
        .iter()
        .map(|&(iteration, name, t1, t2, t3, ba, eer)| IterationResult {
            iteration,
            frontend_name: name.to_string(),
            task_ba: [Some(t1), Some(t2), Some(t3)],
            itw_ba: Some(ba),
            itw_eer_percent: Some(eer),
        })
        .collect()
}

pub fn source_rows(fixture: &[(&str, &str, f64)]) -> Vec<SourceTableRow> {
    fixture
        .iter()
        .map(|&(category, source, metric)| SourceTableRow {
            category: category.to_string(),
            source: source.to_string(),
            metric,
            n: None,
            recall: None,
        })
        .collect()
}
