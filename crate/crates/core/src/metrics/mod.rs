//! Detector evaluation.
//!
//! Scores follow one polarity throughout: **higher means more likely
//! bonafide**, and a sample is classified bonafide iff `score >= threshold`.
//! The positive class is bonafide.

mod binary;
mod eval;
mod per_source;
mod reference;
mod scores;

pub use binary::{
    balanced_accuracy, compute_eer, threshold_sweep, ConfusionCounts, Eer, SweepRow, ThresholdSweep,
};
pub use eval::{evaluate, EvalOptions, EvalReport, MaxBa};
pub use per_source::{per_source_metrics, LabeledScore, SourceRow, LOW_METRIC_THRESHOLD};
pub use reference::{reference_scorer, HIGH_BAND_HZ};
pub use scores::{parse_scores, read_scores, scores_to_tsv, ScoreRecord, SCORE_COLUMNS};

use crate::catalog::Label;
use crate::error::{Error, Result};

pub(crate) fn check_inputs(scores: &[f64], labels: &[Label], what: &'static str) -> Result<(usize, usize)> {
    if scores.len() != labels.len() {
        return Err(Error::InvalidArgument(format!(
            "{} scores but {} labels",
            scores.len(),
            labels.len()
        )));
    }
    if let Some(i) = scores.iter().position(|s| !s.is_finite()) {
        return Err(Error::InvalidArgument(format!("non-finite score at index {i}")));
    }
    let bona = labels.iter().filter(|&&l| l == Label::Bonafide).count();
    let spoof = labels.len() - bona;
    if bona == 0 || spoof == 0 {
        return Err(Error::SingleClass(what));
    }
    Ok((bona, spoof))
}

/// Serializes `f64` with infinities as the strings `"inf"` / `"-inf"`.
pub(crate) mod float_or_inf {
    use serde::Serializer;

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }
}
