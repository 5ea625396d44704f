use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::catalog::Label;
use crate::error::{Error, Result};
use crate::manifest::{Manifest, Split};
use crate::metrics::{
    compute_eer, per_source_metrics, threshold_sweep, ConfusionCounts, LabeledScore, ScoreRecord, SourceRow,
};
use crate::FORMAT_VERSION;

#[derive(Debug, Clone, PartialEq)]
pub struct EvalOptions {
    pub threshold: f64,
    /// Restrict evaluation to one split; `None` uses every manifest entry.
    pub split: Option<Split>,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            threshold: 0.5,
            split: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaxBa {
    #[serde(serialize_with = "crate::metrics::float_or_inf::serialize")]
    pub threshold: f64,
    pub balanced_accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub format_version: u32,
    pub n_scored: usize,
    pub n_bonafide: usize,
    pub n_spoof: usize,
    /// Manifest entries that have no score, sorted.
    pub coverage_gaps: Vec<String>,
    pub threshold_used: f64,
    pub confusion: ConfusionCounts,
    pub balanced_accuracy: f64,
    pub eer_percent: f64,
    pub eer_threshold: f64,
    pub max_ba: MaxBa,
    pub per_source_rows: Vec<SourceRow>,
    pub warnings: Vec<String>,
}

impl EvalReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Joins scores with manifest labels and computes every metric.
///
/// A score for an id missing from the manifest (or outside the selected
/// split) is an error. Manifest entries without a score are listed as
/// coverage gaps and excluded.
pub fn evaluate(manifest: &Manifest, scores: &[ScoreRecord], options: &EvalOptions) -> Result<EvalReport> {
    if !options.threshold.is_finite() {
        return Err(Error::InvalidArgument("threshold must be finite".into()));
    }
    let index: HashMap<&str, (Label, &str)> = manifest
        .entries()
        .iter()
        .filter(|e| options.split.map_or(true, |s| e.split == s))
        .map(|e| (e.entry.sample_id.as_str(), (e.entry.label, e.entry.source_system.as_str())))
        .collect();

    let mut seen = HashSet::new();
    let mut samples = Vec::with_capacity(scores.len());
    for r in scores {
        let &(label, _) = index
            .get(r.sample_id.as_str())
            .ok_or_else(|| Error::UnknownSample(r.sample_id.clone()))?;
        if !seen.insert(r.sample_id.as_str()) {
            return Err(Error::DuplicateId(r.sample_id.clone()));
        }
        samples.push(LabeledScore {
            sample_id: r.sample_id.clone(),
            score: r.score,
            label,
        });
    }
    let mut coverage_gaps: Vec<String> = index
        .keys()
        .filter(|id| !seen.contains(*id))
        .map(|id| id.to_string())
        .collect();
    coverage_gaps.sort();

    let values: Vec<f64> = samples.iter().map(|s| s.score).collect();
    let labels: Vec<Label> = samples.iter().map(|s| s.label).collect();
    let eer = compute_eer(&values, &labels)?;
    let sweep = threshold_sweep(&values, &labels)?;
    let confusion = ConfusionCounts::at_threshold(&values, &labels, options.threshold);
    let per_source_rows = per_source_metrics(
        &samples,
        |id| index.get(id).map(|(_, src)| src.to_string()),
        options.threshold,
    )?;

    let mut warnings = Vec::new();
    if eer.eer_percent > 50.0 {
        warnings.push(format!(
            "EER is {:.2}% (above 50%): scores may have inverted polarity; higher must mean bonafide",
            eer.eer_percent
        ));
    }
    if !coverage_gaps.is_empty() {
        warnings.push(format!("{} manifest entries have no score", coverage_gaps.len()));
    }
    let best = sweep.best_row();
    Ok(EvalReport {
        format_version: FORMAT_VERSION,
        n_scored: samples.len(),
        n_bonafide: confusion.tp + confusion.fn_,
        n_spoof: confusion.tn + confusion.fp,
        coverage_gaps,
        threshold_used: options.threshold,
        balanced_accuracy: confusion.balanced_accuracy(),
        confusion,
        eer_percent: eer.eer_percent,
        eer_threshold: eer.threshold,
        max_ba: MaxBa {
            threshold: best.threshold,
            balanced_accuracy: best.balanced_accuracy,
        },
        per_source_rows,
        warnings,
    })
}
