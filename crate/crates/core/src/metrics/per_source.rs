use std::collections::BTreeMap;

use serde::Serialize;

use crate::catalog::Label;
use crate::error::{Error, Result};

/// Rows at or below this value are flagged as weak sources.
pub const LOW_METRIC_THRESHOLD: f64 = 0.60;

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledScore {
    pub sample_id: String,
    pub score: f64,
    pub label: Label,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SourceRow {
    pub source: String,
    pub label: Label,
    pub n: usize,
    /// Recall on this source's samples alone.
    pub recall: f64,
    /// Balanced accuracy of this source against the whole opposite class:
    /// `(recall on this source + recall on the opposite class) / 2`.
    pub metric: f64,
    pub flag_low: bool,
}

/// Per-source balanced accuracy.
///
/// Samples are grouped by `(source, label)`. A single-class group has no
/// balanced accuracy of its own, so each group is paired with every sample
/// of the opposite class in `samples`. Rows are sorted by source, then label.
pub fn per_source_metrics<F>(samples: &[LabeledScore], source_of: F, threshold: f64) -> Result<Vec<SourceRow>>
where
    F: Fn(&str) -> Option<String>,
{
    let correct = |s: &LabeledScore| (s.score >= threshold) == (s.label == Label::Bonafide);
    let mut class_total = [0usize; 2];
    let mut class_correct = [0usize; 2];
    let mut groups: BTreeMap<(String, Label), (usize, usize)> = BTreeMap::new();
    for s in samples {
        if !s.score.is_finite() {
            return Err(Error::InvalidArgument(format!("non-finite score for `{}`", s.sample_id)));
        }
        let source = source_of(&s.sample_id).ok_or_else(|| Error::UnknownSample(s.sample_id.clone()))?;
        let k = s.label as usize;
        let ok = correct(s) as usize;
        class_total[k] += 1;
        class_correct[k] += ok;
        let g = groups.entry((source, s.label)).or_default();
        g.0 += 1;
        g.1 += ok;
    }
    if class_total.contains(&0) {
        return Err(Error::SingleClass("per-source metric"));
    }
    Ok(groups
        .into_iter()
        .map(|((source, label), (n, ok))| {
            let recall = ok as f64 / n as f64;
            let o = label.opposite() as usize;
            let metric = (recall + class_correct[o] as f64 / class_total[o] as f64) / 2.0;
            SourceRow {
                source,
                label,
                n,
                recall,
                metric,
                flag_low: metric <= LOW_METRIC_THRESHOLD,
            }
        })
        .collect())
}
