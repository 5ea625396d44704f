use serde::Serialize;

use crate::catalog::Label;
use crate::error::Result;
use crate::metrics::check_inputs;

/// Confusion counts with bonafide as the positive class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ConfusionCounts {
    pub tp: usize,
    pub tn: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl ConfusionCounts {
    pub fn at_threshold(scores: &[f64], labels: &[Label], threshold: f64) -> Self {
        let mut c = Self::default();
        for (&s, &l) in scores.iter().zip(labels) {
            match (l, s >= threshold) {
                (Label::Bonafide, true) => c.tp += 1,
                (Label::Bonafide, false) => c.fn_ += 1,
                (Label::Spoof, true) => c.fp += 1,
                (Label::Spoof, false) => c.tn += 1,
            }
        }
        c
    }

    pub fn total(&self) -> usize {
        self.tp + self.tn + self.fp + self.fn_
    }

    /// True positive rate (bonafide recall).
    pub fn tpr(&self) -> f64 {
        self.tp as f64 / (self.tp + self.fn_) as f64
    }

    /// True negative rate (spoof recall).
    pub fn tnr(&self) -> f64 {
        self.tn as f64 / (self.tn + self.fp) as f64
    }

    /// `(TPR + TNR) / 2`; NaN if a class is absent.
    pub fn balanced_accuracy(&self) -> f64 {
        (self.tpr() + self.tnr()) / 2.0
    }
}

/// Balanced accuracy with decision `bonafide iff score >= threshold`.
pub fn balanced_accuracy(scores: &[f64], labels: &[Label], threshold: f64) -> Result<f64> {
    check_inputs(scores, labels, "balanced accuracy")?;
    Ok(ConfusionCounts::at_threshold(scores, labels, threshold).balanced_accuracy())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Eer {
    pub eer_percent: f64,
    pub threshold: f64,
}

struct OperatingPoint {
    threshold: f64,
    far: f64,
    frr: f64,
    /// Both classes share the score equal to `threshold`.
    tie: bool,
}

/// Equal error rate.
///
/// Operating points are evaluated at every distinct score and at `+inf`,
/// with `FAR(t)` the fraction of spoof scores `>= t` and `FRR(t)` the
/// fraction of bonafide scores `< t`. Walking up the thresholds, the first
/// point with `FAR == FRR` gives the EER directly. Otherwise the crossing
/// lies on the step between the last point with `FAR > FRR` and the next:
///
/// * if only one rate changes on that step, the EER is the linear
///   interpolation of the crossing (the value of the rate that stays flat);
/// * if the step passes a score shared by both classes (a tie plateau), the
///   EER is the mean of `(FAR + FRR) / 2` at the two bounding points.
///
/// The returned threshold is interpolated the same way between the two
/// bounding thresholds (the lower one when the upper is `+inf`).
pub fn compute_eer(scores: &[f64], labels: &[Label]) -> Result<Eer> {
    let (n_bona, n_spoof) = check_inputs(scores, labels, "EER")?;
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));

    let mut points = Vec::new();
    let (mut bona_below, mut spoof_below) = (0usize, 0usize);
    let mut i = 0;
    while i < order.len() {
        let s = scores[order[i]];
        let (mut gb, mut gs) = (0, 0);
        while i < order.len() && scores[order[i]] == s {
            match labels[order[i]] {
                Label::Bonafide => gb += 1,
                Label::Spoof => gs += 1,
            }
            i += 1;
        }
        points.push(OperatingPoint {
            threshold: s,
            far: (n_spoof - spoof_below) as f64 / n_spoof as f64,
            frr: bona_below as f64 / n_bona as f64,
            tie: gb > 0 && gs > 0,
        });
        bona_below += gb;
        spoof_below += gs;
    }
    points.push(OperatingPoint {
        threshold: f64::INFINITY,
        far: 0.0,
        frr: 1.0,
        tie: false,
    });

    for k in 0..points.len() {
        let cur = &points[k];
        let d1 = cur.far - cur.frr;
        if d1 == 0.0 {
            return Ok(Eer {
                eer_percent: cur.far * 100.0,
                threshold: cur.threshold,
            });
        }
        if d1 < 0.0 {
            // points[0] has FRR = 0 < FAR, so k >= 1 here.
            let prev = &points[k - 1];
            let d0 = prev.far - prev.frr;
            let t = d0 / (d0 - d1);
            let eer = if prev.tie {
                ((prev.far + prev.frr) / 2.0 + (cur.far + cur.frr) / 2.0) / 2.0
            } else {
                prev.far + t * (cur.far - prev.far)
            };
            let threshold = if cur.threshold.is_finite() {
                prev.threshold + t * (cur.threshold - prev.threshold)
            } else {
                prev.threshold
            };
            return Ok(Eer {
                eer_percent: eer * 100.0,
                threshold,
            });
        }
    }
    unreachable!("the +inf operating point always has FAR < FRR")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    #[serde(serialize_with = "crate::metrics::float_or_inf::serialize")]
    pub threshold: f64,
    pub balanced_accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdSweep {
    pub rows: Vec<SweepRow>,
    /// Index of the first row with maximal balanced accuracy.
    pub best: usize,
}

impl ThresholdSweep {
    pub fn best_row(&self) -> SweepRow {
        self.rows[self.best]
    }
}

/// Balanced accuracy at `-inf`, at every distinct score (ascending) and at `+inf`.
pub fn threshold_sweep(scores: &[f64], labels: &[Label]) -> Result<ThresholdSweep> {
    let (n_bona, n_spoof) = check_inputs(scores, labels, "threshold sweep")?;
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));

    // At threshold t: tp = bonafide with score >= t, tn = spoof with score < t.
    let ba = |bona_below: usize, spoof_below: usize| {
        let tpr = (n_bona - bona_below) as f64 / n_bona as f64;
        let tnr = spoof_below as f64 / n_spoof as f64;
        (tpr + tnr) / 2.0
    };
    let mut rows = vec![SweepRow {
        threshold: f64::NEG_INFINITY,
        balanced_accuracy: ba(0, 0),
    }];
    let (mut bona_below, mut spoof_below) = (0, 0);
    let mut i = 0;
    while i < order.len() {
        let s = scores[order[i]];
        rows.push(SweepRow {
            threshold: s,
            balanced_accuracy: ba(bona_below, spoof_below),
        });
        while i < order.len() && scores[order[i]] == s {
            match labels[order[i]] {
                Label::Bonafide => bona_below += 1,
                Label::Spoof => spoof_below += 1,
            }
            i += 1;
        }
    }
    rows.push(SweepRow {
        threshold: f64::INFINITY,
        balanced_accuracy: ba(n_bona, n_spoof),
    });
    let best = rows
        .iter()
        .enumerate()
        .fold(0, |b, (k, r)| if r.balanced_accuracy > rows[b].balanced_accuracy { k } else { b });
    Ok(ThresholdSweep { rows, best })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Label::{Bonafide as B, Spoof as S};
    use crate::error::Error;

    #[test]
    fn asymmetric_class_counts() {
        let c = ConfusionCounts { tp: 81, fn_: 19, tn: 81, fp: 19 };
        assert!((c.balanced_accuracy() - 0.810).abs() < 1e-12);
        assert_eq!(c.total(), 200);
    }

    #[test]
    fn ba_edge_cases() {
        let scores = [0.9, 0.8, 0.2, 0.1];
        let labels = [B, B, S, S];
        assert_eq!(balanced_accuracy(&scores, &labels, 0.5).unwrap(), 1.0);
        assert_eq!(balanced_accuracy(&scores, &labels, 0.0).unwrap(), 0.5);
        assert!(matches!(balanced_accuracy(&scores, &[B; 4], 0.5), Err(Error::SingleClass(_))));
        assert!(balanced_accuracy(&[f64::NAN, 0.1], &[B, S], 0.5).is_err());
        assert!(balanced_accuracy(&[0.1], &[B, S], 0.5).is_err());
    }

    #[test]
    fn eer_separable_and_identical() {
        let e = compute_eer(&[0.9, 0.8, 0.2, 0.1], &[B, B, S, S]).unwrap();
        assert_eq!(e.eer_percent, 0.0);
        assert_eq!(e.threshold, 0.8);
        let e = compute_eer(&[0.5; 6], &[B, S, S, B, S, B]).unwrap();
        assert_eq!(e.eer_percent, 50.0);
        assert!(matches!(compute_eer(&[0.1, 0.2], &[S, S]), Err(Error::SingleClass(_))));
    }

    #[test]
    fn eer_golden_values() {
        // Non-tie crossing: FRR flat at 1/3 while FAR drops from 2/3 to 0.
        // Points: t=1 (1, 0), t=2 (1, 1/3)? -> scores sorted: S1? build explicitly.
        let scores = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let labels = [S, B, S, S, B, B];
        // t=1: FAR 1, FRR 0; t=2: FAR 2/3, FRR 0; t=3: FAR 2/3, FRR 1/3;
        // t=4: FAR 1/3, FRR 1/3 -> equal.
        let e = compute_eer(&scores, &labels).unwrap();
        assert!((e.eer_percent - 100.0 / 3.0).abs() < 1e-12);
        assert_eq!(e.threshold, 4.0);

        // Tie plateau: one bonafide and one spoof share 0.5.
        let scores = [0.1, 0.5, 0.5, 0.9];
        let labels = [S, S, B, B];
        // t=0.1: (1, 0); t=0.5: (0.5, 0); t=0.9: (0, 0.5) -> step from 0.5 is a tie.
        let e = compute_eer(&scores, &labels).unwrap();
        assert!((e.eer_percent - 25.0).abs() < 1e-12);
        assert!((e.threshold - 0.7).abs() < 1e-12);
    }

    #[test]
    fn eer_inverted_scores_exceed_half() {
        let e = compute_eer(&[0.1, 0.2, 0.8, 0.9], &[B, B, S, S]).unwrap();
        assert_eq!(e.eer_percent, 100.0);
    }

    #[test]
    fn sweep_sentinels() {
        let sw = threshold_sweep(&[0.3, 0.3, 0.3], &[B, S, B]).unwrap();
        assert_eq!(sw.rows.len(), 3);
        assert_eq!(sw.rows[0].threshold, f64::NEG_INFINITY);
        assert_eq!(sw.rows[2].threshold, f64::INFINITY);
        assert!(sw.rows.iter().all(|r| r.balanced_accuracy == 0.5));

        let sw = threshold_sweep(&[0.9, 0.8, 0.2, 0.1], &[B, B, S, S]).unwrap();
        assert_eq!(sw.best_row().balanced_accuracy, 1.0);
        assert_eq!(sw.best_row().threshold, 0.8);
        assert_eq!(sw.rows.len(), 6);
    }
}
