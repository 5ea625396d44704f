use serde::Serialize;

use crate::catalog::Label;
use crate::error::{Error, Result};
use crate::report::EmbeddingSet;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Separability {
    pub fisher_ratio: f64,
    pub silhouette: f64,
}

/// Fisher ratio and mean silhouette of the bonafide/spoof partition.
pub fn separability_scores(set: &EmbeddingSet) -> Result<Separability> {
    let (bona, spoof) = split(set)?;
    Ok(Separability {
        fisher_ratio: fisher(&bona, &spoof),
        silhouette: mean_silhouette(&bona, &spoof),
    })
}

pub fn fisher_ratio(set: &EmbeddingSet) -> Result<f64> {
    let (bona, spoof) = split(set)?;
    Ok(fisher(&bona, &spoof))
}

pub fn silhouette(set: &EmbeddingSet) -> Result<f64> {
    let (bona, spoof) = split(set)?;
    Ok(mean_silhouette(&bona, &spoof))
}

fn split(set: &EmbeddingSet) -> Result<(Vec<&[f64]>, Vec<&[f64]>)> {
    let mut bona = Vec::new();
    let mut spoof = Vec::new();
    for r in set.records() {
        match r.label {
            Label::Bonafide => bona.push(r.vector.as_slice()),
            Label::Spoof => spoof.push(r.vector.as_slice()),
        }
    }
    if bona.is_empty() || spoof.is_empty() {
        return Err(Error::SingleClass("separability"));
    }
    if bona.len() < 2 || spoof.len() < 2 {
        return Err(Error::InvalidArgument("separability needs at least 2 records per class".into()));
    }
    Ok((bona, spoof))
}

fn mean_of(points: &[&[f64]]) -> Vec<f64> {
    let mut m = vec![0.0; points[0].len()];
    for p in points {
        for (a, b) in m.iter_mut().zip(p.iter()) {
            *a += b;
        }
    }
    m.iter_mut().for_each(|a| *a /= points.len() as f64);
    m
}

/// Between-class over within-class variance of the projections onto the
/// unit axis joining the class means. Zero when the means coincide and
/// infinite when both classes collapse to single points on that axis.
fn fisher(bona: &[&[f64]], spoof: &[&[f64]]) -> f64 {
    let mb = mean_of(bona);
    let ms = mean_of(spoof);
    let mut axis: Vec<f64> = mb.iter().zip(&ms).map(|(a, b)| a - b).collect();
    let norm = axis.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        return 0.0;
    }
    axis.iter_mut().for_each(|v| *v /= norm);
    let project = |p: &[f64]| p.iter().zip(&axis).map(|(x, a)| x * a).sum::<f64>();

    let n = (bona.len() + spoof.len()) as f64;
    let mut between_num = 0.0;
    let mut within_num = 0.0;
    let classes = [bona, spoof];
    let proj: Vec<Vec<f64>> = classes.iter().map(|c| c.iter().map(|p| project(p)).collect()).collect();
    let grand = proj.iter().flatten().sum::<f64>() / n;
    for p in &proj {
        let m = p.iter().sum::<f64>() / p.len() as f64;
        between_num += p.len() as f64 * (m - grand).powi(2);
        within_num += p.iter().map(|v| (v - m).powi(2)).sum::<f64>();
    }
    if within_num == 0.0 {
        return f64::INFINITY;
    }
    between_num / within_num
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

fn mean_silhouette(bona: &[&[f64]], spoof: &[&[f64]]) -> f64 {
    let mut total = 0.0;
    for (own, other) in [(bona, spoof), (spoof, bona)] {
        for (i, p) in own.iter().enumerate() {
            let a = own
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, q)| euclid(p, q))
                .sum::<f64>()
                / (own.len() - 1) as f64;
            let b = other.iter().map(|q| euclid(p, q)).sum::<f64>() / other.len() as f64;
            let denom = a.max(b);
            if denom > 0.0 {
                total += (b - a) / denom;
            }
        }
    }
    total / (bona.len() + spoof.len()) as f64
}
