use serde::Serialize;

use crate::error::{Error, Result};
use crate::report::EmbeddingSet;
use crate::rng::SplitMix64;

pub const PCA_TOLERANCE: f64 = 1e-10;
pub const PCA_MAX_ITERATIONS: usize = 1000;

const START_SEED: u64 = 0x5eed_0f_9ca;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Projection {
    /// `(sample_id, coordinates)` in record order.
    pub points: Vec<(String, Vec<f64>)>,
    /// Unit principal directions, one per component.
    pub components: Vec<Vec<f64>>,
    /// Share of total variance captured by each component.
    pub explained_variance_ratio: Vec<f64>,
}

/// Projects mean-centered embeddings onto their top `k` principal directions.
///
/// Each direction is found by power iteration on `XᵀX` (never formed
/// explicitly), re-orthogonalized against earlier directions on every step.
/// The start vector is a fixed pseudo-random unit vector. Iteration stops
/// when the direction moves less than [`PCA_TOLERANCE`] or after
/// [`PCA_MAX_ITERATIONS`] steps. Each direction is flipped so that its first
/// non-negligible loading is positive.
pub fn pca_project(set: &EmbeddingSet, k: usize) -> Result<Projection> {
    let n = set.len();
    let d = set.dim();
    if n < 2 || d < 2 {
        return Err(Error::InvalidArgument(format!(
            "PCA needs at least 2 records of dimension >= 2, got {n} of dimension {d}"
        )));
    }
    if k == 0 || k > d {
        return Err(Error::InvalidArgument(format!("k must be in 1..={d}, got {k}")));
    }

    let mut mean = vec![0.0; d];
    for r in set.records() {
        for (m, v) in mean.iter_mut().zip(&r.vector) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n as f64);
    let x: Vec<Vec<f64>> = set
        .records()
        .iter()
        .map(|r| r.vector.iter().zip(&mean).map(|(v, m)| v - m).collect())
        .collect();
    let total: f64 = x.iter().flatten().map(|v| v * v).sum();
    if total == 0.0 {
        return Err(Error::ZeroVariance);
    }

    let mut rng = SplitMix64::new(START_SEED);
    let mut components: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut ratios = Vec::with_capacity(k);
    for _ in 0..k {
        let mut v: Vec<f64> = (0..d).map(|_| rng.uniform(-1.0, 1.0)).collect();
        orthogonalize(&mut v, &components);
        normalize(&mut v);
        for _ in 0..PCA_MAX_ITERATIONS {
            let mut w = gram_apply(&x, &v);
            orthogonalize(&mut w, &components);
            orthogonalize(&mut w, &components);
            // `total` bounds the largest eigenvalue, so this is numerically zero:
            // v already lies in the null space of the remaining data.
            if normalize(&mut w) <= total * 1e-12 {
                break;
            }
            let delta = dist2(&w, &v);
            v = w;
            if delta < PCA_TOLERANCE * PCA_TOLERANCE {
                break;
            }
        }
        canonical_sign(&mut v);
        let energy: f64 = x.iter().map(|row| dot(row, &v).powi(2)).sum();
        ratios.push(energy / total);
        components.push(v);
    }

    let points = set
        .records()
        .iter()
        .zip(&x)
        .map(|(r, row)| (r.sample_id.clone(), components.iter().map(|c| dot(row, c)).collect()))
        .collect();
    Ok(Projection {
        points,
        components,
        explained_variance_ratio: ratios,
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `Xᵀ (X v)`.
fn gram_apply(x: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; v.len()];
    for row in x {
        let p = dot(row, v);
        for (o, r) in out.iter_mut().zip(row) {
            *o += p * r;
        }
    }
    out
}

fn orthogonalize(v: &mut [f64], basis: &[Vec<f64>]) {
    for b in basis {
        let p = dot(v, b);
        for (x, y) in v.iter_mut().zip(b) {
            *x -= p * y;
        }
    }
}

fn normalize(v: &mut [f64]) -> f64 {
    let norm = dot(v, v).sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    norm
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum()
}

fn canonical_sign(v: &mut [f64]) {
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-9) {
        if *first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}
