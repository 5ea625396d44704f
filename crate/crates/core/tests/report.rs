use nalgebra::{DMatrix, SymmetricEigen};
use spoofkit::catalog::Label;
use spoofkit::metrics::SourceRow;
use spoofkit::report::fixtures::{self, PUBLISHED_TASK1_SOURCES, PUBLISHED_TASK23_SOURCES};
use spoofkit::report::{
    pca_project, render_iteration_table, render_source_rows, render_source_table, separability_scores, EmbeddingRecord,
    EmbeddingSet,
};
use spoofkit::rng::SplitMix64;
use spoofkit::Error;

fn bold(table: &str) -> Vec<String> {
    table.split("**").skip(1).step_by(2).map(str::to_string).collect()
}

fn gaussian(rng: &mut SplitMix64) -> f64 {
    let u1 = 1.0 - rng.next_f64();
    let u2 = rng.next_f64();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

fn cloud(seed: u64, n: usize, scales: &[f64], shift: &[f64]) -> EmbeddingSet {
    let mut rng = SplitMix64::new(seed);
    EmbeddingSet::new(
        (0..n)
            .map(|i| EmbeddingRecord {
                sample_id: format!("r{i:05}"),
                label: if i % 2 == 0 { Label::Bonafide } else { Label::Spoof },
                vector: scales.iter().zip(shift).map(|(s, m)| s * gaussian(&mut rng) + m).collect(),
            })
            .collect(),
    )
    .unwrap()
}

fn map_vectors(set: &EmbeddingSet, f: impl Fn(&[f64]) -> Vec<f64>) -> EmbeddingSet {
    EmbeddingSet::new(
        set.records()
            .iter()
            .map(|r| EmbeddingRecord {
                vector: f(&r.vector),
                ..r.clone()
            })
            .collect(),
    )
    .unwrap()
}

#[test]
fn published_iteration_table_bolds_column_bests() {
    let t = render_iteration_table(&fixtures::published_iterations());
    assert_eq!(bold(&t), ["0.810", "0.819", "0.905", "8.42", "0.623"]);
    assert!(t.starts_with("| Iter | SSL Model | Task1 | Task2 | Task3 | ITW BA | ITW EER |"));
    assert!(t.contains("| 4 | MAE-AST | 0.640 | 0.536 | **0.623** | 0.603 | 39.90 |"));
    assert_eq!(render_iteration_table(&fixtures::published_iterations()), t);
}

#[test]
fn published_source_tables_bold_weak_sources() {
    let t = render_source_rows(&fixtures::source_rows(&PUBLISHED_TASK1_SOURCES));
    assert!(t.contains("| JapSWave | — | **0.39** | — |"));
    let mut weak = bold(&t);
    weak.sort();
    assert_eq!(weak, ["0.39", "0.47", "0.48", "0.52", "0.53", "0.58", "0.58"]);
    assert!(t.find("### pristine").unwrap() < t.find("### generated").unwrap());

    let t = render_source_rows(&fixtures::source_rows(&PUBLISHED_TASK23_SOURCES));
    let mut weak = bold(&t);
    weak.sort();
    assert_eq!(weak, ["0.49", "0.51", "0.52"]);
}

#[test]
fn source_boundary_is_inclusive() {
    let row = |source: &str, metric: f64| SourceRow {
        source: source.into(),
        label: Label::Spoof,
        n: 3,
        recall: metric,
        metric,
        flag_low: metric <= 0.60,
    };
    let t = render_source_table(&[row("fish", 0.60), row("kokoro", 0.61)]);
    assert_eq!(bold(&t), ["0.60"]);
}

#[test]
fn pca_matches_eigendecomposition() {
    let set = cloud(5, 2000, &[3.0, 2.0, 1.0, 0.5], &[1.0, -2.0, 0.0, 4.0]);
    let p = pca_project(&set, 4).unwrap();

    let n = set.len();
    let d = set.dim();
    let x = DMatrix::from_fn(n, d, |i, j| set.records()[i].vector[j]);
    let mean = x.row_mean();
    let centered = DMatrix::from_fn(n, d, |i, j| x[(i, j)] - mean[j]);
    let cov = centered.transpose() * &centered / n as f64;
    let eig = SymmetricEigen::new(cov.clone());
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let trace = cov.trace();

    for (c, &k) in order.iter().enumerate() {
        let share = eig.eigenvalues[k] / trace;
        assert!((p.explained_variance_ratio[c] - share).abs() < 1e-8, "component {c}");
        let v = eig.eigenvectors.column(k);
        let dot: f64 = p.components[c].iter().zip(v.iter()).map(|(a, b)| a * b).sum();
        assert!((dot.abs() - 1.0).abs() < 1e-6, "component {c}: |dot| = {}", dot.abs());
    }
}

#[test]
fn isotropic_cloud_has_even_shares() {
    let d = 4;
    let set = cloud(9, 20_000, &vec![1.0; d], &vec![0.0; d]);
    let p = pca_project(&set, d).unwrap();
    for s in &p.explained_variance_ratio {
        assert!((s - 1.0 / d as f64).abs() < 0.05 / d as f64, "{s}");
    }
}

#[test]
fn pca_invariances() {
    let set = cloud(13, 300, &[2.0, 1.0, 0.3], &[0.0, 0.0, 0.0]);
    let base = pca_project(&set, 2).unwrap();

    let shifted = pca_project(&map_vectors(&set, |v| v.iter().map(|x| x + 10.0).collect()), 2).unwrap();
    for (a, b) in base.points.iter().zip(&shifted.points) {
        assert!((a.1[0] - b.1[0]).abs() < 1e-8 && (a.1[1] - b.1[1]).abs() < 1e-8);
    }

    let relabeled = EmbeddingSet::new(
        set.records()
            .iter()
            .map(|r| EmbeddingRecord {
                sample_id: format!("other-{}", r.sample_id),
                label: r.label.opposite(),
                ..r.clone()
            })
            .collect(),
    )
    .unwrap();
    let rel = pca_project(&relabeled, 2).unwrap();
    assert_eq!(rel.components, base.components);

    let doubled = EmbeddingSet::new(
        set.records()
            .iter()
            .cloned()
            .chain(set.records().iter().map(|r| EmbeddingRecord {
                sample_id: format!("dup-{}", r.sample_id),
                ..r.clone()
            }))
            .collect(),
    )
    .unwrap();
    let dup = pca_project(&doubled, 2).unwrap();
    for (i, a) in base.points.iter().enumerate() {
        for b in [&dup.points[i], &dup.points[i + set.len()]] {
            assert!((a.1[0] - b.1[0]).abs() < 1e-8 && (a.1[1] - b.1[1]).abs() < 1e-8);
        }
    }
}

#[test]
fn zero_variance_is_an_error() {
    let set = map_vectors(&cloud(1, 10, &[1.0, 1.0], &[0.0, 0.0]), |_| vec![2.0, 3.0]);
    assert!(matches!(pca_project(&set, 2), Err(Error::ZeroVariance)));
}

fn silhouette_oracle(set: &EmbeddingSet) -> f64 {
    let r = set.records();
    let dist = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
    let mut total = 0.0;
    for i in 0..r.len() {
        let (mut same, mut ns, mut other, mut no) = (0.0, 0, 0.0, 0);
        for j in 0..r.len() {
            if i == j {
                continue;
            }
            let dij = dist(&r[i].vector, &r[j].vector);
            if r[j].label == r[i].label {
                same += dij;
                ns += 1;
            } else {
                other += dij;
                no += 1;
            }
        }
        let a = same / ns as f64;
        let b = other / no as f64;
        total += (b - a) / a.max(b);
    }
    total / r.len() as f64
}

#[test]
fn separated_clusters() {
    let mut rng = SplitMix64::new(4);
    let records = (0..200)
        .map(|i| {
            let (label, c) = if i < 100 { (Label::Bonafide, 0.0) } else { (Label::Spoof, 50.0) };
            EmbeddingRecord {
                sample_id: format!("p{i}"),
                label,
                vector: vec![c + 0.1 * gaussian(&mut rng), 0.1 * gaussian(&mut rng), c],
            }
        })
        .collect();
    let set = EmbeddingSet::new(records).unwrap();
    let s = separability_scores(&set).unwrap();
    assert!(s.silhouette > 0.9, "{}", s.silhouette);
    assert!((s.silhouette - silhouette_oracle(&set)).abs() < 1e-12);
    assert!(s.fisher_ratio > 100.0);
}

#[test]
fn shuffled_labels_have_no_structure() {
    let set = cloud(17, 500, &[1.0, 1.0, 1.0], &[0.0, 0.0, 0.0]);
    let mut rng = SplitMix64::new(99);
    let shuffled = EmbeddingSet::new(
        set.records()
            .iter()
            .map(|r| EmbeddingRecord {
                label: if rng.next_bool() { Label::Bonafide } else { Label::Spoof },
                ..r.clone()
            })
            .collect(),
    )
    .unwrap();
    let s = separability_scores(&shuffled).unwrap();
    assert!(s.silhouette.abs() < 0.1, "{}", s.silhouette);
    assert!((s.silhouette - silhouette_oracle(&shuffled)).abs() < 1e-12);
}

#[test]
fn separability_is_rotation_invariant() {
    let mut rng = SplitMix64::new(23);
    let records: Vec<EmbeddingRecord> = (0..120)
        .map(|i| {
            let label = if i % 3 == 0 { Label::Bonafide } else { Label::Spoof };
            let c = if label == Label::Bonafide { 1.5 } else { -0.5 };
            EmbeddingRecord {
                sample_id: format!("q{i}"),
                label,
                vector: (0..3).map(|_| c + gaussian(&mut rng)).collect(),
            }
        })
        .collect();
    let set = EmbeddingSet::new(records).unwrap();
    let q = DMatrix::from_fn(3, 3, |_, _| gaussian(&mut rng)).qr().q();
    let rotated = map_vectors(&set, |v| {
        let out = &q * nalgebra::DVector::from_column_slice(v);
        out.iter().copied().collect()
    });
    let a = separability_scores(&set).unwrap();
    let b = separability_scores(&rotated).unwrap();
    assert!((a.fisher_ratio - b.fisher_ratio).abs() < 1e-9 * a.fisher_ratio.max(1.0));
    assert!((a.silhouette - b.silhouette).abs() < 1e-9);
}

#[test]
fn wide_embeddings_round_trip() {
    let set = cloud(31, 8, &vec![1.0; 1024], &vec![0.0; 1024]);
    let text = set.to_tsv().unwrap();
    let back = EmbeddingSet::parse(&text).unwrap();
    assert_eq!(back.dim(), 1024);
    assert_eq!(back, set);
}
