use std::collections::{BTreeMap, BTreeSet};

use spoofkit::catalog::{Catalog, CatalogEntry, Dataset, Label};
use spoofkit::manifest::{build_manifest, Manifest, Split};
use spoofkit::preset::{self, CompositionPreset, ValSystems};
use spoofkit::stub::{stub_catalog, StubOptions};
use spoofkit::validate::{validate_manifest, LineStatus};
use spoofkit::Error;

/// Reference selection written from the documented algorithm, with its own
/// generator, so a change in the library's draw order shows up here.
mod oracle {
    use super::*;

    const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

    fn mix(mut z: u64) -> u64 {
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    fn stream(seed: u64, tag: u64) -> impl FnMut() -> u64 {
        let mut state = mix(seed ^ tag.wrapping_mul(GAMMA));
        move || {
            state = state.wrapping_add(GAMMA);
            mix(state)
        }
    }

    fn choose(seed: u64, tag: u64, n: usize, count: usize) -> Vec<usize> {
        let mut next = stream(seed, tag);
        let mut below = |bound: u64| loop {
            let zone = u64::MAX - (u64::MAX % bound + 1) % bound;
            let x = next();
            if x <= zone {
                break x % bound;
            }
        };
        let mut idx: Vec<usize> = (0..n).collect();
        for i in 0..count {
            let j = i + below((n - i) as u64) as usize;
            idx.swap(i, j);
        }
        idx.truncate(count);
        idx
    }

    /// `sample_id -> split` for the whole composition.
    pub fn select(catalog: &Catalog, preset: &CompositionPreset, seed: u64) -> BTreeMap<String, Split> {
        let mut entries: Vec<&CatalogEntry> = catalog.entries().iter().collect();
        entries.sort_by(|a, b| (a.dataset, &a.sample_id).cmp(&(b.dataset, &b.sample_id)));
        let mut out = BTreeMap::new();
        for (i, q) in preset.quotas.iter().enumerate() {
            let pool: Vec<&CatalogEntry> = entries
                .iter()
                .copied()
                .filter(|e| !out.contains_key(&e.sample_id) && q.eligible(e))
                .collect();
            for k in choose(seed, i as u64, pool.len(), q.count) {
                out.insert(pool[k].sample_id.clone(), q.split);
            }
        }
        let mlaad_seed = mix(seed ^ (1u64 << 32).wrapping_mul(GAMMA));
        for (ri, rule) in preset.mlaad_rules.iter().enumerate() {
            let tag = (1u64 << 32) + 3 * ri as u64;
            let lang: Vec<&CatalogEntry> = entries
                .iter()
                .copied()
                .filter(|e| {
                    e.dataset == Dataset::Mlaad
                        && e.label == Label::Spoof
                        && e.language == rule.language
                        && !out.contains_key(&e.sample_id)
                })
                .collect();
            let systems: Vec<&str> = lang
                .iter()
                .map(|e| e.source_system.as_str())
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            let val: BTreeSet<&str> = match rule.val_systems {
                ValSystems::All => systems.iter().copied().collect(),
                ValSystems::Count(k) => choose(mlaad_seed, tag, systems.len(), k)
                    .into_iter()
                    .map(|i| systems[i])
                    .collect(),
            };
            for (want_val, count, t, split) in [
                (true, rule.val_count, tag + 1, Split::Val),
                (false, rule.train_count, tag + 2, Split::Train),
            ] {
                let pool: Vec<&CatalogEntry> = lang
                    .iter()
                    .copied()
                    .filter(|e| val.contains(e.source_system.as_str()) == want_val)
                    .collect();
                for k in choose(mlaad_seed, t, pool.len(), count) {
                    out.insert(pool[k].sample_id.clone(), split);
                }
            }
        }
        out
    }
}

fn setup(id: &str) -> (CompositionPreset, Catalog) {
    let p = preset::bundled(id).unwrap();
    let c = stub_catalog(&p, StubOptions::default());
    (p, c)
}

fn as_map(m: &Manifest) -> BTreeMap<String, Split> {
    m.entries()
        .iter()
        .map(|e| (e.entry.sample_id.clone(), e.split))
        .collect()
}

fn permuted(catalog: &Catalog, seed: u64) -> Catalog {
    let mut rng = spoofkit::rng::SplitMix64::new(seed);
    let n = catalog.len();
    let order = rng.sample_indices(n, n);
    Catalog::new(order.into_iter().map(|i| catalog.entries()[i].clone()).collect()).unwrap()
}

#[test]
fn iteration1_counts() {
    let (p, c) = setup("iter1");
    let m = build_manifest(&c, &p, 7).unwrap();
    let counts = m.counts();
    assert_eq!(counts.train_bonafide, 2_580);
    assert_eq!(counts.train_spoof, 22_800);
    assert_eq!(counts.val_total(), 0);
    assert!(m.entries().iter().all(|e| e.entry.sample_id.starts_with("LA_T_")));
}

#[test]
fn iteration2_and_3_totals() {
    for id in ["iter2", "iter3"] {
        let (p, c) = setup(id);
        let m = build_manifest(&c, &p, 11).unwrap();
        assert_eq!(m.counts().train_total(), 108_423, "{id}");
        assert_eq!(m.counts().val_total(), 45_606, "{id}");
        assert!(validate_manifest(&m, &p).pass, "{id}");
    }
}

#[test]
fn iteration4_mlaad_partition() {
    let (p, c) = setup("iter4");
    let m = build_manifest(&c, &p, 3).unwrap();
    let mut per_lang: BTreeMap<(String, Split), usize> = BTreeMap::new();
    let mut systems: BTreeMap<(String, Split), BTreeSet<String>> = BTreeMap::new();
    for e in m.entries().iter().filter(|e| e.entry.dataset == Dataset::Mlaad) {
        *per_lang.entry((e.entry.language.clone(), e.split)).or_default() += 1;
        systems
            .entry((e.entry.language.clone(), e.split))
            .or_default()
            .insert(e.entry.source_system.clone());
    }
    let (mut train, mut val) = (0, 0);
    for rule in &p.mlaad_rules {
        let get = |s| per_lang.get(&(rule.language.clone(), s)).copied().unwrap_or(0);
        assert_eq!(get(Split::Train), rule.train_count, "{} train", rule.language);
        assert_eq!(get(Split::Val), rule.val_count, "{} val", rule.language);
        train += get(Split::Train);
        val += get(Split::Val);
        let t = systems.get(&(rule.language.clone(), Split::Train)).cloned().unwrap_or_default();
        let v = systems.get(&(rule.language.clone(), Split::Val)).cloned().unwrap_or_default();
        assert!(t.is_disjoint(&v), "{} leaks systems", rule.language);
        if let ValSystems::Count(k) = rule.val_systems {
            if rule.val_count > 0 {
                assert_eq!(v.len(), k, "{} val systems", rule.language);
            }
        }
    }
    assert_eq!((train, val), (44_000, 16_000));
    assert_eq!(m.counts().train_total(), 207_300);
    assert_eq!(m.counts().val_total(), 56_800);
}

#[test]
fn matches_reference_selection() {
    for (id, seed) in [("iter1", 5u64), ("iter4", 9)] {
        let (p, c) = setup(id);
        let m = build_manifest(&c, &p, seed).unwrap();
        assert_eq!(as_map(&m), oracle::select(&c, &p, seed), "{id} seed {seed}");
    }
}

#[test]
fn byte_identical_across_runs_and_permutations() {
    let (p, c) = setup("iter2");
    for seed in [1u64, 42, 2024] {
        let a = build_manifest(&c, &p, seed).unwrap().to_tsv();
        let b = build_manifest(&c, &p, seed).unwrap().to_tsv();
        let shuffled = build_manifest(&permuted(&c, seed ^ 0xabc), &p, seed).unwrap().to_tsv();
        assert_eq!(a, b);
        assert_eq!(a, shuffled);
    }
    let a = build_manifest(&c, &p, 1).unwrap().to_tsv();
    let b = build_manifest(&c, &p, 2).unwrap().to_tsv();
    assert_ne!(a, b);
}

#[test]
fn manifest_file_round_trip() {
    let (p, c) = setup("iter1");
    let m = build_manifest(&c, &p, 3).unwrap();
    let text = m.to_tsv();
    let back = Manifest::parse(&text).unwrap();
    assert_eq!(back.to_tsv(), text);
    assert!(back.entries().iter().all(|e| e.selection_seed == 3 && e.iteration == 1));
}

#[test]
fn validation_detects_tampering() {
    let (p, c) = setup("iter1");
    let mut m = build_manifest(&c, &p, 7).unwrap();
    assert!(validate_manifest(&m, &p).pass);
    let victim = m.entries()[10].entry.sample_id.clone();
    m.remove(&victim).unwrap();
    let report = validate_manifest(&m, &p);
    assert!(!report.pass);
    let failing: Vec<_> = report.failing().collect();
    assert!(!failing.is_empty());
    assert!(report.to_text().contains("FAIL"));
}

#[test]
fn validation_detects_mlaad_system_leak() {
    let (p, c) = setup("iter4");
    let m = build_manifest(&c, &p, 7).unwrap();
    // Move one training sample of a validation system language into val.
    let mut entries = m.entries().to_vec();
    let val_system = entries
        .iter()
        .find(|e| e.entry.dataset == Dataset::Mlaad && e.split == Split::Val && e.entry.language == "de")
        .unwrap()
        .entry
        .source_system
        .clone();
    let pos = entries
        .iter()
        .position(|e| e.entry.dataset == Dataset::Mlaad && e.split == Split::Train && e.entry.language == "de")
        .unwrap();
    entries[pos].entry.source_system = val_system;
    let report = validate_manifest(&Manifest::new(entries).unwrap(), &p);
    assert!(!report.pass);
}

#[test]
fn iteration4_arithmetic_note() {
    let (p, c) = setup("iter4");
    let m = build_manifest(&c, &p, 7).unwrap();
    let report = validate_manifest(&m, &p);
    assert!(report.pass, "{}", report.to_text());
    let declared = p.declared_totals.unwrap();
    assert_eq!(declared.train_total, Some(200_000));
    assert_eq!(declared.val_total, Some(56_600));
    assert!(report
        .arithmetic_notes
        .iter()
        .any(|n| n.starts_with("train_total: declared 200000 but component quotas sum to 207300")));
    assert!(report.totals.iter().all(|t| t.status == LineStatus::Noted));
}

#[test]
fn constraint_violations() {
    let p = preset::bundled("iter4").unwrap();
    let full = stub_catalog(&p, StubOptions::default());

    let fewer: Vec<CatalogEntry> = full
        .entries()
        .iter()
        .filter(|e| !(e.dataset == Dataset::SpoofCeleb && e.label == Label::Spoof && e.sample_id.ends_with('7')))
        .cloned()
        .collect();
    let err = build_manifest(&Catalog::new(fewer).unwrap(), &p, 1).unwrap_err();
    assert!(matches!(err, Error::Shortfall { .. }), "{err}");
    assert!(err.is_constraint_violation());

    let no_hi: Vec<CatalogEntry> = full
        .entries()
        .iter()
        .filter(|e| !(e.dataset == Dataset::Mlaad && e.language == "hi"))
        .cloned()
        .collect();
    let err = build_manifest(&Catalog::new(no_hi).unwrap(), &p, 1).unwrap_err();
    assert!(matches!(err, Error::MissingLanguage(ref l) if l == "hi"), "{err}");

    let few_en: Vec<CatalogEntry> = full
        .entries()
        .iter()
        .filter(|e| !(e.dataset == Dataset::Mlaad && e.language == "en" && e.source_system.ends_with("_01")))
        .cloned()
        .collect();
    let err = build_manifest(&Catalog::new(few_en).unwrap(), &p, 1).unwrap_err();
    assert!(matches!(err, Error::TooFewSystems { needed: 36, .. }), "{err}");
}
