//! Train/validation manifests and the seeded selection that builds them.
//!
//! Selection is deterministic given `(catalog content, preset, seed)`:
//!
//! 1. Catalog entries are put in canonical `(dataset, sample_id)` order, so
//!    the file order of the catalog never matters.
//! 2. Quota lines are processed in preset order. Line `i` draws from the
//!    entries it deems eligible that no earlier line has taken, using a
//!    partial Fisher–Yates shuffle driven by
//!    `SplitMix64::new(derive_seed(seed, i))`.
//! 3. MLAAD rules then partition the MLAAD spoof entries that remain (see
//!    [`build_mlaad_split`]).
//!
//! A manifest file is the catalog columns followed by `split`, `iteration`
//! and `selection_seed`, sorted by `(dataset, sample_id)`.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::catalog::{Catalog, CatalogEntry, Dataset, Label, CATALOG_COLUMNS};
use crate::error::{Error, Result};
use crate::preset::{CompositionPreset, MlaadRule, SplitCounts, ValSystems};
use crate::rng::{derive_seed, SplitMix64};
use crate::tsv;

pub const MANIFEST_COLUMNS: [&str; 10] = [
    "sample_id",
    "path",
    "label",
    "dataset",
    "language",
    "source_system",
    "duration_s",
    "split",
    "iteration",
    "selection_seed",
];

/// Stream tag for the MLAAD partition, far above any quota-line index.
const MLAAD_STREAM: u64 = 1 << 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Val,
}

impl Split {
    pub fn as_str(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Val => "val",
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Split {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "train" => Ok(Split::Train),
            "val" => Ok(Split::Val),
            other => Err(format!("unknown split `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub entry: CatalogEntry,
    pub split: Split,
    pub iteration: u8,
    /// Seed passed to [`build_manifest`] for this selection.
    pub selection_seed: u64,
}

/// A selection of catalog entries, kept in canonical order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Manifest {
    entries: Vec<ManifestEntry>,
}

impl Manifest {
    /// Builds a manifest, sorting entries canonically. Fails if a sample id
    /// repeats (which also rules out train/val overlap).
    pub fn new(mut entries: Vec<ManifestEntry>) -> Result<Self> {
        entries.sort_by(|a, b| a.entry.canonical_key().cmp(&b.entry.canonical_key()));
        let mut seen = HashSet::with_capacity(entries.len());
        for e in &entries {
            if !seen.insert(e.entry.sample_id.as_str()) {
                return Err(Error::DuplicateId(e.entry.sample_id.clone()));
            }
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[ManifestEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn split(&self, split: Split) -> impl Iterator<Item = &ManifestEntry> {
        self.entries.iter().filter(move |e| e.split == split)
    }

    pub fn counts(&self) -> SplitCounts {
        let mut c = SplitCounts::default();
        for e in &self.entries {
            c.add(e.split, e.entry.label, 1);
        }
        c
    }

    /// Removes and returns the entry with this id.
    pub fn remove(&mut self, sample_id: &str) -> Option<ManifestEntry> {
        let pos = self.entries.iter().position(|e| e.entry.sample_id == sample_id)?;
        Some(self.entries.remove(pos))
    }

    pub fn get(&self, sample_id: &str) -> Option<&ManifestEntry> {
        self.entries.iter().find(|e| e.entry.sample_id == sample_id)
    }

    pub fn to_tsv(&self) -> String {
        use std::fmt::Write;
        let mut out = MANIFEST_COLUMNS.join("\t");
        out.push('\n');
        for e in &self.entries {
            e.entry.write_fields(&mut out);
            let _ = writeln!(out, "\t{}\t{}\t{}", e.split, e.iteration, e.selection_seed);
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = tsv::records(text);
        let (hl, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing header line"))?;
        tsv::expect_header(hl, header, &MANIFEST_COLUMNS)?;
        let mut entries = Vec::new();
        for (line_no, line) in lines {
            let f = tsv::split_exact(line_no, line, MANIFEST_COLUMNS.len())?;
            let entry = CatalogEntry::parse_fields(&f[..CATALOG_COLUMNS.len()])
                .map_err(|m| Error::parse(line_no, m))?;
            let split = f[7].parse().map_err(|m: String| Error::parse(line_no, m))?;
            let iteration: u8 = f[8]
                .parse()
                .ok()
                .filter(|i| (1..=4).contains(i))
                .ok_or_else(|| Error::parse(line_no, format!("invalid iteration `{}`", f[8])))?;
            let selection_seed = f[9]
                .parse()
                .map_err(|_| Error::parse(line_no, format!("invalid selection_seed `{}`", f[9])))?;
            entries.push(ManifestEntry {
                entry,
                split,
                iteration,
                selection_seed,
            });
        }
        Manifest::new(entries)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text).map_err(|e| e.in_file(path.display().to_string()))
    }
}

/// Draws the composition described by `preset` from `catalog`.
pub fn build_manifest(catalog: &Catalog, preset: &CompositionPreset, seed: u64) -> Result<Manifest> {
    preset.check()?;
    let canonical = catalog.canonical();
    let mut taken = vec![false; canonical.len()];
    let mut out = Vec::new();
    let wrap = |entry: &CatalogEntry, split: Split| ManifestEntry {
        entry: entry.clone(),
        split,
        iteration: preset.iteration,
        selection_seed: seed,
    };

    for (i, line) in preset.quotas.iter().enumerate() {
        let pool: Vec<usize> = (0..canonical.len())
            .filter(|&k| !taken[k] && line.eligible(canonical[k]))
            .collect();
        if pool.len() < line.count {
            return Err(Error::Shortfall {
                quota: format!("quota line {} ({line})", i + 1),
                needed: line.count,
                available: pool.len(),
            });
        }
        let mut rng = SplitMix64::new(derive_seed(seed, i as u64));
        for pick in rng.sample_indices(pool.len(), line.count) {
            let k = pool[pick];
            taken[k] = true;
            out.push(wrap(canonical[k], line.split));
        }
    }

    if !preset.mlaad_rules.is_empty() {
        let remaining: Vec<&CatalogEntry> = canonical
            .iter()
            .zip(&taken)
            .filter(|(_, &t)| !t)
            .map(|(e, _)| *e)
            .collect();
        let split = build_mlaad_split(&remaining, &preset.mlaad_rules, derive_seed(seed, MLAAD_STREAM))?;
        out.extend(split.train.iter().map(|e| wrap(e, Split::Train)));
        out.extend(split.val.iter().map(|e| wrap(e, Split::Val)));
    }

    Manifest::new(out)
}

/// Train/validation systems chosen for one MLAAD language.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct LanguageSystems {
    pub train_systems: BTreeSet<String>,
    pub val_systems: BTreeSet<String>,
}

#[derive(Debug, Clone, Default)]
pub struct MlaadSplit {
    pub train: Vec<CatalogEntry>,
    pub val: Vec<CatalogEntry>,
    pub systems: BTreeMap<String, LanguageSystems>,
}

/// Partitions MLAAD spoof samples per language so that validation systems
/// are never seen in training.
///
/// For each rule, in rule order: the language's distinct systems are sorted,
/// `val_systems` of them are chosen uniformly (or all, or none), and then
/// `val_count` / `train_count` samples are drawn uniformly from the samples
/// of the validation / training systems. Entries that are not MLAAD spoof
/// samples are ignored; input order is irrelevant.
pub fn build_mlaad_split(entries: &[&CatalogEntry], rules: &[MlaadRule], seed: u64) -> Result<MlaadSplit> {
    let mut mlaad: Vec<&CatalogEntry> = entries
        .iter()
        .copied()
        .filter(|e| e.dataset == Dataset::Mlaad && e.label == Label::Spoof)
        .collect();
    mlaad.sort_by(|a, b| a.canonical_key().cmp(&b.canonical_key()));

    let mut result = MlaadSplit::default();
    for (ri, rule) in rules.iter().enumerate() {
        let lang: Vec<&CatalogEntry> = mlaad
            .iter()
            .copied()
            .filter(|e| e.language == rule.language)
            .collect();
        if lang.is_empty() {
            return Err(Error::MissingLanguage(rule.language.clone()));
        }
        let systems: Vec<&str> = lang
            .iter()
            .map(|e| e.source_system.as_str())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let required = rule.required_systems();
        if systems.len() < required {
            return Err(Error::TooFewSystems {
                language: rule.language.clone(),
                needed: required,
                available: systems.len(),
            });
        }

        let tag = MLAAD_STREAM + 3 * ri as u64;
        let val_set: BTreeSet<&str> = match rule.val_systems {
            ValSystems::All => systems.iter().copied().collect(),
            ValSystems::Count(k) => SplitMix64::new(derive_seed(seed, tag))
                .sample_indices(systems.len(), k)
                .into_iter()
                .map(|i| systems[i])
                .collect(),
        };

        let draw = |want_val: bool, count: usize, stream: u64, what: Split| -> Result<Vec<CatalogEntry>> {
            let pool: Vec<&CatalogEntry> = lang
                .iter()
                .copied()
                .filter(|e| val_set.contains(e.source_system.as_str()) == want_val)
                .collect();
            if pool.len() < count {
                return Err(Error::Shortfall {
                    quota: format!("MLAAD {} {what}", rule.language),
                    needed: count,
                    available: pool.len(),
                });
            }
            Ok(SplitMix64::new(derive_seed(seed, stream))
                .sample_indices(pool.len(), count)
                .into_iter()
                .map(|i| pool[i].clone())
                .collect())
        };
        result.val.extend(draw(true, rule.val_count, tag + 1, Split::Val)?);
        result.train.extend(draw(false, rule.train_count, tag + 2, Split::Train)?);

        result.systems.insert(
            rule.language.clone(),
            LanguageSystems {
                val_systems: val_set.iter().map(|s| s.to_string()).collect(),
                train_systems: systems
                    .iter()
                    .filter(|s| !val_set.contains(*s))
                    .map(|s| s.to_string())
                    .collect(),
            },
        );
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preset::{bundled, QuotaLine};

    fn entry(id: &str, dataset: Dataset, label: Label, lang: &str, system: &str) -> CatalogEntry {
        CatalogEntry {
            sample_id: id.into(),
            path: format!("{id}.wav"),
            label,
            dataset,
            language: lang.into(),
            source_system: system.into(),
            duration_s: None,
        }
    }

    fn small_catalog() -> Catalog {
        let mut v = Vec::new();
        for i in 0..20 {
            v.push(entry(&format!("b{i:02}"), Dataset::MAilabs, Label::Bonafide, "de", "mailabs"));
            v.push(entry(&format!("s{i:02}"), Dataset::CodecFakeA2, Label::Spoof, "en", "valle_x"));
        }
        Catalog::new(v).unwrap()
    }

    fn preset(quotas: Vec<QuotaLine>) -> CompositionPreset {
        CompositionPreset {
            format_version: 1,
            id: "test".into(),
            description: String::new(),
            iteration: 2,
            segment_length_s: 4,
            quotas,
            mlaad_rules: vec![],
            declared_totals: None,
            training: None,
        }
    }

    fn line(dataset: Dataset, label: Label, split: Split, count: usize) -> QuotaLine {
        QuotaLine {
            dataset,
            label,
            split,
            count,
            languages: vec![],
            sample_id_prefix: None,
            source_prefixes: vec![],
        }
    }

    #[test]
    fn zero_quotas_give_empty_manifest() {
        let m = build_manifest(&small_catalog(), &bundled("iter2").unwrap().zeroed(), 3).unwrap();
        assert!(m.is_empty());
        assert_eq!(m.to_tsv().lines().count(), 1);
    }

    #[test]
    fn quotas_are_exact_and_disjoint() {
        let p = preset(vec![
            line(Dataset::MAilabs, Label::Bonafide, Split::Train, 12),
            line(Dataset::MAilabs, Label::Bonafide, Split::Val, 8),
            line(Dataset::CodecFakeA2, Label::Spoof, Split::Train, 5),
        ]);
        let m = build_manifest(&small_catalog(), &p, 11).unwrap();
        let c = m.counts();
        assert_eq!((c.train_bonafide, c.val_bonafide, c.train_spoof), (12, 8, 5));
        let train: HashSet<_> = m.split(Split::Train).map(|e| &e.entry.sample_id).collect();
        assert!(m.split(Split::Val).all(|e| !train.contains(&e.entry.sample_id)));
        assert!(m.entries().iter().all(|e| e.selection_seed == 11 && e.iteration == 2));
    }

    #[test]
    fn shortfall_names_line() {
        let p = preset(vec![line(Dataset::CodecFakeA2, Label::Spoof, Split::Train, 21)]);
        let err = build_manifest(&small_catalog(), &p, 0).unwrap_err();
        match &err {
            Error::Shortfall { quota, needed, available } => {
                assert!(quota.contains("quota line 1"), "{quota}");
                assert_eq!((*needed, *available), (21, 20));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(err.to_string().contains("short by 1"));
    }

    #[test]
    fn different_seeds_differ() {
        let p = preset(vec![line(Dataset::MAilabs, Label::Bonafide, Split::Train, 5)]);
        let a = build_manifest(&small_catalog(), &p, 1).unwrap();
        let b = build_manifest(&small_catalog(), &p, 2).unwrap();
        assert_ne!(
            a.entries().iter().map(|e| &e.entry.sample_id).collect::<Vec<_>>(),
            b.entries().iter().map(|e| &e.entry.sample_id).collect::<Vec<_>>()
        );
    }

    #[test]
    fn mlaad_errors() {
        let v: Vec<CatalogEntry> = (0..10)
            .map(|i| entry(&format!("m{i}"), Dataset::Mlaad, Label::Spoof, "en", &format!("sys{}", i % 3)))
            .collect();
        let refs: Vec<&CatalogEntry> = v.iter().collect();
        let rule = |lang: &str, k| MlaadRule {
            language: lang.into(),
            val_systems: ValSystems::Count(k),
            train_count: 1,
            val_count: 1,
            min_systems: None,
        };
        assert!(matches!(
            build_mlaad_split(&refs, &[rule("uk", 1)], 0),
            Err(Error::MissingLanguage(l)) if l == "uk"
        ));
        assert!(matches!(
            build_mlaad_split(&refs, &[rule("en", 3)], 0),
            Err(Error::TooFewSystems { needed: 4, available: 3, .. })
        ));
        let ok = build_mlaad_split(&refs, &[rule("en", 2)], 0).unwrap();
        let s = &ok.systems["en"];
        assert_eq!((s.val_systems.len(), s.train_systems.len()), (2, 1));
        assert!(s.val_systems.is_disjoint(&s.train_systems));
    }

    #[test]
    fn parse_reports_line_numbers() {
        let m = build_manifest(
            &small_catalog(),
            &preset(vec![line(Dataset::MAilabs, Label::Bonafide, Split::Train, 2)]),
            5,
        )
        .unwrap();
        let text = m.to_tsv().replace("\ttrain\t", "\ttest\t");
        match Manifest::parse(&text) {
            Err(Error::Parse { line: 2, message, .. }) => assert!(message.contains("split")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn three_entries_four_lines() {
        let m = build_manifest(
            &small_catalog(),
            &preset(vec![line(Dataset::CodecFakeA2, Label::Spoof, Split::Val, 3)]),
            5,
        )
        .unwrap();
        let text = m.to_tsv();
        assert_eq!(text.lines().count(), 4);
        assert_eq!(Manifest::parse(&text).unwrap(), m);
        assert_eq!(Manifest::default().to_tsv(), format!("{}\n", MANIFEST_COLUMNS.join("\t")));
    }
}
