//! Training-data composition presets.
//!
//! A preset is the complete recipe for one training-data iteration: which
//! samples to draw from which dataset (quota lines), how MLAAD is partitioned
//! per language into known-system training data and held-out-system
//! validation data (MLAAD rules), the segment length used downstream, and
//! optionally the totals the composition is supposed to reach.
//!
//! Presets are JSON documents. Four are bundled (`iter1` .. `iter4`); see
//! [`bundled`].

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::catalog::{CatalogEntry, Dataset, Label};
use crate::error::{Error, Result};
use crate::manifest::Split;

/// One line of a composition: draw `count` samples of `label` from
/// `dataset` into `split`, restricted by the optional eligibility filters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuotaLine {
    pub dataset: Dataset,
    pub label: Label,
    pub split: Split,
    pub count: usize,
    /// Allowed languages; empty means any.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub languages: Vec<String>,
    /// Only ids starting with this prefix are eligible (e.g. `LA_T_` for the
    /// ASVspoof 2019 training partition, `LA_D_` for development).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_id_prefix: Option<String>,
    /// Only samples whose `source_system` starts with one of these prefixes
    /// are eligible; empty means any.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub source_prefixes: Vec<String>,
}

impl QuotaLine {
    pub fn eligible(&self, e: &CatalogEntry) -> bool {
        e.dataset == self.dataset
            && e.label == self.label
            && (self.languages.is_empty() || self.languages.iter().any(|l| *l == e.language))
            && self
                .sample_id_prefix
                .as_deref()
                .map_or(true, |p| e.sample_id.starts_with(p))
            && (self.source_prefixes.is_empty()
                || self
                    .source_prefixes
                    .iter()
                    .any(|p| e.source_system.starts_with(p.as_str())))
    }
}

impl fmt::Display for QuotaLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.dataset, self.label, self.split)?;
        if !self.languages.is_empty() {
            write!(f, " lang={}", self.languages.join(","))?;
        }
        if let Some(p) = &self.sample_id_prefix {
            write!(f, " id={p}*")?;
        }
        if !self.source_prefixes.is_empty() {
            write!(f, " source={}", self.source_prefixes.join("|"))?;
        }
        Ok(())
    }
}

/// How many of a language's TTS systems are held out for validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValSystems {
    All,
    Count(usize),
}

impl Serialize for ValSystems {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ValSystems::All => s.serialize_str("all"),
            ValSystems::Count(n) => s.serialize_u64(*n as u64),
        }
    }
}

impl<'de> Deserialize<'de> for ValSystems {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Count(usize),
            Word(String),
        }
        match Raw::deserialize(d)? {
            Raw::Count(n) => Ok(ValSystems::Count(n)),
            Raw::Word(w) if w == "all" => Ok(ValSystems::All),
            Raw::Word(w) => Err(serde::de::Error::custom(format!(
                "val_systems must be a count or \"all\", got \"{w}\""
            ))),
        }
    }
}

/// Per-language MLAAD partition rule. Validation systems are disjoint from
/// training systems within the language.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlaadRule {
    pub language: String,
    pub val_systems: ValSystems,
    pub train_count: usize,
    pub val_count: usize,
    /// Minimum number of distinct systems the language must offer.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_systems: Option<usize>,
}

impl MlaadRule {
    /// Distinct systems needed to satisfy the rule given `available` systems.
    pub fn required_systems(&self) -> usize {
        let structural = match self.val_systems {
            ValSystems::All => 1,
            ValSystems::Count(k) => k + usize::from(self.train_count > 0),
        };
        structural.max(self.min_systems.unwrap_or(0))
    }
}

/// Totals a composition is declared to reach. Each figure is optional.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeclaredTotals {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub train_total: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub train_bonafide: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub train_spoof: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub val_total: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub val_bonafide: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub val_spoof: Option<usize>,
}

/// Counts per split and label.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitCounts {
    pub train_bonafide: usize,
    pub train_spoof: usize,
    pub val_bonafide: usize,
    pub val_spoof: usize,
}

impl SplitCounts {
    pub fn add(&mut self, split: Split, label: Label, n: usize) {
        match (split, label) {
            (Split::Train, Label::Bonafide) => self.train_bonafide += n,
            (Split::Train, Label::Spoof) => self.train_spoof += n,
            (Split::Val, Label::Bonafide) => self.val_bonafide += n,
            (Split::Val, Label::Spoof) => self.val_spoof += n,
        }
    }

    pub fn train_total(&self) -> usize {
        self.train_bonafide + self.train_spoof
    }

    pub fn val_total(&self) -> usize {
        self.val_bonafide + self.val_spoof
    }

    /// `(name, value)` pairs in declared-totals field order.
    pub fn named(&self) -> [(&'static str, usize); 6] {
        [
            ("train_total", self.train_total()),
            ("train_bonafide", self.train_bonafide),
            ("train_spoof", self.train_spoof),
            ("val_total", self.val_total()),
            ("val_bonafide", self.val_bonafide),
            ("val_spoof", self.val_spoof),
        ]
    }
}

impl DeclaredTotals {
    pub fn named(&self) -> [(&'static str, Option<usize>); 6] {
        [
            ("train_total", self.train_total),
            ("train_bonafide", self.train_bonafide),
            ("train_spoof", self.train_spoof),
            ("val_total", self.val_total),
            ("val_bonafide", self.val_bonafide),
            ("val_spoof", self.val_spoof),
        ]
    }
}

/// Training hyper-parameters carried along with a preset. Nothing in the
/// toolkit reads them.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TrainingMetadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub optimizer: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub learning_rate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epochs: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub loss: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub augmentation: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompositionPreset {
    pub format_version: u32,
    pub id: String,
    #[serde(default)]
    pub description: String,
    pub iteration: u8,
    pub segment_length_s: u32,
    #[serde(default)]
    pub quotas: Vec<QuotaLine>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub mlaad_rules: Vec<MlaadRule>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub declared_totals: Option<DeclaredTotals>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub training: Option<TrainingMetadata>,
}

pub const BUNDLED_IDS: [&str; 4] = ["iter1", "iter2", "iter3", "iter4"];

/// Returns one of the bundled presets by id (`iter1` .. `iter4`).
pub fn bundled(id: &str) -> Result<CompositionPreset> {
    let text = match id {
        "iter1" => include_str!("../presets/iter1.json"),
        "iter2" => include_str!("../presets/iter2.json"),
        "iter3" => include_str!("../presets/iter3.json"),
        "iter4" => include_str!("../presets/iter4.json"),
        other => {
            return Err(Error::InvalidArgument(format!(
                "no bundled preset `{other}` (available: {})",
                BUNDLED_IDS.join(", ")
            )))
        }
    };
    CompositionPreset::from_json(text)
}

/// Accepts either a bundled preset id or a path to a preset file.
pub fn resolve(id_or_path: &str) -> Result<CompositionPreset> {
    if BUNDLED_IDS.contains(&id_or_path) {
        bundled(id_or_path)
    } else {
        CompositionPreset::load(id_or_path)
    }
}

impl CompositionPreset {
    pub fn from_json(text: &str) -> Result<Self> {
        let preset: CompositionPreset = serde_json::from_str(text)?;
        preset.check()?;
        Ok(preset)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("preset serializes");
        s.push('\n');
        s
    }

    /// Structural checks; counts are unsigned so only shape is verified.
    pub fn check(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidPreset(format!("{}: {m}", self.id)));
        if !(1..=4).contains(&self.iteration) {
            return bad(format!("iteration {} outside 1..=4", self.iteration));
        }
        if !matches!(self.segment_length_s, 4 | 12) {
            return bad(format!("segment_length_s must be 4 or 12, got {}", self.segment_length_s));
        }
        let mut langs = std::collections::HashSet::new();
        for r in &self.mlaad_rules {
            if !langs.insert(r.language.as_str()) {
                return bad(format!("duplicate MLAAD rule for language `{}`", r.language));
            }
            if r.val_systems == ValSystems::All && r.train_count > 0 {
                return bad(format!(
                    "MLAAD `{}`: all systems held out for validation but train_count = {}",
                    r.language, r.train_count
                ));
            }
            if r.val_systems == ValSystems::Count(0) && r.val_count > 0 {
                return bad(format!(
                    "MLAAD `{}`: val_count = {} with no validation systems",
                    r.language, r.val_count
                ));
            }
        }
        Ok(())
    }

    /// Totals implied by the quota lines and MLAAD rules.
    pub fn component_totals(&self) -> SplitCounts {
        let mut c = SplitCounts::default();
        for q in &self.quotas {
            c.add(q.split, q.label, q.count);
        }
        for r in &self.mlaad_rules {
            c.add(Split::Train, Label::Spoof, r.train_count);
            c.add(Split::Val, Label::Spoof, r.val_count);
        }
        c
    }

    /// A copy with every count set to zero.
    pub fn zeroed(&self) -> Self {
        let mut p = self.clone();
        for q in &mut p.quotas {
            q.count = 0;
        }
        for r in &mut p.mlaad_rules {
            r.train_count = 0;
            r.val_count = 0;
        }
        p
    }
}
