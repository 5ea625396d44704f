//! Manifest validation against a preset.
//!
//! Every manifest entry is attributed to the first quota line (in preset
//! order) that it is eligible for within its split; MLAAD spoof entries left
//! over are attributed to the MLAAD rule of their language. The report then
//! holds one line per quota, one per MLAAD rule and split, and structural
//! checks (train/val overlap, MLAAD system leakage, unattributed entries,
//! iteration tags).
//!
//! Declared totals are compared separately. When the preset's own component
//! counts do not add up to a declared total, that total cannot be both met
//! and consistent; it is reported with status `noted` and an arithmetic note
//! listing both sums, and it does not fail validation.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::catalog::{Dataset, Label};
use crate::manifest::{Manifest, Split};
use crate::preset::CompositionPreset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LineStatus {
    Pass,
    Fail,
    Noted,
}

impl LineStatus {
    fn from_eq(ok: bool) -> Self {
        if ok {
            LineStatus::Pass
        } else {
            LineStatus::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            LineStatus::Pass => "PASS",
            LineStatus::Fail => "FAIL",
            LineStatus::Noted => "NOTE",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckLine {
    pub name: String,
    pub expected: usize,
    pub actual: usize,
    pub status: LineStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TotalCheck {
    pub name: String,
    pub declared: usize,
    pub component_sum: usize,
    pub actual: usize,
    pub status: LineStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub format_version: u32,
    pub preset_id: String,
    pub iteration: u8,
    pub lines: Vec<CheckLine>,
    pub totals: Vec<TotalCheck>,
    pub arithmetic_notes: Vec<String>,
    pub pass: bool,
}

impl ValidationReport {
    pub fn failing(&self) -> impl Iterator<Item = &CheckLine> {
        self.lines.iter().filter(|l| l.status == LineStatus::Fail)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "preset {} (iteration {})", self.preset_id, self.iteration);
        for l in &self.lines {
            let _ = writeln!(
                out,
                "  [{}] {:<60} expected {:>7}  actual {:>7}",
                l.status.as_str(),
                l.name,
                l.expected,
                l.actual
            );
        }
        for t in &self.totals {
            let _ = writeln!(
                out,
                "  [{}] total {:<54} declared {:>7}  components {:>7}  actual {:>7}",
                t.status.as_str(),
                t.name,
                t.declared,
                t.component_sum,
                t.actual
            );
        }
        for n in &self.arithmetic_notes {
            let _ = writeln!(out, "  note: {n}");
        }
        let _ = writeln!(out, "{}", if self.pass { "PASS" } else { "FAIL" });
        out
    }
}

/// Compares `manifest` against `preset`. Pure: the manifest is not modified.
pub fn validate_manifest(manifest: &Manifest, preset: &CompositionPreset) -> ValidationReport {
    let mut quota_actual = vec![0usize; preset.quotas.len()];
    let mut rule_actual: BTreeMap<(usize, Split), usize> = BTreeMap::new();
    let mut unattributed = 0usize;
    let mut wrong_iteration = 0usize;
    // language -> split -> systems
    let mut mlaad_systems: BTreeMap<&str, [BTreeSet<&str>; 2]> = BTreeMap::new();

    for me in manifest.entries() {
        if me.iteration != preset.iteration {
            wrong_iteration += 1;
        }
        let e = &me.entry;
        if let Some(i) = preset
            .quotas
            .iter()
            .position(|q| q.split == me.split && q.eligible(e))
        {
            quota_actual[i] += 1;
            continue;
        }
        let rule = (e.dataset == Dataset::Mlaad && e.label == Label::Spoof)
            .then(|| preset.mlaad_rules.iter().position(|r| r.language == e.language))
            .flatten();
        match rule {
            Some(ri) => {
                *rule_actual.entry((ri, me.split)).or_default() += 1;
                let slot = usize::from(me.split == Split::Val);
                mlaad_systems.entry(e.language.as_str()).or_default()[slot]
                    .insert(e.source_system.as_str());
            }
            None => unattributed += 1,
        }
    }

    let mut lines = Vec::new();
    for (i, (q, &actual)) in preset.quotas.iter().zip(&quota_actual).enumerate() {
        lines.push(CheckLine {
            name: format!("quota {}: {q}", i + 1),
            expected: q.count,
            actual,
            status: LineStatus::from_eq(actual == q.count),
        });
    }
    for (ri, r) in preset.mlaad_rules.iter().enumerate() {
        for (split, expected) in [(Split::Train, r.train_count), (Split::Val, r.val_count)] {
            let actual = rule_actual.get(&(ri, split)).copied().unwrap_or(0);
            lines.push(CheckLine {
                name: format!("MLAAD {} {split}", r.language),
                expected,
                actual,
                status: LineStatus::from_eq(actual == expected),
            });
        }
    }
    if !preset.mlaad_rules.is_empty() {
        let leaked: usize = mlaad_systems
            .values()
            .map(|[train, val]| train.intersection(val).count())
            .sum();
        lines.push(structural("MLAAD systems shared by train and val", leaked));
    }

    let mut train_ids = HashSet::new();
    for e in manifest.split(Split::Train) {
        train_ids.insert(e.entry.sample_id.as_str());
    }
    let overlap = manifest
        .split(Split::Val)
        .filter(|e| train_ids.contains(e.entry.sample_id.as_str()))
        .count();
    lines.push(structural("sample ids in both train and val", overlap));
    lines.push(structural("entries matching no quota or rule", unattributed));
    lines.push(structural("entries tagged with another iteration", wrong_iteration));

    let component = preset.component_totals();
    let actual = manifest.counts();
    let mut totals = Vec::new();
    let mut arithmetic_notes = Vec::new();
    if let Some(declared) = preset.declared_totals {
        for (((name, declared), (_, sum)), (_, got)) in declared
            .named()
            .into_iter()
            .zip(component.named())
            .zip(actual.named())
        {
            let Some(declared) = declared else { continue };
            let status = if declared == sum {
                LineStatus::from_eq(got == declared)
            } else {
                arithmetic_notes.push(format!(
                    "{name}: declared {declared} but component quotas sum to {sum} ({:+}); manifest has {got}",
                    sum as i64 - declared as i64
                ));
                LineStatus::Noted
            };
            totals.push(TotalCheck {
                name: name.to_string(),
                declared,
                component_sum: sum,
                actual: got,
                status,
            });
        }
    }

    let pass = lines.iter().all(|l| l.status != LineStatus::Fail)
        && totals.iter().all(|t| t.status != LineStatus::Fail);
    ValidationReport {
        format_version: crate::FORMAT_VERSION,
        preset_id: preset.id.clone(),
        iteration: preset.iteration,
        lines,
        totals,
        arithmetic_notes,
        pass,
    }
}

fn structural(name: &str, actual: usize) -> CheckLine {
    CheckLine {
        name: name.to_string(),
        expected: 0,
        actual,
        status: LineStatus::from_eq(actual == 0),
    }
}
