//! Helpers shared by the CLI test targets.
#![allow(dead_code)]

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use spoofkit::audio::{write_wav, WavFormat};
use spoofkit::catalog::{CatalogEntry, Dataset, Label};
use spoofkit::manifest::{Manifest, ManifestEntry, Split};
use spoofkit::AudioClip;

pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_spoofkit"))
}

pub fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn spoofkit")
}

pub fn code(out: &Output) -> i32 {
    out.status.code().unwrap_or(-1)
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

pub fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

pub fn p(path: &Path) -> &str {
    path.to_str().expect("utf-8 path")
}

pub fn tone(rate: u32, hz: f64, seconds: f64, amp: f64) -> AudioClip {
    let n = (rate as f64 * seconds).round() as usize;
    AudioClip::new(rate, (0..n).map(|i| amp * (2.0 * PI * hz * i as f64 / rate as f64).sin()).collect()).unwrap()
}

/// Band-limited bonafide stand-ins and bright spoof stand-ins, which the
/// reference scorer separates perfectly.
pub fn write_audio_for(entry: &CatalogEntry, root: &Path, index: usize) {
    let clip = match entry.label {
        Label::Bonafide => tone(48_000, 200.0 + 20.0 * index as f64, 1.5, 0.5),
        Label::Spoof => tone(16_000, 5_500.0 + 50.0 * index as f64, 0.7, 0.5),
    };
    write_wav(root.join(&entry.path), &clip, WavFormat::Pcm16).unwrap();
}

pub fn entry(id: &str, label: Label, source: &str) -> ManifestEntry {
    ManifestEntry {
        entry: CatalogEntry {
            sample_id: id.into(),
            path: format!("audio/{id}.wav"),
            label,
            dataset: Dataset::Other,
            language: "en".into(),
            source_system: source.into(),
            duration_s: None,
        },
        split: Split::Val,
        iteration: 1,
        selection_seed: 0,
    }
}

/// Writes a manifest of `entries` and their audio under `dir`.
pub fn small_manifest(dir: &Path, entries: Vec<ManifestEntry>) -> PathBuf {
    std::fs::create_dir_all(dir.join("audio")).unwrap();
    for (i, e) in entries.iter().enumerate() {
        write_audio_for(&e.entry, dir, i);
    }
    let path = dir.join("manifest.tsv");
    std::fs::write(&path, Manifest::new(entries).unwrap().to_tsv()).unwrap();
    path
}

/// A small preset in the bundled format: 4 + 3 bonafide and 4 + 3 spoof rows.
pub const SMALL_PRESET: &str = r#"{
  "format_version": 1,
  "id": "smoke",
  "description": "Tiny composition for end-to-end runs.",
  "iteration": 1,
  "segment_length_s": 4,
  "quotas": [
    {"dataset": "ASVspoof19LA", "label": "bonafide", "split": "train", "count": 4, "sample_id_prefix": "LA_T_"},
    {"dataset": "ASVspoof19LA", "label": "spoof", "split": "train", "count": 4, "sample_id_prefix": "LA_T_"},
    {"dataset": "ASVspoof19LA", "label": "bonafide", "split": "val", "count": 3, "sample_id_prefix": "LA_D_"},
    {"dataset": "ASVspoof19LA", "label": "spoof", "split": "val", "count": 3, "sample_id_prefix": "LA_D_"}
  ],
  "declared_totals": {
    "train_total": 8, "train_bonafide": 4, "train_spoof": 4,
    "val_total": 6, "val_bonafide": 3, "val_spoof": 3
  }
}
"#;
