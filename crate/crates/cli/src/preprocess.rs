//! Batch preprocessing: decode, resample to 16 kHz, pad/crop, augment.
//!
//! Outputs go to `<out>/<sample_id>.seg.wav` (float32). Three sidecar files
//! are rewritten on every run, all sorted by sample_id:
//!
//! * `preprocess.log.tsv`: `sample_id  action  detail` with action one of
//!   `written`, `skipped`, `failed`;
//! * `failures.tsv`: `sample_id  error` for failed rows;
//! * `journal.tsv`: `sample_id  fingerprint` of every output written, where
//!   the fingerprint hashes the input bytes and the effective settings. A row
//!   whose fingerprint is unchanged and whose output exists is skipped.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, ValueEnum};
use rayon::prelude::*;
use spoofkit::audio::{decode_wav, fix_length, resample, write_wav, WavFormat, TARGET_RATE_HZ};
use spoofkit::augment::apply_recipe;
use spoofkit::rng::{derive_seed, fnv1a, sample_seed, SplitMix64};
use spoofkit::{AugmentationRecipe, CropMode, Manifest, ManifestEntry, PadMode, SegmentSpec};

use crate::{exit, write_file, SplitArg};

pub const LOG_FILE: &str = "preprocess.log.tsv";
pub const FAILURES_FILE: &str = "failures.tsv";
pub const JOURNAL_FILE: &str = "journal.tsv";

#[derive(Clone, Copy, ValueEnum)]
pub enum PadArg {
    Repeat,
    Zero,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum CropArg {
    Head,
    SeededRandom,
}

#[derive(Args)]
pub struct PreprocessArgs {
    #[arg(long)]
    manifest: PathBuf,
    /// Directory that manifest paths are relative to.
    #[arg(long)]
    audio_root: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Segment length in seconds.
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    length: Option<f64>,
    /// Take the segment length from a preset.
    #[arg(long)]
    preset: Option<String>,
    #[arg(long, value_enum, default_value_t = PadArg::Repeat)]
    pad: PadArg,
    #[arg(long, value_enum, default_value_t = CropArg::Head)]
    crop: CropArg,
    /// Root seed for crop offsets and augmentation.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Augmentation recipe (JSON).
    #[arg(long)]
    augment: Option<PathBuf>,
    /// Probability that a row is augmented.
    #[arg(long, default_value_t = 1.0)]
    augment_prob: f64,
    /// Only process rows of this split.
    #[arg(long, value_enum)]
    split: Option<SplitArg>,
    /// Exit 0 even if some rows fail.
    #[arg(long)]
    keep_going: bool,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

struct Settings {
    segment: SegmentSpec,
    recipe: Option<AugmentationRecipe>,
    augment_prob: f64,
    seed: u64,
    /// Canonical description of everything that affects the output bytes.
    key: String,
}

enum Outcome {
    Written(u64, String),
    Skipped,
    Failed(String),
}

pub fn run(args: PreprocessArgs) -> Result<()> {
    let length = match (&args.length, &args.preset) {
        (Some(l), _) => *l,
        (None, Some(p)) => spoofkit::preset::resolve(p)?.segment_length_s as f64,
        (None, None) => unreachable!("clap requires one of --length/--preset"),
    };
    if !(length > 0.0 && length.is_finite()) {
        return Err(exit(1, format!("invalid segment length {length}")));
    }
    if !(0.0..=1.0).contains(&args.augment_prob) {
        return Err(exit(1, format!("--augment-prob must be in [0, 1], got {}", args.augment_prob)));
    }
    let recipe = args.augment.as_ref().map(AugmentationRecipe::load).transpose()?;
    let segment = SegmentSpec {
        target_length_s: length,
        pad_mode: match args.pad {
            PadArg::Repeat => PadMode::Repeat,
            PadArg::Zero => PadMode::Zero,
        },
        crop_mode: match args.crop {
            CropArg::Head => CropMode::Head,
            CropArg::SeededRandom => CropMode::SeededRandom,
        },
        crop_seed: 0,
    };
    let key = serde_json::to_string(&serde_json::json!({
        "segment": segment,
        "recipe": recipe,
        "augment_prob": args.augment_prob,
        "seed": args.seed,
    }))?;
    let settings = Settings {
        segment,
        recipe,
        augment_prob: args.augment_prob,
        seed: args.seed,
        key,
    };

    let manifest = Manifest::load(&args.manifest)?;
    let rows: Vec<&ManifestEntry> = manifest
        .entries()
        .iter()
        .filter(|e| args.split.map_or(true, |s| e.split == s.into()))
        .collect();
    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let journal = read_journal(&args.out.join(JOURNAL_FILE))?;

    let pool = rayon::ThreadPoolBuilder::new().num_threads(args.jobs).build()?;
    let outcomes: Vec<Outcome> = pool.install(|| {
        rows.par_iter()
            .map(|e| process_row(e, &args.audio_root, &args.out, &settings, &journal))
            .collect()
    });

    let mut log = String::from("sample_id\taction\tdetail\n");
    let mut failures = String::from("sample_id\terror\n");
    let mut new_journal = BTreeMap::new();
    let (mut written, mut skipped, mut failed) = (0, 0, 0);
    for (e, outcome) in rows.iter().zip(&outcomes) {
        let id = e.entry.sample_id.as_str();
        match outcome {
            Outcome::Written(fp, detail) => {
                written += 1;
                new_journal.insert(id, *fp);
                let _ = writeln!(log, "{id}\twritten\t{detail}");
            }
            Outcome::Skipped => {
                skipped += 1;
                new_journal.insert(id, journal[id]);
                let _ = writeln!(log, "{id}\tskipped\tup to date");
            }
            Outcome::Failed(msg) => {
                failed += 1;
                let msg = msg.replace(['\t', '\n'], " ");
                let _ = writeln!(log, "{id}\tfailed\t{msg}");
                let _ = writeln!(failures, "{id}\t{msg}");
            }
        }
    }
    // Rows outside this run keep their journal entries.
    for (id, fp) in &journal {
        new_journal.entry(id.as_str()).or_insert(*fp);
    }
    let mut journal_text = String::from("sample_id\tfingerprint\n");
    for (id, fp) in &new_journal {
        let _ = writeln!(journal_text, "{id}\t{fp:016x}");
    }
    write_file(&args.out.join(LOG_FILE), log)?;
    write_file(&args.out.join(FAILURES_FILE), failures)?;
    write_file(&args.out.join(JOURNAL_FILE), journal_text)?;
    eprintln!("{written} written, {skipped} skipped, {failed} failed");
    if failed > 0 && !args.keep_going {
        return Err(exit(
            1,
            format!("{failed} rows failed; see {}", args.out.join(FAILURES_FILE).display()),
        ));
    }
    Ok(())
}

fn read_journal(path: &Path) -> Result<BTreeMap<String, u64>> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(BTreeMap::new()),
        Err(e) => return Err(e).with_context(|| format!("reading {}", path.display())),
    };
    let mut out = BTreeMap::new();
    for line in text.lines().skip(1).filter(|l| !l.is_empty()) {
        let parsed = line
            .split_once('\t')
            .and_then(|(id, fp)| u64::from_str_radix(fp, 16).ok().map(|fp| (id.to_string(), fp)));
        match parsed {
            Some((id, fp)) => {
                out.insert(id, fp);
            }
            // A damaged journal only costs a full re-run.
            None => return Ok(BTreeMap::new()),
        }
    }
    Ok(out)
}

pub fn output_path(out: &Path, sample_id: &str) -> PathBuf {
    out.join(format!("{sample_id}.seg.wav"))
}

fn process_row(
    e: &ManifestEntry,
    audio_root: &Path,
    out: &Path,
    settings: &Settings,
    journal: &BTreeMap<String, u64>,
) -> Outcome {
    let id = &e.entry.sample_id;
    let input = audio_root.join(&e.entry.path);
    let bytes = match fs::read(&input) {
        Ok(b) => b,
        Err(err) => return Outcome::Failed(format!("{}: {err}", input.display())),
    };
    let fingerprint = fnv1a(&bytes) ^ fnv1a(format!("{id}\u{0}{}", settings.key).as_bytes()).rotate_left(17);
    let target = output_path(out, id);
    if journal.get(id.as_str()) == Some(&fingerprint) && target.is_file() {
        return Outcome::Skipped;
    }
    match transform(&bytes, id, settings) {
        Ok((clip, detail)) => match write_wav(&target, &clip, WavFormat::Float32) {
            Ok(()) => Outcome::Written(fingerprint, detail),
            Err(err) => Outcome::Failed(err.to_string()),
        },
        Err(err) => Outcome::Failed(format!("{}: {err}", input.display())),
    }
}

fn transform(bytes: &[u8], id: &str, s: &Settings) -> spoofkit::Result<(spoofkit::AudioClip, String)> {
    let row_seed = sample_seed(s.seed, id);
    let clip = decode_wav(bytes)?;
    let mut detail = format!("{} Hz, {} samples", clip.sample_rate_hz, clip.len());
    let clip = resample(&clip, TARGET_RATE_HZ)?;
    let spec = SegmentSpec {
        crop_seed: derive_seed(row_seed, 0),
        ..s.segment
    };
    let mut clip = fix_length(&clip, &spec)?;
    if let Some(recipe) = &s.recipe {
        let draw = SplitMix64::new(derive_seed(row_seed, 2)).next_f64();
        if draw < s.augment_prob {
            clip = apply_recipe(&clip, &recipe.with_seed(derive_seed(row_seed, 1)))?;
            detail.push_str("; augmented");
        }
    }
    Ok((clip, detail))
}
