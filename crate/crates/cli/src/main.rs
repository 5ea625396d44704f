//! `spoofkit` command-line interface.
//!
//! Exit codes: 0 success, 1 input error, 2 constraint violation (a catalog
//! cannot satisfy a preset, or a manifest fails validation), 3 internal
//! failure.

mod evaluate;
mod preprocess;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use spoofkit::audio::{read_wav, write_wav, WavFormat};
use spoofkit::manifest::build_manifest;
use spoofkit::preset::{self, CompositionPreset};
use spoofkit::report::{pca_project, scatter_svg, separability_scores, EmbeddingSet};
use spoofkit::stub::{stub_catalog, StubOptions};
use spoofkit::validate::validate_manifest;
use spoofkit::{catalog, AugmentationRecipe, Label, Manifest};

#[derive(Parser)]
#[command(name = "spoofkit", version, about = "Corpus composition and evaluation toolkit for audio deepfake detection")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Catalog utilities.
    #[command(subcommand)]
    Catalog(CatalogCmd),
    /// Build or validate manifests against a composition preset.
    #[command(subcommand)]
    Manifest(ManifestCmd),
    /// Inspect composition presets.
    #[command(subcommand)]
    Preset(PresetCmd),
    /// Resample, pad/crop and optionally augment every manifest row.
    Preprocess(preprocess::PreprocessArgs),
    /// Apply an augmentation recipe to a single WAV file.
    Augment(AugmentArgs),
    /// Score manifest audio with the heuristic reference scorer.
    Score(evaluate::ScoreArgs),
    /// Evaluate a score file against manifest labels.
    Evaluate(evaluate::EvaluateArgs),
    /// Render result tables.
    #[command(subcommand)]
    Report(evaluate::ReportCmd),
    /// Embedding analysis.
    #[command(subcommand)]
    Analyze(AnalyzeCmd),
}

#[derive(Subcommand)]
enum CatalogCmd {
    /// Write a synthetic catalog that can satisfy a preset.
    Stub {
        #[arg(long)]
        preset: String,
        #[arg(long)]
        out: PathBuf,
        /// Extra entries per quota line, as a fraction of its count.
        #[arg(long, default_value_t = 0.05)]
        surplus: f64,
        /// Extra MLAAD systems per language.
        #[arg(long, default_value_t = 1)]
        extra_systems: usize,
    },
}

#[derive(Subcommand)]
enum ManifestCmd {
    /// Select a manifest from a catalog.
    Build {
        #[arg(long)]
        preset: String,
        #[arg(long)]
        catalog: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Also write the validation report as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Check a manifest against a preset.
    Validate {
        #[arg(long)]
        preset: String,
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum PresetCmd {
    /// Print a preset as JSON with its component totals.
    Show { preset: String },
    /// List bundled preset ids.
    List,
}

#[derive(Args)]
struct AugmentArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: PathBuf,
    /// Recipe file (JSON).
    #[arg(long)]
    augment: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum AnalyzeCmd {
    /// PCA projection and class separability of an embedding file.
    Embeddings {
        #[arg(long)]
        input: PathBuf,
        /// Structured output (JSON).
        #[arg(long)]
        out: Option<PathBuf>,
        /// 2-D scatter plot of the first two principal components.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
pub enum SplitArg {
    Train,
    Val,
}

impl From<SplitArg> for spoofkit::Split {
    fn from(s: SplitArg) -> Self {
        match s {
            SplitArg::Train => spoofkit::Split::Train,
            SplitArg::Val => spoofkit::Split::Val,
        }
    }
}

/// An error carrying its exit code.
#[derive(Debug)]
pub struct Exit {
    pub code: u8,
    pub message: String,
}

impl std::fmt::Display for Exit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for Exit {}

pub fn exit(code: u8, message: impl Into<String>) -> anyhow::Error {
    Exit {
        code,
        message: message.into(),
    }
    .into()
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<Exit>() {
            return e.code;
        }
        if let Some(e) = cause.downcast_ref::<spoofkit::Error>() {
            return if e.is_constraint_violation() { 2 } else { 1 };
        }
        if cause.downcast_ref::<std::io::Error>().is_some() || cause.downcast_ref::<serde_json::Error>().is_some() {
            return 1;
        }
    }
    3
}

pub fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn load_preset(id_or_path: &str) -> Result<CompositionPreset> {
    preset::resolve(id_or_path).with_context(|| format!("loading preset `{id_or_path}`"))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Catalog(CatalogCmd::Stub {
            preset,
            out,
            surplus,
            extra_systems,
        }) => {
            let preset = load_preset(&preset)?;
            let cat = stub_catalog(&preset, StubOptions { surplus, extra_systems });
            write_file(&out, cat.to_tsv())?;
            eprintln!("wrote {} catalog entries to {}", cat.len(), out.display());
        }
        Command::Manifest(ManifestCmd::Build {
            preset,
            catalog: catalog_path,
            seed,
            out,
            report,
        }) => {
            let preset = load_preset(&preset)?;
            let cat = catalog::load_catalog(&catalog_path)?;
            let manifest = build_manifest(&cat, &preset, seed)?;
            write_file(&out, manifest.to_tsv())?;
            let counts = manifest.counts();
            eprintln!(
                "wrote {} rows ({} train, {} val) to {}",
                manifest.len(),
                counts.train_total(),
                counts.val_total(),
                out.display()
            );
            finish_validation(&manifest, &preset, report.as_deref())?;
        }
        Command::Manifest(ManifestCmd::Validate {
            preset,
            manifest,
            report,
        }) => {
            let preset = load_preset(&preset)?;
            let manifest = Manifest::load(&manifest)?;
            finish_validation(&manifest, &preset, report.as_deref())?;
        }
        Command::Preset(PresetCmd::Show { preset }) => {
            let preset = load_preset(&preset)?;
            print!("{}", preset.to_json());
            let totals = preset.component_totals();
            println!("# component totals");
            for (name, n) in totals.named() {
                println!("#   {name}: {n}");
            }
        }
        Command::Preset(PresetCmd::List) => {
            for id in preset::BUNDLED_IDS {
                let p = preset::bundled(id)?;
                println!("{id}\titeration {}\t{} s\t{}", p.iteration, p.segment_length_s, p.description);
            }
        }
        Command::Preprocess(args) => preprocess::run(args)?,
        Command::Augment(args) => {
            let recipe = AugmentationRecipe::load(&args.augment)?.with_seed(args.seed);
            let clip = read_wav(&args.input)?;
            let out = spoofkit::augment::apply_recipe(&clip, &recipe)?;
            write_wav(&args.output, &out, WavFormat::Float32)?;
        }
        Command::Score(args) => evaluate::score(args)?,
        Command::Evaluate(args) => evaluate::evaluate(args)?,
        Command::Report(cmd) => evaluate::report(cmd)?,
        Command::Analyze(AnalyzeCmd::Embeddings { input, out, svg }) => analyze(&input, out.as_deref(), svg.as_deref())?,
    }
    Ok(())
}

fn finish_validation(manifest: &Manifest, preset: &CompositionPreset, report: Option<&Path>) -> Result<()> {
    let v = validate_manifest(manifest, preset);
    print!("{}", v.to_text());
    if let Some(path) = report {
        write_file(path, v.to_json())?;
    }
    if !v.pass {
        let names: Vec<&str> = v.failing().map(|l| l.name.as_str()).collect();
        return Err(exit(2, format!("manifest validation failed: {}", names.join("; "))));
    }
    Ok(())
}

fn analyze(input: &Path, out: Option<&Path>, svg: Option<&Path>) -> Result<()> {
    let set = EmbeddingSet::load(input)?;
    let projection = pca_project(&set, 2)?;
    let sep = separability_scores(&set)?;
    println!(
        "{} records, dimension {}; explained variance {:.4} / {:.4}",
        set.len(),
        set.dim(),
        projection.explained_variance_ratio[0],
        projection.explained_variance_ratio[1]
    );
    println!("fisher ratio {:.6}; silhouette {:.6}", sep.fisher_ratio, sep.silhouette);
    if let Some(path) = out {
        let doc = serde_json::json!({
            "format_version": spoofkit::FORMAT_VERSION,
            "fisher_ratio": if sep.fisher_ratio.is_finite() { serde_json::json!(sep.fisher_ratio) } else { serde_json::json!("inf") },
            "silhouette": sep.silhouette,
            "projection": projection,
        });
        write_file(path, serde_json::to_string_pretty(&doc)? + "\n")?;
    }
    if let Some(path) = svg {
        let points: Vec<(Label, [f64; 2])> = set
            .records()
            .iter()
            .zip(&projection.points)
            .map(|(r, (_, c))| (r.label, [c[0], c[1]]))
            .collect();
        write_file(path, scatter_svg(&points))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // clap's own code for usage errors is 2, which is reserved here.
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(err)) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
        Err(_) => ExitCode::from(3),
    }
}
