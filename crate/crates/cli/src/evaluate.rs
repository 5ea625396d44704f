//! Scoring, evaluation and table rendering.

use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Subcommand, ValueEnum};
use rayon::prelude::*;
use spoofkit::audio::read_wav;
use spoofkit::metrics::{evaluate as eval_scores, read_scores, reference_scorer, scores_to_tsv, EvalOptions};
use spoofkit::report::fixtures;
use spoofkit::report::{render_iteration_table, render_source_rows, render_source_table, IterationResult, SourceTableRow};
use spoofkit::{vocab, Manifest, ScoreRecord};

use crate::preprocess::output_path;
use crate::{exit, write_file, SplitArg};

#[derive(Args)]
pub struct ScoreArgs {
    #[arg(long)]
    manifest: PathBuf,
    /// Read `<dir>/<sample_id>.seg.wav` files written by `preprocess`.
    #[arg(long, conflicts_with = "audio_root", required_unless_present = "audio_root")]
    segments: Option<PathBuf>,
    /// Read raw audio at manifest paths relative to this directory.
    #[arg(long)]
    audio_root: Option<PathBuf>,
    #[arg(long, value_enum)]
    split: Option<SplitArg>,
    #[arg(long)]
    out: PathBuf,
    /// Skip unreadable files instead of failing; they become coverage gaps.
    #[arg(long)]
    keep_going: bool,
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TaskArg {
    #[value(name = "1")]
    Task1,
    #[value(name = "2")]
    Task2,
    #[value(name = "3")]
    Task3,
    Itw,
}

#[derive(Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    manifest: PathBuf,
    #[arg(long)]
    scores: PathBuf,
    /// Fixed decision threshold (bonafide iff score >= threshold).
    #[arg(long, default_value_t = 0.5)]
    threshold: f64,
    #[arg(long, value_enum)]
    split: Option<SplitArg>,
    /// Structured report (JSON).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Rendered tables (Markdown).
    #[arg(long)]
    table: Option<PathBuf>,
    /// Place the result in an iteration-table row for this task.
    #[arg(long, value_enum)]
    task: Option<TaskArg>,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=4))]
    iteration: u8,
    #[arg(long, default_value = "reference")]
    frontend: String,
}

#[derive(Subcommand)]
pub enum ReportCmd {
    /// Render the iteration progression table.
    Iterations {
        /// JSON array of iteration results.
        #[arg(long, required_unless_present = "published")]
        input: Option<PathBuf>,
        /// Render the published reference results instead.
        #[arg(long)]
        published: bool,
    },
    /// Render a per-source table.
    Sources {
        /// Evaluation report (JSON) or JSON array of source rows.
        #[arg(long, required_unless_present = "published")]
        input: Option<PathBuf>,
        /// Render published reference results: `task1` or `task23`.
        #[arg(long, value_parser = ["task1", "task23"])]
        published: Option<String>,
    },
}

pub fn score(args: ScoreArgs) -> Result<()> {
    let manifest = Manifest::load(&args.manifest)?;
    let rows: Vec<_> = manifest
        .entries()
        .iter()
        .filter(|e| args.split.map_or(true, |s| e.split == s.into()))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(args.jobs).build()?;
    let results: Vec<spoofkit::Result<ScoreRecord>> = pool.install(|| {
        rows.par_iter()
            .map(|e| {
                let path = match (&args.segments, &args.audio_root) {
                    (Some(dir), _) => output_path(dir, &e.entry.sample_id),
                    (None, Some(root)) => root.join(&e.entry.path),
                    (None, None) => unreachable!("clap requires one of --segments/--audio-root"),
                };
                let clip = read_wav(&path)?;
                Ok(ScoreRecord::new(e.entry.sample_id.clone(), reference_scorer(&clip)?))
            })
            .collect()
    });
    let mut records = Vec::with_capacity(results.len());
    let mut skipped = 0;
    for (e, r) in rows.iter().zip(results) {
        match r {
            Ok(rec) => records.push(rec),
            Err(err) if args.keep_going => {
                skipped += 1;
                eprintln!("skipping {}: {err}", e.entry.sample_id);
            }
            Err(err) => return Err(err).with_context(|| format!("scoring {}", e.entry.sample_id)),
        }
    }
    write_file(&args.out, scores_to_tsv(&records)?)?;
    eprintln!("scored {} rows ({skipped} skipped)", records.len());
    Ok(())
}

pub fn evaluate(args: EvaluateArgs) -> Result<()> {
    let manifest = Manifest::load(&args.manifest)?;
    let scores = read_scores(&args.scores)?;
    let options = EvalOptions {
        threshold: args.threshold,
        split: args.split.map(Into::into),
    };
    let report = eval_scores(&manifest, &scores, &options)?;

    println!(
        "BA {:.3} at threshold {}; EER {:.2}% at threshold {:.6}; max BA {:.3}",
        report.balanced_accuracy, report.threshold_used, report.eer_percent, report.eer_threshold, report.max_ba.balanced_accuracy
    );
    println!("{} scored ({} bonafide, {} spoof), {} coverage gaps", report.n_scored, report.n_bonafide, report.n_spoof, report.coverage_gaps.len());
    for w in &report.warnings {
        eprintln!("WARNING: {w}");
    }

    let mut tables = String::new();
    if let Some(task) = args.task {
        let mut row = IterationResult::new(args.iteration, args.frontend.clone());
        match task {
            TaskArg::Task1 => row.task_ba[0] = Some(report.balanced_accuracy),
            TaskArg::Task2 => row.task_ba[1] = Some(report.balanced_accuracy),
            TaskArg::Task3 => row.task_ba[2] = Some(report.balanced_accuracy),
            TaskArg::Itw => {
                row.itw_ba = Some(report.balanced_accuracy);
                row.itw_eer_percent = Some(report.eer_percent);
            }
        }
        tables.push_str(&render_iteration_table(&[row]));
        tables.push('\n');
    }
    tables.push_str(&render_source_table(&report.per_source_rows));
    if let Some(path) = &args.table {
        write_file(path, &tables)?;
    } else if args.task.is_some() {
        print!("{tables}");
    }
    if let Some(path) = &args.out {
        write_file(path, report.to_json()? + "\n")?;
    }
    Ok(())
}

pub fn report(cmd: ReportCmd) -> Result<()> {
    match cmd {
        ReportCmd::Iterations { input, published } => {
            let rows: Vec<IterationResult> = if published {
                fixtures::published_iterations()
            } else {
                let path = input.expect("clap requires --input");
                let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
                serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
            };
            if rows.is_empty() {
                return Err(exit(1, "no iteration results to render"));
            }
            print!("{}", render_iteration_table(&rows));
        }
        ReportCmd::Sources { input, published } => {
            let rows = match published.as_deref() {
                Some("task1") => fixtures::source_rows(&fixtures::PUBLISHED_TASK1_SOURCES),
                Some(_) => fixtures::source_rows(&fixtures::PUBLISHED_TASK23_SOURCES),
                None => {
                    let path = input.expect("clap requires --input");
                    let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
                    source_rows_from_json(&text).with_context(|| format!("parsing {}", path.display()))?
                }
            };
            if rows.is_empty() {
                return Err(exit(1, "no source rows to render"));
            }
            print!("{}", render_source_rows(&rows));
        }
    }
    Ok(())
}

/// Accepts either an evaluation report or a plain array of table rows.
fn source_rows_from_json(text: &str) -> Result<Vec<SourceTableRow>> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    if value.is_array() {
        return Ok(serde_json::from_value(value)?);
    }
    #[derive(serde::Deserialize)]
    struct Row {
        source: String,
        label: spoofkit::Label,
        n: usize,
        recall: f64,
        metric: f64,
    }
    let rows: Vec<Row> = serde_json::from_value(
        value
            .get("per_source_rows")
            .cloned()
            .ok_or_else(|| exit(1, "expected an evaluation report with `per_source_rows`"))?,
    )?;
    Ok(rows
        .into_iter()
        .map(|r| SourceTableRow {
            category: vocab::category_of(&r.source)
                .map(str::to_string)
                .unwrap_or_else(|| r.label.as_str().to_string()),
            source: r.source,
            metric: r.metric,
            n: Some(r.n),
            recall: Some(r.recall),
        })
        .collect())
}
