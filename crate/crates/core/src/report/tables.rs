use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::metrics::{SourceRow, LOW_METRIC_THRESHOLD};
use crate::vocab;

/// Source rows with a metric at or below this value are emphasized.
pub const EMPHASIS_THRESHOLD: f64 = LOW_METRIC_THRESHOLD;

const MISSING: &str = "—";

/// One row of the iteration progression table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationResult {
    pub iteration: u8,
    pub frontend_name: String,
    /// Balanced accuracy on tasks 1 to 3.
    #[serde(default)]
    pub task_ba: [Option<f64>; 3],
    #[serde(default)]
    pub itw_ba: Option<f64>,
    #[serde(default)]
    pub itw_eer_percent: Option<f64>,
}

impl IterationResult {
    pub fn new(iteration: u8, frontend_name: impl Into<String>) -> Self {
        Self {
            iteration,
            frontend_name: frontend_name.into(),
            task_ba: [None; 3],
            itw_ba: None,
            itw_eer_percent: None,
        }
    }

    fn cells(&self) -> [Option<f64>; 5] {
        [
            self.task_ba[0],
            self.task_ba[1],
            self.task_ba[2],
            self.itw_ba,
            self.itw_eer_percent,
        ]
    }
}

/// Renders a Markdown table `Iter | SSL Model | Task1 | Task2 | Task3 | ITW BA | ITW EER`.
///
/// BA cells use three decimals and EER two. The best value of each column
/// (highest BA, lowest EER, compared as displayed) is set in bold; ties
/// are all bold. Missing values render as `—`.
pub fn render_iteration_table(results: &[IterationResult]) -> String {
    let decimals = [3, 3, 3, 3, 2];
    let fmt = |col: usize, v: f64| format!("{:.*}", decimals[col], v);
    let mut best: [Option<String>; 5] = Default::default();
    for (col, slot) in best.iter_mut().enumerate() {
        let shown = results.iter().filter_map(|r| r.cells()[col]).map(|v| fmt(col, v));
        // Displayed strings of equal precision compare like their values.
        let parsed = shown.map(|s| (s.parse::<f64>().unwrap_or(f64::NAN), s));
        *slot = if col == 4 {
            parsed.min_by(|a, b| a.0.total_cmp(&b.0)).map(|p| p.1)
        } else {
            parsed.max_by(|a, b| a.0.total_cmp(&b.0)).map(|p| p.1)
        };
    }

    let mut out = String::from("| Iter | SSL Model | Task1 | Task2 | Task3 | ITW BA | ITW EER |\n");
    out.push_str("|---:|---|---:|---:|---:|---:|---:|\n");
    for r in results {
        let _ = write!(out, "| {} | {} |", r.iteration, r.frontend_name);
        for (col, cell) in r.cells().iter().enumerate() {
            match cell {
                None => {
                    let _ = write!(out, " {MISSING} |");
                }
                Some(v) => {
                    let s = fmt(col, *v);
                    if best[col].as_deref() == Some(s.as_str()) {
                        let _ = write!(out, " **{s}** |");
                    } else {
                        let _ = write!(out, " {s} |");
                    }
                }
            }
        }
        out.push('\n');
    }
    out
}

/// A row of a per-source table, independent of how it was produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceTableRow {
    pub category: String,
    pub source: String,
    pub metric: f64,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub recall: Option<f64>,
}

const CATEGORY_ORDER: [&str; 4] = ["pristine", "generated", "processed", "laundered"];

/// Renders evaluator rows grouped by source category. Sources outside the
/// known vocabulary fall under their class (`bonafide` / `spoof`).
pub fn render_source_table(rows: &[SourceRow]) -> String {
    let rows: Vec<SourceTableRow> = rows
        .iter()
        .map(|r| SourceTableRow {
            category: vocab::category_of(&r.source)
                .map(str::to_string)
                .unwrap_or_else(|| r.label.as_str().to_string()),
            source: r.source.clone(),
            metric: r.metric,
            n: Some(r.n),
            recall: Some(r.recall),
        })
        .collect();
    render_source_rows(&rows)
}

/// Renders one Markdown section per category, known categories first.
/// Metrics use two decimals and values `<= 0.60` are bold.
pub fn render_source_rows(rows: &[SourceTableRow]) -> String {
    let mut categories: Vec<&str> = Vec::new();
    for c in CATEGORY_ORDER {
        if rows.iter().any(|r| r.category == c) {
            categories.push(c);
        }
    }
    let mut extra: Vec<&str> = rows
        .iter()
        .map(|r| r.category.as_str())
        .filter(|c| !CATEGORY_ORDER.contains(c))
        .collect();
    extra.sort_unstable();
    extra.dedup();
    categories.extend(extra);

    let mut out = String::new();
    for (i, cat) in categories.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let _ = writeln!(out, "### {cat}\n");
        out.push_str("| Source | n | BA | Recall |\n|---|---:|---:|---:|\n");
        for r in rows.iter().filter(|r| r.category == *cat) {
            let metric = if r.metric <= EMPHASIS_THRESHOLD {
                format!("**{:.2}**", r.metric)
            } else {
                format!("{:.2}", r.metric)
            };
            let n = r.n.map_or(MISSING.to_string(), |n| n.to_string());
            let recall = r.recall.map_or(MISSING.to_string(), |v| format!("{v:.2}"));
            let _ = writeln!(out, "| {} | {n} | {metric} | {recall} |", r.source);
        }
    }
    out
}
