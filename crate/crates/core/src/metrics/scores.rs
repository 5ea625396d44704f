//! Score files: `sample_id<TAB>score`, one row per sample, higher = more bonafide.

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tsv;

pub const SCORE_COLUMNS: [&str; 2] = ["sample_id", "score"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRecord {
    pub sample_id: String,
    pub score: f64,
}

impl ScoreRecord {
    pub fn new(sample_id: impl Into<String>, score: f64) -> Self {
        Self {
            sample_id: sample_id.into(),
            score,
        }
    }
}

/// Parses a score file. Scores must be finite and ids unique.
pub fn parse_scores(text: &str) -> Result<Vec<ScoreRecord>> {
    let mut lines = tsv::records(text);
    let (hl, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing header line"))?;
    tsv::expect_header(hl, header, &SCORE_COLUMNS)?;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (line_no, line) in lines {
        let f = tsv::split_exact(line_no, line, 2)?;
        if f[0].is_empty() {
            return Err(Error::parse(line_no, "empty sample_id"));
        }
        let score: f64 = f[1]
            .trim()
            .parse()
            .map_err(|_| Error::parse(line_no, format!("invalid score `{}`", f[1])))?;
        if !score.is_finite() {
            return Err(Error::parse(line_no, format!("non-finite score `{}`", f[1])));
        }
        if !seen.insert(f[0]) {
            return Err(Error::DuplicateId(f[0].to_string()));
        }
        out.push(ScoreRecord::new(f[0], score));
    }
    Ok(out)
}

pub fn read_scores(path: impl AsRef<Path>) -> Result<Vec<ScoreRecord>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_scores(&text).map_err(|e| e.in_file(path.display().to_string()))
}

/// Serializes records sorted by sample_id. Scores use the shortest
/// representation that round-trips exactly.
pub fn scores_to_tsv(records: &[ScoreRecord]) -> Result<String> {
    let mut sorted: Vec<&ScoreRecord> = records.iter().collect();
    sorted.sort_by(|a, b| a.sample_id.cmp(&b.sample_id));
    let mut out = SCORE_COLUMNS.join("\t");
    out.push('\n');
    for r in sorted {
        tsv::check_field("sample_id", &r.sample_id)?;
        if !r.score.is_finite() {
            return Err(Error::InvalidArgument(format!("non-finite score for `{}`", r.sample_id)));
        }
        out.push_str(&r.sample_id);
        out.push('\t');
        out.push_str(&r.score.to_string());
        out.push('\n');
    }
    Ok(out)
}
