//! Embedding files: `sample_id<TAB>label<TAB>v0<TAB>v1...`.

use std::collections::HashSet;
use std::fmt::Write;
use std::path::Path;

use crate::catalog::Label;
use crate::error::{Error, Result};
use crate::tsv;

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingRecord {
    pub sample_id: String,
    pub label: Label,
    pub vector: Vec<f64>,
}

/// Labeled vectors of one common dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingSet {
    records: Vec<EmbeddingRecord>,
    dim: usize,
}

impl EmbeddingSet {
    pub fn new(records: Vec<EmbeddingRecord>) -> Result<Self> {
        let dim = records.first().map_or(0, |r| r.vector.len());
        let mut seen = HashSet::new();
        for r in &records {
            if r.vector.len() != dim {
                return Err(Error::InvalidArgument(format!(
                    "`{}` has dimension {}, expected {dim}",
                    r.sample_id,
                    r.vector.len()
                )));
            }
            if r.vector.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidArgument(format!("`{}` has a non-finite component", r.sample_id)));
            }
            if !seen.insert(r.sample_id.as_str()) {
                return Err(Error::DuplicateId(r.sample_id.clone()));
            }
        }
        Ok(Self { records, dim })
    }

    pub fn records(&self) -> &[EmbeddingRecord] {
        &self.records
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = tsv::records(text);
        let (hl, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing header line"))?;
        let cols: Vec<&str> = header.split('\t').collect();
        let dim = cols.len().saturating_sub(2);
        let expected = header_columns(dim);
        if cols.len() < 3 || cols != expected.iter().map(String::as_str).collect::<Vec<_>>() {
            return Err(Error::parse(
                hl,
                "expected header `sample_id\\tlabel\\tv0\\tv1...` with at least one component",
            ));
        }
        let mut records = Vec::new();
        for (line_no, line) in lines {
            let f = tsv::split_exact(line_no, line, dim + 2)?;
            let label = f[1].parse().map_err(|m: String| Error::parse(line_no, m))?;
            let vector = f[2..]
                .iter()
                .map(|v| {
                    v.trim()
                        .parse::<f64>()
                        .ok()
                        .filter(|x| x.is_finite())
                        .ok_or_else(|| Error::parse(line_no, format!("invalid component `{v}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            records.push(EmbeddingRecord {
                sample_id: f[0].to_string(),
                label,
                vector,
            });
        }
        Self::new(records)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text).map_err(|e| e.in_file(path.display().to_string()))
    }

    /// Serializes in record order with round-trip exact floats.
    pub fn to_tsv(&self) -> Result<String> {
        let mut out = header_columns(self.dim).join("\t");
        out.push('\n');
        for r in &self.records {
            tsv::check_field("sample_id", &r.sample_id)?;
            let _ = write!(out, "{}\t{}", r.sample_id, r.label);
            for v in &r.vector {
                let _ = write!(out, "\t{v}");
            }
            out.push('\n');
        }
        Ok(out)
    }
}

fn header_columns(dim: usize) -> Vec<String> {
    let mut cols = vec!["sample_id".to_string(), "label".to_string()];
    cols.extend((0..dim).map(|i| format!("v{i}")));
    cols
}
