//! Source-dataset catalogs.
//!
//! A catalog is the inventory of every sample available in the source
//! datasets before any selection happens. On disk it is UTF-8, tab-separated,
//! with a required header line and optional `#` comment lines:
//!
//! ```text
//! sample_id	path	label	dataset	language	source_system	duration_s
//! LA_T_1000137	LA/LA_T_1000137.flac	spoof	ASVspoof19LA	en	A04	3.21
//! ```
//!
//! `duration_s` may be left empty.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tsv;

pub const CATALOG_COLUMNS: [&str; 7] = [
    "sample_id",
    "path",
    "label",
    "dataset",
    "language",
    "source_system",
    "duration_s",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Bonafide,
    Spoof,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Bonafide => "bonafide",
            Label::Spoof => "spoof",
        }
    }

    pub fn opposite(self) -> Label {
        match self {
            Label::Bonafide => Label::Spoof,
            Label::Spoof => Label::Bonafide,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "bonafide" => Ok(Label::Bonafide),
            "spoof" => Ok(Label::Spoof),
            other => Err(format!("unknown label `{other}`")),
        }
    }
}

/// Source datasets. Variants are declared in the lexicographic order of
/// their tokens, so the derived `Ord` matches sorting by token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Dataset {
    #[serde(rename = "ASVspoof19LA")]
    Asvspoof19La,
    #[serde(rename = "CodecFakeA2")]
    CodecFakeA2,
    #[serde(rename = "FamousFigures")]
    FamousFigures,
    #[serde(rename = "MAILABS")]
    MAilabs,
    #[serde(rename = "MLAAD")]
    Mlaad,
    #[serde(rename = "Other")]
    Other,
    #[serde(rename = "SpoofCeleb")]
    SpoofCeleb,
}

impl Dataset {
    pub const ALL: [Dataset; 7] = [
        Dataset::Asvspoof19La,
        Dataset::CodecFakeA2,
        Dataset::FamousFigures,
        Dataset::MAilabs,
        Dataset::Mlaad,
        Dataset::Other,
        Dataset::SpoofCeleb,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Dataset::Asvspoof19La => "ASVspoof19LA",
            Dataset::CodecFakeA2 => "CodecFakeA2",
            Dataset::FamousFigures => "FamousFigures",
            Dataset::MAilabs => "MAILABS",
            Dataset::Mlaad => "MLAAD",
            Dataset::Other => "Other",
            Dataset::SpoofCeleb => "SpoofCeleb",
        }
    }
}

impl fmt::Display for Dataset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Dataset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Dataset::ALL
            .into_iter()
            .find(|d| d.as_str() == s)
            .ok_or_else(|| format!("unknown dataset `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub sample_id: String,
    pub path: String,
    pub label: Label,
    pub dataset: Dataset,
    /// Lowercase ISO-639-1 code, or `und`.
    pub language: String,
    /// TTS system for spoof samples, recording source for bonafide ones.
    pub source_system: String,
    pub duration_s: Option<f64>,
}

impl CatalogEntry {
    /// Canonical ordering key used for sampling and serialization.
    pub fn canonical_key(&self) -> (Dataset, &str) {
        (self.dataset, self.sample_id.as_str())
    }

    pub fn check(&self) -> Result<(), String> {
        if self.sample_id.is_empty() {
            return Err("empty sample_id".into());
        }
        if !is_language_code(&self.language) {
            return Err(format!(
                "language `{}` is not a lowercase ISO-639-1 code or `und`",
                self.language
            ));
        }
        if self.label == Label::Spoof && self.source_system.is_empty() {
            return Err(format!("spoof sample `{}` has no source_system", self.sample_id));
        }
        if let Some(d) = self.duration_s {
            if !(d.is_finite() && d >= 0.0) {
                return Err(format!("duration_s must be a nonnegative number, got {d}"));
            }
        }
        for (name, value) in [
            ("sample_id", &self.sample_id),
            ("path", &self.path),
            ("source_system", &self.source_system),
        ] {
            tsv::check_field(name, value).map_err(|e| e.to_string())?;
        }
        Ok(())
    }

    pub(crate) fn parse_fields(fields: &[&str]) -> Result<Self, String> {
        let duration_s = match fields[6] {
            "" | "-" => None,
            s => Some(
                s.parse::<f64>()
                    .map_err(|_| format!("invalid duration_s `{s}`"))?,
            ),
        };
        let entry = CatalogEntry {
            sample_id: fields[0].to_string(),
            path: fields[1].to_string(),
            label: fields[2].parse()?,
            dataset: fields[3].parse()?,
            language: fields[4].to_string(),
            source_system: fields[5].to_string(),
            duration_s,
        };
        entry.check()?;
        Ok(entry)
    }

    pub(crate) fn write_fields(&self, out: &mut String) {
        use std::fmt::Write;
        let _ = write!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t",
            self.sample_id, self.path, self.label, self.dataset, self.language, self.source_system
        );
        if let Some(d) = self.duration_s {
            let _ = write!(out, "{d}");
        }
    }
}

fn is_language_code(s: &str) -> bool {
    s == "und" || (s.len() == 2 && s.bytes().all(|b| b.is_ascii_lowercase()))
}

/// An inventory of samples with unique ids.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
}

impl Catalog {
    /// Builds a catalog, rejecting duplicate ids and invalid entries.
    pub fn new(entries: Vec<CatalogEntry>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(entries.len());
        for e in &entries {
            e.check().map_err(Error::InvalidArgument)?;
            if !seen.insert(e.sample_id.as_str()) {
                return Err(Error::DuplicateId(e.sample_id.clone()));
            }
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in canonical `(dataset, sample_id)` order.
    pub fn canonical(&self) -> Vec<&CatalogEntry> {
        let mut v: Vec<&CatalogEntry> = self.entries.iter().collect();
        v.sort_by(|a, b| a.canonical_key().cmp(&b.canonical_key()));
        v
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = tsv::records(text);
        let (hl, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing header line"))?;
        tsv::expect_header(hl, header, &CATALOG_COLUMNS)?;

        let mut entries = Vec::new();
        let mut seen = HashSet::new();
        for (line_no, line) in lines {
            let fields = tsv::split_exact(line_no, line, CATALOG_COLUMNS.len())?;
            let entry = CatalogEntry::parse_fields(&fields).map_err(|m| Error::parse(line_no, m))?;
            if !seen.insert(entry.sample_id.clone()) {
                return Err(Error::DuplicateId(entry.sample_id));
            }
            entries.push(entry);
        }
        Ok(Self { entries })
    }

    pub fn to_tsv(&self) -> String {
        let mut out = CATALOG_COLUMNS.join("\t");
        out.push('\n');
        for e in &self.entries {
            e.write_fields(&mut out);
            out.push('\n');
        }
        out
    }
}

/// Reads and parses a catalog file.
pub fn load_catalog(path: impl AsRef<Path>) -> Result<Catalog> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Catalog::parse(&text).map_err(|e| e.in_file(path.display().to_string()))
}
