//! Synthetic catalogs with the cardinalities a preset needs.
//!
//! Real corpora are supplied by the user as catalog files. For tests and
//! dry runs, [`stub_catalog`] fabricates entries (ids, paths, languages and
//! system names, no audio) so that every quota line and MLAAD rule of a
//! preset has a surplus of eligible samples.

use crate::catalog::{Catalog, CatalogEntry, Dataset, Label};
use crate::preset::{CompositionPreset, QuotaLine, ValSystems};

#[derive(Debug, Clone, Copy)]
pub struct StubOptions {
    /// Extra eligible entries per line, as a fraction of its count.
    pub surplus: f64,
    /// Extra MLAAD systems per language beyond the minimum required.
    pub extra_systems: usize,
}

impl Default for StubOptions {
    fn default() -> Self {
        Self {
            surplus: 0.05,
            extra_systems: 1,
        }
    }
}

const FAMOUS_SPEAKERS: &[&str] = &[
    "donald_trump",
    "jd_vance",
    "joe_biden",
    "kamala_harris",
    "barack_obama",
    "sadiq_khan",
];
const FF_SYSTEMS: &[&str] = &["styletts2", "xttsv2", "f5tts", "e2tts", "fishspeech"];

struct Builder {
    entries: Vec<CatalogEntry>,
    counter: usize,
}

impl Builder {
    fn push(&mut self, prefix: &str, dataset: Dataset, label: Label, language: &str, system: String) {
        self.counter += 1;
        let id = format!("{prefix}{:07}", self.counter);
        self.entries.push(CatalogEntry {
            path: format!("{}/{id}.wav", dataset.as_str()),
            sample_id: id,
            label,
            dataset,
            language: language.to_string(),
            source_system: system,
            duration_s: None,
        });
    }
}

fn with_surplus(count: usize, surplus: f64) -> usize {
    count + ((count as f64 * surplus).ceil() as usize).max(1)
}

fn default_prefix(dataset: Dataset) -> &'static str {
    match dataset {
        Dataset::Asvspoof19La => "LA_X_",
        Dataset::CodecFakeA2 => "CF_",
        Dataset::FamousFigures => "FF_",
        Dataset::MAilabs => "MAI_",
        Dataset::Mlaad => "MLAAD_",
        Dataset::Other => "OTH_",
        Dataset::SpoofCeleb => "SC_",
    }
}

fn system_for(line: &QuotaLine, language: &str, k: usize) -> String {
    let speakers: Vec<&str> = if line.source_prefixes.is_empty() {
        FAMOUS_SPEAKERS.to_vec()
    } else {
        line.source_prefixes.iter().map(String::as_str).collect()
    };
    match (line.dataset, line.label) {
        (Dataset::Asvspoof19La, Label::Spoof) => format!("A{:02}", k % 6 + 1),
        (Dataset::Asvspoof19La, Label::Bonafide) => "vctk".into(),
        (Dataset::MAilabs, _) => format!("mailabs_{language}_speaker{}", k % 4),
        (Dataset::Mlaad, _) => format!("mlaad_tts_{:02}", k % 20),
        (Dataset::CodecFakeA2, _) => "valle_x".into(),
        (Dataset::FamousFigures, Label::Bonafide) => speakers[k % speakers.len()].to_string(),
        (Dataset::FamousFigures, Label::Spoof) => format!(
            "{}/{}",
            speakers[k % speakers.len()],
            FF_SYSTEMS[k / speakers.len() % FF_SYSTEMS.len()]
        ),
        (Dataset::SpoofCeleb, Label::Bonafide) => "voxceleb1".into(),
        (Dataset::SpoofCeleb, Label::Spoof) => format!("spoofceleb_tts_{:02}", k % 23),
        (Dataset::Other, Label::Bonafide) => "other_source".into(),
        (Dataset::Other, Label::Spoof) => "other_tts".into(),
    }
}

/// Fabricates a catalog that satisfies `preset` with some surplus.
pub fn stub_catalog(preset: &CompositionPreset, options: StubOptions) -> Catalog {
    let mut b = Builder {
        entries: Vec::new(),
        counter: 0,
    };

    for line in &preset.quotas {
        let prefix = line
            .sample_id_prefix
            .clone()
            .unwrap_or_else(|| default_prefix(line.dataset).to_string());
        let languages: Vec<&str> = if line.languages.is_empty() {
            vec!["en"]
        } else {
            line.languages.iter().map(String::as_str).collect()
        };
        let n = if line.count == 0 { 0 } else { with_surplus(line.count, options.surplus) };
        for k in 0..n {
            let lang = languages[k % languages.len()];
            let system = system_for(line, lang, k);
            b.push(&prefix, line.dataset, line.label, lang, system);
        }
    }

    for rule in &preset.mlaad_rules {
        let n_systems = rule.required_systems() + options.extra_systems;
        let n_systems = match rule.min_systems {
            // A language declared with an exact system inventory gets exactly that many.
            Some(min) if min >= rule.required_systems() => min,
            _ => n_systems,
        };
        let n_val = match rule.val_systems {
            ValSystems::All => n_systems,
            ValSystems::Count(k) => k,
        };
        let per_val = if n_val == 0 { 0 } else { rule.val_count.div_ceil(n_val) };
        let per_train = if n_systems == n_val { 0 } else { rule.train_count.div_ceil(n_systems - n_val) };
        let per_system = with_surplus(per_val.max(per_train), options.surplus);
        for s in 0..n_systems {
            for _ in 0..per_system {
                let system = format!("mlaad_{}_tts_{s:02}", rule.language);
                b.push("MLAAD_", Dataset::Mlaad, Label::Spoof, &rule.language, system);
            }
        }
    }

    Catalog::new(b.entries).expect("stub ids are unique and entries valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preset::bundled;

    #[test]
    fn english_has_exactly_36_systems() {
        let cat = stub_catalog(&bundled("iter4").unwrap(), StubOptions::default());
        let systems: std::collections::BTreeSet<_> = cat
            .entries()
            .iter()
            .filter(|e| e.dataset == Dataset::Mlaad && e.language == "en")
            .map(|e| e.source_system.as_str())
            .collect();
        assert_eq!(systems.len(), 36);
    }

    #[test]
    fn every_line_has_surplus() {
        for id in crate::preset::BUNDLED_IDS {
            let p = bundled(id).unwrap();
            let cat = stub_catalog(&p, StubOptions::default());
            for q in &p.quotas {
                let eligible = cat.entries().iter().filter(|e| q.eligible(e)).count();
                assert!(eligible > q.count, "{id}: {q}");
            }
        }
    }
}
