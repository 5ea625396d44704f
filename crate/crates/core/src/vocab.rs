//! Source names used by the SAFE challenge evaluation sets.
//!
//! These are the controlled vocabulary for `source_system` values of
//! evaluation manifests and for grouping per-source report rows.

pub const PRISTINE_SOURCES: &[&str] = &[
    "Mandarin Podcast",
    "FLEURS German",
    "VSP Semi-professional",
    "YouTube phonecall",
    "VSP Documentary",
    "Arabic Speech Corpus",
    "High Quality Podcasts",
    "Japanese Shortwave",
    "Conference",
    "English Podcast",
    "FLEURS English",
    "Djeco",
    "Digitized Cassette",
    "Librivox",
    "Old Radio",
    "phone home",
    "Russian Audiobook",
    "VSP Home Mic",
    "Radio Drama",
    "VSP Professional",
];

pub const TTS_SYSTEMS: &[&str] = &[
    "elevenlabs",
    "fish",
    "hierspeech",
    "kokoro",
    "parler",
    "seamless",
    "style",
    "cartesia",
    "edge",
    "f5",
    "metavoice",
    "openai",
    "zonos",
];

pub const PROCESSING_CONDITIONS: &[&str] = &[
    "aac 16k",
    "encodec",
    "focalcodec",
    "mp3-aac-mp3 16k",
    "mp3-aac 16k",
    "mp3 16k",
    "mp3 VBR",
    "noise",
    "opus 16k",
    "phone audio",
    "pitch shift",
    "resample down/up",
    "semanticodec",
    "snac",
    "speech filter",
    "time stretch",
    "vorbis 16k",
];

pub const LAUNDERING_CONDITIONS: &[&str] = &["car", "played", "played reverb car", "reverb"];

/// Report category of a known source name, if any.
pub fn category_of(source: &str) -> Option<&'static str> {
    let has = |list: &[&str]| list.iter().any(|s| s.eq_ignore_ascii_case(source));
    if has(PRISTINE_SOURCES) {
        Some("pristine")
    } else if has(TTS_SYSTEMS) {
        Some("generated")
    } else if has(PROCESSING_CONDITIONS) {
        Some("processed")
    } else if has(LAUNDERING_CONDITIONS) {
        Some("laundered")
    } else {
        None
    }
}
