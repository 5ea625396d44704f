//! RIFF/WAVE decoding and encoding.
//!
//! Decoding accepts 16-bit integer PCM and 32-bit IEEE float, including the
//! `WAVE_FORMAT_EXTENSIBLE` wrapper, with any positive channel count.
//! Channels are averaged to mono; 16-bit samples are scaled by 1/32768.

use std::path::Path;

use crate::audio::AudioClip;
use crate::error::{Error, Result};

const TAG_PCM: u16 = 0x0001;
const TAG_FLOAT: u16 = 0x0003;
const TAG_EXTENSIBLE: u16 = 0xFFFE;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WavFormat {
    Pcm16,
    Float32,
}

struct Fmt {
    tag: u16,
    channels: u16,
    rate: u32,
    bits: u16,
    block_align: u16,
}

fn u16_at(b: &[u8], at: usize) -> u16 {
    u16::from_le_bytes([b[at], b[at + 1]])
}

fn u32_at(b: &[u8], at: usize) -> u32 {
    u32::from_le_bytes([b[at], b[at + 1], b[at + 2], b[at + 3]])
}

fn parse_fmt(body: &[u8]) -> Result<Fmt> {
    if body.len() < 16 {
        return Err(Error::Wav(format!("fmt chunk too short ({} bytes)", body.len())));
    }
    let mut tag = u16_at(body, 0);
    if tag == TAG_EXTENSIBLE {
        if body.len() < 40 {
            return Err(Error::Wav("truncated WAVE_FORMAT_EXTENSIBLE fmt chunk".into()));
        }
        // First two bytes of the sub-format GUID carry the actual format tag.
        tag = u16_at(body, 24);
    }
    Ok(Fmt {
        tag,
        channels: u16_at(body, 2),
        rate: u32_at(body, 4),
        block_align: u16_at(body, 12),
        bits: u16_at(body, 14),
    })
}

/// Decodes a WAV file held in memory into a mono clip.
pub fn decode_wav(bytes: &[u8]) -> Result<AudioClip> {
    if bytes.len() < 12 || &bytes[0..4] != b"RIFF" || &bytes[8..12] != b"WAVE" {
        return Err(Error::Wav("not a RIFF/WAVE file".into()));
    }
    let mut fmt = None;
    let mut data = None;
    let mut pos = 12;
    while pos + 8 <= bytes.len() {
        let id = &bytes[pos..pos + 4];
        let size = u32_at(bytes, pos + 4) as usize;
        let start = pos + 8;
        let end = start
            .checked_add(size)
            .filter(|&e| e <= bytes.len())
            .ok_or_else(|| {
                Error::Wav(format!(
                    "truncated `{}` chunk: declares {size} bytes, {} available",
                    String::from_utf8_lossy(id),
                    bytes.len() - start
                ))
            })?;
        match id {
            b"fmt " => fmt = Some(parse_fmt(&bytes[start..end])?),
            b"data" => data = Some(&bytes[start..end]),
            _ => {}
        }
        pos = end + (size & 1);
    }
    let fmt = fmt.ok_or_else(|| Error::Wav("missing fmt chunk".into()))?;
    let data = data.ok_or_else(|| Error::Wav("missing data chunk".into()))?;

    if fmt.tag != TAG_PCM && fmt.tag != TAG_FLOAT {
        return Err(Error::UnsupportedCodec(fmt.tag));
    }
    if fmt.channels == 0 {
        return Err(Error::Wav("zero channels".into()));
    }
    if fmt.rate == 0 {
        return Err(Error::Wav("zero sample rate".into()));
    }
    let width = match (fmt.tag, fmt.bits) {
        (TAG_PCM, 16) => 2,
        (TAG_FLOAT, 32) => 4,
        (tag, bits) => {
            return Err(Error::Wav(format!(
                "unsupported sample format: tag {tag:#06x} with {bits} bits"
            )))
        }
    };
    let channels = fmt.channels as usize;
    let frame = width * channels;
    if fmt.block_align as usize != frame {
        return Err(Error::Wav(format!(
            "block_align {} does not match {channels} channels of {width} bytes",
            fmt.block_align
        )));
    }
    if data.len() % frame != 0 {
        return Err(Error::Wav(format!(
            "data chunk of {} bytes is not a whole number of {frame}-byte frames",
            data.len()
        )));
    }

    let sample = |b: &[u8]| -> f64 {
        if width == 2 {
            i16::from_le_bytes([b[0], b[1]]) as f64 / 32768.0
        } else {
            f32::from_le_bytes([b[0], b[1], b[2], b[3]]) as f64
        }
    };
    let samples: Vec<f64> = data
        .chunks_exact(frame)
        .map(|f| {
            if channels == 1 {
                sample(f)
            } else {
                f.chunks_exact(width).map(sample).sum::<f64>() / channels as f64
            }
        })
        .collect();
    AudioClip::new(fmt.rate, samples)
}

/// Encodes a mono clip. Integer output is clamped to the 16-bit range.
pub fn encode_wav(clip: &AudioClip, format: WavFormat) -> Vec<u8> {
    let (tag, bits) = match format {
        WavFormat::Pcm16 => (TAG_PCM, 16u16),
        WavFormat::Float32 => (TAG_FLOAT, 32u16),
    };
    let width = bits as usize / 8;
    let data_len = clip.samples.len() * width;
    let mut out = Vec::with_capacity(44 + data_len);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&((36 + data_len) as u32).to_le_bytes());
    out.extend_from_slice(b"WAVEfmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&tag.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes());
    out.extend_from_slice(&clip.sample_rate_hz.to_le_bytes());
    out.extend_from_slice(&(clip.sample_rate_hz * width as u32).to_le_bytes());
    out.extend_from_slice(&(width as u16).to_le_bytes());
    out.extend_from_slice(&bits.to_le_bytes());
    out.extend_from_slice(b"data");
    out.extend_from_slice(&(data_len as u32).to_le_bytes());
    for &s in &clip.samples {
        match format {
            WavFormat::Pcm16 => {
                let v = (s * 32768.0).round().clamp(-32768.0, 32767.0) as i16;
                out.extend_from_slice(&v.to_le_bytes());
            }
            WavFormat::Float32 => out.extend_from_slice(&(s as f32).to_le_bytes()),
        }
    }
    out
}

pub fn read_wav(path: impl AsRef<Path>) -> Result<AudioClip> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_wav(&bytes)
}

pub fn write_wav(path: impl AsRef<Path>, clip: &AudioClip, format: WavFormat) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, encode_wav(clip, format)).map_err(|e| Error::io(path, e))
}
