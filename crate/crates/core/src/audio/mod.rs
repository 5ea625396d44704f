//! Audio clips, WAV I/O, resampling and fixed-length segmentation.

mod resample;
mod segment;
mod wav;

pub use resample::{resample, Resampler, RESAMPLER_TAPS};
pub use segment::{fix_length, CropMode, PadMode, SegmentSpec};
pub use wav::{decode_wav, encode_wav, read_wav, write_wav, WavFormat};

use crate::error::{Error, Result};

/// Sample rate every clip is brought to before segmentation.
pub const TARGET_RATE_HZ: u32 = 16_000;

/// Mono audio with a known sample rate.
#[derive(Debug, Clone, PartialEq)]
pub struct AudioClip {
    pub sample_rate_hz: u32,
    pub samples: Vec<f64>,
}

impl AudioClip {
    /// Creates a clip after checking the rate is positive and every sample is finite.
    pub fn new(sample_rate_hz: u32, samples: Vec<f64>) -> Result<Self> {
        let clip = Self {
            sample_rate_hz,
            samples,
        };
        clip.check()?;
        Ok(clip)
    }

    pub fn check(&self) -> Result<()> {
        if self.sample_rate_hz == 0 {
            return Err(Error::InvalidAudio("sample rate must be positive".into()));
        }
        if let Some(i) = self.samples.iter().position(|s| !s.is_finite()) {
            return Err(Error::InvalidAudio(format!("non-finite sample at index {i}")));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate_hz as f64
    }

    pub fn peak(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, s| m.max(s.abs()))
    }

    pub fn rms(&self) -> f64 {
        if self.samples.is_empty() {
            return 0.0;
        }
        (self.samples.iter().map(|s| s * s).sum::<f64>() / self.samples.len() as f64).sqrt()
    }
}
