//! Fixed-length segmentation.

use serde::{Deserialize, Serialize};

use crate::audio::AudioClip;
use crate::error::{Error, Result};
use crate::rng::SplitMix64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PadMode {
    /// Cyclic tiling of the clip.
    Repeat,
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CropMode {
    Head,
    /// Offset drawn uniformly from all valid offsets with `crop_seed`.
    SeededRandom,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SegmentSpec {
    pub target_length_s: f64,
    pub pad_mode: PadMode,
    pub crop_mode: CropMode,
    pub crop_seed: u64,
}

impl SegmentSpec {
    /// Evaluation defaults: repeat padding, head crop.
    pub fn eval(target_length_s: f64) -> Self {
        Self {
            target_length_s,
            pad_mode: PadMode::Repeat,
            crop_mode: CropMode::Head,
            crop_seed: 0,
        }
    }

    /// Training defaults: repeat padding, seeded random crop.
    pub fn train(target_length_s: f64, crop_seed: u64) -> Self {
        Self {
            target_length_s,
            pad_mode: PadMode::Repeat,
            crop_mode: CropMode::SeededRandom,
            crop_seed,
        }
    }

    pub fn target_samples(&self, rate_hz: u32) -> usize {
        (self.target_length_s * rate_hz as f64).round() as usize
    }
}

/// Pads or crops `clip` to exactly `target_length_s * sample_rate_hz` samples.
pub fn fix_length(clip: &AudioClip, spec: &SegmentSpec) -> Result<AudioClip> {
    clip.check()?;
    if !(spec.target_length_s.is_finite() && spec.target_length_s > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "target length must be positive, got {} s",
            spec.target_length_s
        )));
    }
    let target = spec.target_samples(clip.sample_rate_hz);
    let n = clip.len();
    let samples = if n >= target {
        let offset = match spec.crop_mode {
            CropMode::Head => 0,
            CropMode::SeededRandom => {
                SplitMix64::new(spec.crop_seed).range_inclusive(0, (n - target) as u64) as usize
            }
        };
        clip.samples[offset..offset + target].to_vec()
    } else {
        match spec.pad_mode {
            PadMode::Zero => {
                let mut v = clip.samples.clone();
                v.resize(target, 0.0);
                v
            }
            PadMode::Repeat => {
                if n == 0 {
                    return Err(Error::InvalidAudio("cannot repeat-pad an empty clip".into()));
                }
                clip.samples.iter().copied().cycle().take(target).collect()
            }
        }
    };
    Ok(AudioClip {
        sample_rate_hz: clip.sample_rate_hz,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ramp(rate: u32, n: usize) -> AudioClip {
        AudioClip::new(rate, (0..n).map(|i| (i % 1000) as f64 / 1000.0).collect()).unwrap()
    }

    #[test]
    fn repeat_tiles() {
        let c = ramp(16_000, 32_000);
        let out = fix_length(&c, &SegmentSpec::eval(4.0)).unwrap();
        assert_eq!(out.len(), 64_000);
        assert_eq!(out.samples[32_000..], out.samples[..32_000]);
    }

    #[test]
    fn zero_pad() {
        let c = ramp(16_000, 100);
        let spec = SegmentSpec {
            pad_mode: PadMode::Zero,
            ..SegmentSpec::eval(0.01)
        };
        let out = fix_length(&c, &spec).unwrap();
        assert_eq!(out.len(), 160);
        assert_eq!(out.samples[..100], c.samples[..]);
        assert!(out.samples[100..].iter().all(|&s| s == 0.0));
        let empty = AudioClip::new(16_000, vec![]).unwrap();
        assert_eq!(fix_length(&empty, &spec).unwrap().samples, vec![0.0; 160]);
    }

    #[test]
    fn head_crop() {
        let c = ramp(16_000, 60 * 16_000);
        let out = fix_length(&c, &SegmentSpec::eval(12.0)).unwrap();
        assert_eq!(out.samples, c.samples[..192_000]);
    }

    #[test]
    fn seeded_crop_is_deterministic() {
        let c = AudioClip::new(16_000, (0..60 * 16_000).map(|i| i as f64 / 1e6).collect()).unwrap();
        let spec = SegmentSpec::train(12.0, 42);
        let a = fix_length(&c, &spec).unwrap();
        let b = fix_length(&c, &spec).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 192_000);
        let other = fix_length(&c, &SegmentSpec::train(12.0, 43)).unwrap();
        assert_ne!(a.samples[0], other.samples[0]);
    }

    #[test]
    fn empty_repeat_is_error() {
        let empty = AudioClip::new(16_000, vec![]).unwrap();
        assert!(fix_length(&empty, &SegmentSpec::eval(4.0)).is_err());
    }

    proptest! {
        #[test]
        fn exact_output_length(n in 1usize..5_000, rate in 100u32..4_000, secs in 0.01f64..3.0, seed: u64, random: bool, zero: bool) {
            let c = ramp(rate, n);
            let spec = SegmentSpec {
                target_length_s: secs,
                pad_mode: if zero { PadMode::Zero } else { PadMode::Repeat },
                crop_mode: if random { CropMode::SeededRandom } else { CropMode::Head },
                crop_seed: seed,
            };
            let out = fix_length(&c, &spec).unwrap();
            prop_assert_eq!(out.len(), (secs * rate as f64).round() as usize);
        }
    }
}
