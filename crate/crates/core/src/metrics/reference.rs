use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::audio::AudioClip;
use crate::error::{Error, Result};

/// Boundary of the "high band" used by [`reference_scorer`].
pub const HIGH_BAND_HZ: f64 = 4000.0;

const STEEPNESS: f64 = 8.0;

/// A deterministic toy detector for exercising the evaluation path.
///
/// Computes the fraction of spectral energy above [`HIGH_BAND_HZ`] and maps
/// it to `1 / (1 + exp(8 * (ratio - 0.5)))`, so band-limited clips score
/// high (bonafide-like). A silent clip has ratio 0. It is not a real
/// detector.
pub fn reference_scorer(clip: &AudioClip) -> Result<f64> {
    clip.check()?;
    if clip.is_empty() {
        return Err(Error::InvalidAudio("cannot score an empty clip".into()));
    }
    let n = clip.len();
    let mut buf: Vec<Complex<f64>> = clip.samples.iter().map(|&x| Complex::new(x, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);

    let bin_hz = clip.sample_rate_hz as f64 / n as f64;
    let (mut total, mut high) = (0.0, 0.0);
    for (k, c) in buf.iter().enumerate().take(n / 2 + 1) {
        let p = c.norm_sqr();
        total += p;
        if k as f64 * bin_hz > HIGH_BAND_HZ {
            high += p;
        }
    }
    let ratio = if total > 0.0 { high / total } else { 0.0 };
    Ok(1.0 / (1.0 + (STEEPNESS * (ratio - 0.5)).exp()))
}
