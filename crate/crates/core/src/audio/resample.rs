//! Polyphase windowed-sinc sample-rate conversion.
//!
//! For a rational ratio `up/down = target/source` (reduced by their gcd),
//! output sample `j` sits at input position `j * down / up`. Its value is a
//! 64-tap dot product with a Kaiser-windowed sinc whose cutoff is
//! `0.9 * min(source Nyquist, target Nyquist)`. The `up` distinct fractional
//! offsets are the polyphase branches; their taps are precomputed and
//! normalized to unit DC gain. Samples outside the clip count as zero.

use crate::audio::AudioClip;
use crate::error::{Error, Result};

pub const RESAMPLER_TAPS: usize = 64;
const HALF: usize = RESAMPLER_TAPS / 2;
const KAISER_BETA: f64 = 8.0;
const CUTOFF_FRACTION: f64 = 0.9;
/// Above this many phases the taps are computed per output sample instead.
const MAX_TABLE_PHASES: u64 = 4096;

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Zeroth-order modified Bessel function of the first kind.
fn bessel_i0(x: f64) -> f64 {
    let half = x / 2.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    while term > sum * 1e-17 {
        term *= (half / k) * (half / k);
        sum += term;
        k += 1.0;
    }
    sum
}

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        let px = std::f64::consts::PI * x;
        px.sin() / px
    }
}

#[derive(Debug, Clone)]
pub struct Resampler {
    source_hz: u32,
    target_hz: u32,
    up: u64,
    down: u64,
    /// Cutoff in cycles per input sample.
    cutoff: f64,
    i0_beta: f64,
    table: Option<Vec<f64>>,
}

impl Resampler {
    pub fn new(source_hz: u32, target_hz: u32) -> Result<Self> {
        if source_hz == 0 || target_hz == 0 {
            return Err(Error::InvalidArgument("sample rates must be positive".into()));
        }
        let g = gcd(source_hz as u64, target_hz as u64);
        let up = target_hz as u64 / g;
        let down = source_hz as u64 / g;
        let cutoff = CUTOFF_FRACTION * 0.5 * (up as f64 / down as f64).min(1.0);
        let mut r = Self {
            source_hz,
            target_hz,
            up,
            down,
            cutoff,
            i0_beta: bessel_i0(KAISER_BETA),
            table: None,
        };
        if up <= MAX_TABLE_PHASES {
            let mut table = Vec::with_capacity(up as usize * RESAMPLER_TAPS);
            for phase in 0..up {
                table.extend_from_slice(&r.phase_taps(phase));
            }
            r.table = Some(table);
        }
        Ok(r)
    }

    pub fn source_hz(&self) -> u32 {
        self.source_hz
    }

    pub fn target_hz(&self) -> u32 {
        self.target_hz
    }

    fn kernel(&self, tau: f64) -> f64 {
        let u = tau / HALF as f64;
        if u.abs() > 1.0 {
            return 0.0;
        }
        let window = bessel_i0(KAISER_BETA * (1.0 - u * u).sqrt()) / self.i0_beta;
        2.0 * self.cutoff * sinc(2.0 * self.cutoff * tau) * window
    }

    /// Taps for fractional offset `phase / up`; tap `m` weighs input
    /// sample `base - (HALF - 1) + m`.
    fn phase_taps(&self, phase: u64) -> [f64; RESAMPLER_TAPS] {
        let frac = phase as f64 / self.up as f64;
        let mut taps = [0.0; RESAMPLER_TAPS];
        for (m, t) in taps.iter_mut().enumerate() {
            *t = self.kernel(frac + (HALF - 1) as f64 - m as f64);
        }
        let sum: f64 = taps.iter().sum();
        for t in &mut taps {
            *t /= sum;
        }
        taps
    }

    /// `round(n * target / source)`, ties rounding up.
    pub fn output_len(&self, n: usize) -> usize {
        let num = n as u128 * self.up as u128;
        ((2 * num + self.down as u128) / (2 * self.down as u128)) as usize
    }

    pub fn process(&self, input: &[f64]) -> Vec<f64> {
        if self.up == self.down {
            return input.to_vec();
        }
        let n = input.len() as i64;
        let out_len = self.output_len(input.len());
        let mut out = Vec::with_capacity(out_len);
        let mut scratch;
        for j in 0..out_len as u64 {
            let pos = j as u128 * self.down as u128;
            let base = (pos / self.up as u128) as i64;
            let phase = (pos % self.up as u128) as u64;
            let taps: &[f64] = match &self.table {
                Some(t) => &t[phase as usize * RESAMPLER_TAPS..(phase as usize + 1) * RESAMPLER_TAPS],
                None => {
                    scratch = self.phase_taps(phase);
                    &scratch
                }
            };
            let first = base - (HALF as i64 - 1);
            let acc = if first >= 0 && first + RESAMPLER_TAPS as i64 <= n {
                let window = &input[first as usize..first as usize + RESAMPLER_TAPS];
                window.iter().zip(taps).map(|(x, h)| x * h).sum()
            } else {
                taps.iter()
                    .enumerate()
                    .filter_map(|(m, h)| {
                        let k = first + m as i64;
                        (0..n).contains(&k).then(|| input[k as usize] * h)
                    })
                    .sum()
            };
            out.push(acc);
        }
        out
    }
}

/// Converts `clip` to `target_hz`. Returns an identical copy when the rate
/// already matches.
pub fn resample(clip: &AudioClip, target_hz: u32) -> Result<AudioClip> {
    if target_hz == 0 {
        return Err(Error::InvalidArgument("target sample rate must be positive".into()));
    }
    clip.check()?;
    if target_hz == clip.sample_rate_hz {
        return Ok(clip.clone());
    }
    let r = Resampler::new(clip.sample_rate_hz, target_hz)?;
    Ok(AudioClip {
        sample_rate_hz: target_hz,
        samples: r.process(&clip.samples),
    })
}
