//! RawBoost-style waveform augmentation.
//!
//! Two noise families are implemented, plus their series combination:
//!
//! * **Convolutive** (linear and non-linear): for each order `k` in
//!   `1..=nonlinearity_order`, a fresh set of notch bands is drawn, a FIR
//!   kernel is designed from them, and `x^k` is filtered by it. Term `k` is
//!   attenuated by `order_gain_decay_db * (k - 1)` dB. The sum is rescaled to
//!   the input's peak amplitude.
//! * **Impulsive signal-dependent additive**: `floor(p * len / 100)` positions
//!   are chosen without replacement; at each, `x += ±g·x` with `g` drawn from
//!   `gain_db_range` (in dB). Other samples are left untouched.
//!
//! Each operation is a pure function of `(clip, params, seed)`. Series mode
//! runs convolutive noise with `seed` and impulsive noise with `seed ^ 1`,
//! then clamps to `[-1, 1]`.

pub mod fir;

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::audio::AudioClip;
use crate::error::{Error, Result};
use crate::rng::SplitMix64;

pub use fir::NotchBand;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AugmentMode {
    Convolutive,
    Impulsive,
    SeriesConvThenImp,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ConvolutiveParams {
    /// Inclusive range for the number of bands per order.
    pub n_bands_range: [u32; 2],
    /// Band centres are drawn from this range (Hz).
    pub center_hz_range: [f64; 2],
    pub notch_min_width_hz: f64,
    pub notch_max_width_hz: f64,
    pub band_gain_db_range: [f64; 2],
    pub nonlinearity_order: u32,
    pub order_gain_decay_db: f64,
}

impl Default for ConvolutiveParams {
    fn default() -> Self {
        Self {
            n_bands_range: [1, 5],
            center_hz_range: [20.0, 8000.0],
            notch_min_width_hz: 20.0,
            notch_max_width_hz: 1000.0,
            band_gain_db_range: [-5.0, 5.0],
            nonlinearity_order: 5,
            order_gain_decay_db: 10.0,
        }
    }
}

impl ConvolutiveParams {
    pub fn check(&self) -> Result<()> {
        let ordered = |name: &str, lo: f64, hi: f64| {
            if lo.is_finite() && hi.is_finite() && lo <= hi {
                Ok(())
            } else {
                Err(Error::InvalidArgument(format!("{name}: need finite min <= max, got [{lo}, {hi}]")))
            }
        };
        ordered("n_bands_range", self.n_bands_range[0] as f64, self.n_bands_range[1] as f64)?;
        ordered("center_hz_range", self.center_hz_range[0], self.center_hz_range[1])?;
        ordered("notch width", self.notch_min_width_hz, self.notch_max_width_hz)?;
        ordered("band_gain_db_range", self.band_gain_db_range[0], self.band_gain_db_range[1])?;
        if self.notch_min_width_hz < 0.0 || self.center_hz_range[0] < 0.0 {
            return Err(Error::InvalidArgument("frequencies and widths must be nonnegative".into()));
        }
        if self.nonlinearity_order < 1 {
            return Err(Error::InvalidArgument("nonlinearity_order must be >= 1".into()));
        }
        if !self.order_gain_decay_db.is_finite() {
            return Err(Error::InvalidArgument("order_gain_decay_db must be finite".into()));
        }
        Ok(())
    }

    fn draw_bands(&self, rng: &mut SplitMix64) -> Vec<NotchBand> {
        let n = rng.range_inclusive(self.n_bands_range[0] as u64, self.n_bands_range[1] as u64);
        (0..n)
            .map(|_| NotchBand {
                center_hz: rng.uniform(self.center_hz_range[0], self.center_hz_range[1]),
                width_hz: rng.uniform(self.notch_min_width_hz, self.notch_max_width_hz),
                gain_db: rng.uniform(self.band_gain_db_range[0], self.band_gain_db_range[1]),
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ImpulsiveParams {
    /// Percentage of samples perturbed, drawn once per call.
    pub p_percent_range: [f64; 2],
    pub gain_db_range: [f64; 2],
}

impl Default for ImpulsiveParams {
    fn default() -> Self {
        Self {
            p_percent_range: [0.0, 10.0],
            gain_db_range: [-5.0, 5.0],
        }
    }
}

impl ImpulsiveParams {
    pub fn check(&self) -> Result<()> {
        let [plo, phi] = self.p_percent_range;
        if !(0.0 <= plo && plo <= phi && phi <= 100.0) {
            return Err(Error::InvalidArgument(format!(
                "p_percent_range must satisfy 0 <= min <= max <= 100, got [{plo}, {phi}]"
            )));
        }
        let [glo, ghi] = self.gain_db_range;
        if !(glo.is_finite() && ghi.is_finite() && glo <= ghi) {
            return Err(Error::InvalidArgument(format!("gain_db_range must be ordered, got [{glo}, {ghi}]")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AugmentationRecipe {
    pub mode: AugmentMode,
    #[serde(default)]
    pub convolutive: ConvolutiveParams,
    #[serde(default)]
    pub impulsive: ImpulsiveParams,
    #[serde(default)]
    pub seed: u64,
}

impl Default for AugmentationRecipe {
    fn default() -> Self {
        Self {
            mode: AugmentMode::SeriesConvThenImp,
            convolutive: ConvolutiveParams::default(),
            impulsive: ImpulsiveParams::default(),
            seed: 0,
        }
    }
}

impl AugmentationRecipe {
    pub fn from_json(text: &str) -> Result<Self> {
        let r: Self = serde_json::from_str(text)?;
        r.convolutive.check()?;
        r.impulsive.check()?;
        Ok(r)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("recipe serializes");
        s.push('\n');
        s
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self { seed, ..self.clone() }
    }
}

/// Linear and non-linear convolutive noise.
pub fn convolutive_noise(clip: &AudioClip, params: &ConvolutiveParams, seed: u64) -> Result<AudioClip> {
    clip.check()?;
    params.check()?;
    if clip.is_empty() {
        return Err(Error::InvalidAudio("convolutive noise needs a non-empty clip".into()));
    }
    let peak_in = clip.peak();
    if peak_in == 0.0 {
        return Ok(clip.clone());
    }
    let mut rng = SplitMix64::new(seed);
    let mut mixed: Vec<f64> = Vec::new();
    for order in 1..=params.nonlinearity_order {
        let kernel = fir::design_kernel(&params.draw_bands(&mut rng), clip.sample_rate_hz);
        let powered: Vec<f64> = clip.samples.iter().map(|x| x.powi(order as i32)).collect();
        let filtered = fir::filter(&powered, &kernel);
        let gain = 10f64.powf(-params.order_gain_decay_db * (order - 1) as f64 / 20.0);
        if mixed.is_empty() {
            mixed = filtered.into_iter().map(|y| gain * y).collect();
        } else {
            for (m, y) in mixed.iter_mut().zip(filtered) {
                *m += gain * y;
            }
        }
    }
    let peak_out = mixed.iter().fold(0.0f64, |m, s| m.max(s.abs()));
    if peak_out > 0.0 && peak_out != peak_in {
        let scale = peak_in / peak_out;
        for m in &mut mixed {
            *m *= scale;
        }
    }
    Ok(AudioClip {
        sample_rate_hz: clip.sample_rate_hz,
        samples: mixed,
    })
}

/// Impulsive signal-dependent additive noise.
pub fn impulsive_noise(clip: &AudioClip, params: &ImpulsiveParams, seed: u64) -> Result<AudioClip> {
    clip.check()?;
    params.check()?;
    let mut rng = SplitMix64::new(seed);
    let n = clip.len();
    let p = rng.uniform(params.p_percent_range[0], params.p_percent_range[1]);
    let count = ((p * n as f64 / 100.0).floor() as usize).min(n);
    let mut out = clip.samples.clone();
    for pos in rng.sample_indices(n, count) {
        let gain = 10f64.powf(rng.uniform(params.gain_db_range[0], params.gain_db_range[1]) / 20.0);
        let sign = if rng.next_bool() { 1.0 } else { -1.0 };
        out[pos] += sign * gain * clip.samples[pos];
    }
    Ok(AudioClip {
        sample_rate_hz: clip.sample_rate_hz,
        samples: out,
    })
}

/// Applies the recipe. The result is finite and within `[-1, 1]`.
pub fn apply_recipe(clip: &AudioClip, recipe: &AugmentationRecipe) -> Result<AudioClip> {
    let out = match recipe.mode {
        AugmentMode::None => {
            clip.check()?;
            return Ok(clip.clone());
        }
        AugmentMode::Convolutive => convolutive_noise(clip, &recipe.convolutive, recipe.seed)?,
        AugmentMode::Impulsive => impulsive_noise(clip, &recipe.impulsive, recipe.seed)?,
        AugmentMode::SeriesConvThenImp => {
            let conv = convolutive_noise(clip, &recipe.convolutive, recipe.seed)?;
            impulsive_noise(&conv, &recipe.impulsive, recipe.seed ^ 1)?
        }
    };
    Ok(clamp(out))
}

fn clamp(mut clip: AudioClip) -> AudioClip {
    for s in &mut clip.samples {
        *s = s.clamp(-1.0, 1.0);
    }
    clip
}
