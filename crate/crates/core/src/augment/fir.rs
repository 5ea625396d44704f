//! FIR design by frequency sampling and causal FIR filtering.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

/// Kernel length for shaped responses.
pub const KERNEL_TAPS: usize = 1024;

/// Direct convolution is used while `signal_len * taps` stays below this.
pub const DIRECT_CONVOLUTION_LIMIT: usize = 1 << 22;

/// A band whose magnitude response is scaled by `gain_db`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NotchBand {
    pub center_hz: f64,
    pub width_hz: f64,
    pub gain_db: f64,
}

impl NotchBand {
    fn contains(&self, f: f64) -> bool {
        (f - self.center_hz).abs() <= self.width_hz / 2.0
    }
}

/// Designs a linear-phase FIR kernel whose magnitude response is 1 outside
/// the bands and `10^(gain_db/20)` inside each band (overlaps multiply).
///
/// The desired response is sampled on the `KERNEL_TAPS`-point DFT grid, the
/// type-II linear-phase impulse response is obtained by an inverse cosine
/// transform, and a Hamming window is applied. If every band has 0 dB gain
/// the response is flat and the kernel is the unit impulse `[1.0]`.
pub fn design_kernel(bands: &[NotchBand], sample_rate_hz: u32) -> Vec<f64> {
    if bands.iter().all(|b| b.gain_db == 0.0) {
        return vec![1.0];
    }
    let n = KERNEL_TAPS;
    let fs = sample_rate_hz as f64;
    let response: Vec<f64> = (0..n / 2)
        .map(|k| {
            let f = k as f64 * fs / n as f64;
            bands
                .iter()
                .filter(|b| b.contains(f))
                .map(|b| 10f64.powf(b.gain_db / 20.0))
                .product()
        })
        .collect();
    let center = (n as f64 - 1.0) / 2.0;
    let two_pi = 2.0 * std::f64::consts::PI;
    (0..n)
        .map(|i| {
            let t = i as f64 - center;
            let mut acc = response[0];
            for (k, &h) in response.iter().enumerate().skip(1) {
                acc += 2.0 * h * (two_pi * k as f64 * t / n as f64).cos();
            }
            let hamming = 0.54 - 0.46 * (two_pi * i as f64 / (n as f64 - 1.0)).cos();
            acc / n as f64 * hamming
        })
        .collect()
}

/// Causal filtering `y[n] = sum_k h[k] x[n-k]`, truncated to `x.len()`.
pub fn filter(signal: &[f64], kernel: &[f64]) -> Vec<f64> {
    if kernel.len() == 1 {
        return signal.iter().map(|&x| kernel[0] * x).collect();
    }
    if signal.len().saturating_mul(kernel.len()) <= DIRECT_CONVOLUTION_LIMIT {
        filter_direct(signal, kernel)
    } else {
        filter_fft(signal, kernel)
    }
}

pub fn filter_direct(signal: &[f64], kernel: &[f64]) -> Vec<f64> {
    (0..signal.len())
        .map(|n| {
            let kmax = kernel.len().min(n + 1);
            (0..kmax).map(|k| kernel[k] * signal[n - k]).sum()
        })
        .collect()
}

pub fn filter_fft(signal: &[f64], kernel: &[f64]) -> Vec<f64> {
    if signal.is_empty() {
        return Vec::new();
    }
    let size = (signal.len() + kernel.len() - 1).next_power_of_two();
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(size);
    let inv = planner.plan_fft_inverse(size);
    let spectrum = |v: &[f64]| {
        let mut buf: Vec<Complex<f64>> = v.iter().map(|&x| Complex::new(x, 0.0)).collect();
        buf.resize(size, Complex::new(0.0, 0.0));
        fwd.process(&mut buf);
        buf
    };
    let mut a = spectrum(signal);
    let b = spectrum(kernel);
    for (x, y) in a.iter_mut().zip(&b) {
        *x *= y;
    }
    inv.process(&mut a);
    a.truncate(signal.len());
    a.into_iter().map(|c| c.re / size as f64).collect()
}
