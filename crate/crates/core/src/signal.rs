//! Synthetic periodic signals, noisy uniform sampling, zero-phase Butterworth
//! bandpass filtering, linear resampling and blind segmentation.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::seed::rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteSignal {
    samples: Vec<f64>,
    freq_hz: f64,
}

impl DiscreteSignal {
    pub fn new(samples: Vec<f64>, freq_hz: f64) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::invalid("signal has no samples"));
        }
        if !(freq_hz.is_finite() && freq_hz > 0.0) {
            return Err(Error::invalid(format!("sampling frequency must be positive, got {freq_hz}")));
        }
        Ok(Self { samples, freq_hz })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn freq_hz(&self) -> f64 {
        self.freq_hz
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.freq_hz
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingSpec {
    pub t_origin: f64,
    pub length: usize,
    pub freq_hz: f64,
    /// Noise is uniform on `[−noise_bound, noise_bound]`.
    pub noise_bound: f64,
    pub seed: u64,
}

/// `−1.5 sin πt + 2 sin(2πt/3)`, period 6.
pub fn synth_signal(t: f64) -> f64 {
    -1.5 * (PI * t).sin() + 2.0 * (2.0 * PI * t / 3.0).sin()
}

/// Sup-norm of the derivative of [`synth_signal`]; attained at `t = 3`.
pub const SYNTH_SIGNAL_LIPSCHITZ: f64 = 1.5 * PI + 4.0 * PI / 3.0;

/// `samples[k−1] = signal(t_origin + k/f) + e_k` for `k = 1..=L`.
pub fn sample<F: Fn(f64) -> f64>(signal: F, spec: &SamplingSpec) -> Result<DiscreteSignal> {
    if spec.length == 0 {
        return Err(Error::invalid("sample length must be positive"));
    }
    if !(spec.noise_bound >= 0.0 && spec.noise_bound.is_finite()) {
        return Err(Error::invalid(format!("noise bound must be nonnegative, got {}", spec.noise_bound)));
    }
    let mut g = rng(spec.seed);
    let delta = spec.noise_bound;
    let samples = (1..=spec.length)
        .map(|k| {
            let clean = signal(spec.t_origin + k as f64 / spec.freq_hz);
            if delta > 0.0 {
                clean + g.gen_range(-delta..=delta)
            } else {
                clean
            }
        })
        .collect();
    DiscreteSignal::new(samples, spec.freq_hz)
}

/// One biquad `b0 + b1 z⁻¹ + b2 z⁻²` over `1 + a1 z⁻¹ + a2 z⁻²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Biquad {
    pub b: [f64; 3],
    pub a: [f64; 3],
}

impl Biquad {
    fn dc_gain(&self) -> f64 {
        self.b.iter().sum::<f64>() / self.a.iter().sum::<f64>()
    }

    /// Transposed direct-form II state for a unit step in steady state.
    fn step_state(&self) -> [f64; 2] {
        let g = self.dc_gain();
        let z2 = self.b[2] - self.a[2] * g;
        [self.b[1] - self.a[1] * g + z2, z2]
    }

    pub fn response(&self, omega: f64) -> Complex64 {
        let z1 = Complex64::from_polar(1.0, -omega);
        let z2 = z1 * z1;
        (self.b[0] + self.b[1] * z1 + self.b[2] * z2) / (self.a[0] + self.a[1] * z1 + self.a[2] * z2)
    }
}

/// Cascade of second-order sections.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sos {
    pub sections: Vec<Biquad>,
}

impl Sos {
    /// Frequency response at normalized angular frequency `omega` (radians per sample).
    pub fn response(&self, omega: f64) -> Complex64 {
        self.sections.iter().map(|s| s.response(omega)).product()
    }

    fn filter(&self, x: &[f64], x0: f64) -> Vec<f64> {
        let mut y = x.to_vec();
        let mut level = x0;
        for s in &self.sections {
            let [mut z1, mut z2] = s.step_state().map(|v| v * level);
            for v in y.iter_mut() {
                let xin = *v;
                let out = s.b[0] * xin + z1;
                z1 = s.b[1] * xin - s.a[1] * out + z2;
                z2 = s.b[2] * xin - s.a[2] * out;
                *v = out;
            }
            level *= s.dc_gain();
        }
        y
    }

    /// Forward-backward application with odd-extension padding and
    /// steady-state initial conditions at both ends.
    pub fn filtfilt(&self, x: &[f64]) -> Vec<f64> {
        let n = x.len();
        if n == 0 {
            return Vec::new();
        }
        let pad = (3 * (2 * self.sections.len() + 1)).min(n - 1);
        let mut ext = Vec::with_capacity(n + 2 * pad);
        ext.extend((1..=pad).rev().map(|i| 2.0 * x[0] - x[i]));
        ext.extend_from_slice(x);
        ext.extend((1..=pad).map(|i| 2.0 * x[n - 1] - x[n - 1 - i]));
        let mut y = self.filter(&ext, ext[0]);
        y.reverse();
        let mut y = self.filter(&y, y[0]);
        y.reverse();
        y[pad..pad + n].to_vec()
    }
}

/// Digital Butterworth bandpass of total order `order` (prototype order
/// `order/2`), designed by the prewarped bilinear transform.
pub fn butterworth_bandpass(low_hz: f64, high_hz: f64, freq_hz: f64, order: usize) -> Result<Sos> {
    if order == 0 || order % 2 != 0 {
        return Err(Error::invalid(format!("bandpass order must be a positive even integer, got {order}")));
    }
    if !(low_hz > 0.0 && low_hz < high_hz && high_hz < freq_hz / 2.0) {
        return Err(Error::InvalidBand { low_hz, high_hz, freq_hz });
    }
    let n = order / 2;
    let k = 2.0 * freq_hz;
    let w1 = k * (PI * low_hz / freq_hz).tan();
    let w2 = k * (PI * high_hz / freq_hz).tan();
    let bw = w2 - w1;
    let w0sq = w1 * w2;

    let mut analog = Vec::with_capacity(2 * n);
    for j in 0..n {
        let p = Complex64::from_polar(1.0, PI * (2 * j + n + 1) as f64 / (2 * n) as f64);
        let pb = p * bw;
        let disc = (pb * pb - 4.0 * w0sq).sqrt();
        analog.push((pb + disc) / 2.0);
        analog.push((pb - disc) / 2.0);
    }
    let mut gain = Complex64::new((bw * k).powi(n as i32), 0.0);
    let mut digital: Vec<Complex64> = Vec::with_capacity(2 * n);
    for s in &analog {
        gain /= k - s;
        digital.push((k + s) / (k - s));
    }

    let tol = 1e-10;
    let mut upper: Vec<Complex64> = digital.iter().copied().filter(|z| z.im > tol).collect();
    let mut real: Vec<f64> = digital.iter().filter(|z| z.im.abs() <= tol).map(|z| z.re).collect();
    upper.sort_by(|a, b| a.arg().total_cmp(&b.arg()));
    real.sort_by(f64::total_cmp);
    let mut sections: Vec<Biquad> =
        upper.iter().map(|z| Biquad { b: [1.0, 0.0, -1.0], a: [1.0, -2.0 * z.re, z.norm_sqr()] }).collect();
    for pair in real.chunks(2) {
        let (r1, r2) = (pair[0], pair.get(1).copied().unwrap_or(0.0));
        sections.push(Biquad { b: [1.0, 0.0, -1.0], a: [1.0, -(r1 + r2), r1 * r2] });
    }
    debug_assert_eq!(sections.len(), n);
    for b in sections[0].b.iter_mut() {
        *b *= gain.re;
    }
    Ok(Sos { sections })
}

/// Zero-phase Butterworth bandpass.
pub fn bandpass(signal: &DiscreteSignal, low_hz: f64, high_hz: f64, order: usize) -> Result<DiscreteSignal> {
    let sos = butterworth_bandpass(low_hz, high_hz, signal.freq_hz, order)?;
    DiscreteSignal::new(sos.filtfilt(&signal.samples), signal.freq_hz)
}

/// Linear interpolation onto the grid `k/new_freq_hz` covering the original span.
pub fn resample(signal: &DiscreteSignal, new_freq_hz: f64) -> Result<DiscreteSignal> {
    if !(new_freq_hz.is_finite() && new_freq_hz > 0.0) {
        return Err(Error::invalid(format!("resample frequency must be positive, got {new_freq_hz}")));
    }
    let s = &signal.samples;
    let ratio = signal.freq_hz / new_freq_hz;
    if ratio == 1.0 {
        return Ok(signal.clone());
    }
    let last = (s.len() - 1) as f64;
    let count = (last / ratio + 1e-9).floor() as usize + 1;
    let out = (0..count)
        .map(|k| {
            let pos = (k as f64 * ratio).min(last);
            let i = pos.floor() as usize;
            let frac = pos - i as f64;
            if i + 1 < s.len() {
                s[i] + frac * (s[i + 1] - s[i])
            } else {
                s[i]
            }
        })
        .collect();
    DiscreteSignal::new(out, new_freq_hz)
}

/// Non-overlapping windows of `round(duration_s·freq)` samples; the remainder is dropped.
pub fn blind_segment(signal: &DiscreteSignal, duration_s: f64) -> Result<Vec<DiscreteSignal>> {
    let width = (duration_s * signal.freq_hz + 0.5).floor();
    if width.is_nan() || width < 1.0 {
        return Err(Error::invalid(format!("segment of {duration_s} s holds no samples")));
    }
    signal.samples.chunks_exact(width as usize).map(|c| DiscreteSignal::new(c.to_vec(), signal.freq_hz)).collect()
}
