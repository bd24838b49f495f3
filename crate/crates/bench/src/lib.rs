//! Seeded inputs shared by the benchmarks.

use magnitude_core::datasets::uniform_cloud;
use magnitude_core::seed::child_rng;
use magnitude_core::signal::{sample, DiscreteSignal, SamplingSpec};
use magnitude_core::PointCloud;

/// `n` uniform points in the unit square, dense enough that the weighting
/// has negative coefficients for `n` beyond a few dozen.
pub fn square_cloud(n: usize) -> PointCloud {
    uniform_cloud(&mut child_rng(1, &format!("bench-{n}")), n, 2, 1.0)
}

/// Two seconds of a two-tone signal at 250 Hz.
pub fn segment() -> DiscreteSignal {
    let spec = SamplingSpec { t_origin: 0.0, length: 500, freq_hz: 250.0, noise_bound: 0.1, seed: 2 };
    let tau = std::f64::consts::TAU;
    sample(|t| 2.0 * (tau * t / 1.2).sin() + 1.5 * (tau * t / 0.6).sin(), &spec).expect("valid spec")
}
