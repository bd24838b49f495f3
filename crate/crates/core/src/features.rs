//! Time-delay embedding, pairwise downsampling, Fourier transforms of weight
//! measures and landmark distance features.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::magnitude::{diversifier, weighting, WeightKind, WeightVector};
use crate::metric::{euclidean, PointCloud};
use crate::seed::{child_rng, derive_seed, rng};
use crate::signal::DiscreteSignal;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingSpec {
    pub lag_s: f64,
    pub dim: usize,
}

impl EmbeddingSpec {
    /// The lag in samples, `freq·lag_s`, which must be a positive integer.
    pub fn lag_samples(&self, freq_hz: f64) -> Result<usize> {
        let steps = freq_hz * self.lag_s;
        let rounded = steps.round();
        if self.dim == 0 || rounded < 1.0 || (steps - rounded).abs() > 1e-9 * rounded.max(1.0) {
            return Err(Error::invalid(format!(
                "lag {} s at {freq_hz} Hz is not a positive whole number of samples (dimension {})",
                self.lag_s, self.dim
            )));
        }
        Ok(rounded as usize)
    }
}

/// Point `k` is `(s_k, s_{k+fτ}, …, s_{k+(d−1)fτ})`.
pub fn embed(signal: &DiscreteSignal, spec: &EmbeddingSpec) -> Result<PointCloud> {
    let step = spec.lag_samples(signal.freq_hz())?;
    let s = signal.samples();
    let shrink = (spec.dim - 1) * step;
    if s.len() <= shrink {
        return Err(Error::TooShort { len: s.len(), needed: shrink });
    }
    let n = s.len() - shrink;
    let mut coords = Vec::with_capacity(n * spec.dim);
    for k in 0..n {
        coords.extend((0..spec.dim).map(|j| s[k + j * step]));
    }
    PointCloud::new(spec.dim, coords)
}

/// Removes exactly `remove_count` points: pair consecutive survivors, drop the
/// later member of the `⌈k/2⌉` closest pairs, then recurse with `⌊k/2⌋`.
/// A trailing unpaired point is kept at every level.
pub fn downsample(cloud: &PointCloud, remove_count: usize) -> Result<PointCloud> {
    if remove_count >= cloud.len() {
        return Err(Error::RemoveTooMany { requested: remove_count, available: cloud.len() });
    }
    let mut keep: Vec<usize> = (0..cloud.len()).collect();
    let mut k = remove_count;
    while k > 0 {
        let take = k.div_ceil(2);
        let mut pairs: Vec<(f64, usize)> = keep
            .chunks_exact(2)
            .enumerate()
            .map(|(p, c)| (euclidean(cloud.point(c[0]), cloud.point(c[1])), p))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut drop = vec![false; keep.len()];
        for &(_, p) in &pairs[..take] {
            drop[2 * p + 1] = true;
        }
        keep = keep.into_iter().zip(drop).filter(|(_, d)| !d).map(|(i, _)| i).collect();
        k /= 2;
    }
    cloud.select(&keep)
}

/// `Σ_j c_j exp(−2πi ξ·x_j)`.
pub fn fourier_integral(w: &WeightVector, xi: &[f64]) -> Result<Complex64> {
    w.support().check_dim(xi.len())?;
    Ok(w.support()
        .points()
        .zip(w.coeffs())
        .map(|(x, c)| {
            let phase: f64 = x.iter().zip(xi).map(|(a, b)| a * b).sum();
            Complex64::from_polar(*c, -2.0 * PI * phase)
        })
        .sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LandmarkMode {
    Min,
    Max,
}

pub fn landmark_feature(cloud: &PointCloud, p: &[f64], mode: LandmarkMode) -> Result<f64> {
    cloud.check_dim(p.len())?;
    if cloud.is_empty() {
        return Err(Error::EmptyCloud);
    }
    let dists = cloud.points().map(|x| euclidean(p, x));
    Ok(match mode {
        LandmarkMode::Min => dists.fold(f64::INFINITY, f64::min),
        LandmarkMode::Max => dists.fold(0.0, f64::max),
    })
}

/// `count` points uniform in the closed ball of `radius` about the origin.
pub fn sample_ball(dim: usize, radius: f64, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut g = rng(seed);
    (0..count)
        .map(|_| {
            let dir: Vec<f64> = (0..dim).map(|_| g.sample::<f64, _>(StandardNormal)).collect();
            let norm = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
            let r = radius * g.gen::<f64>().powf(1.0 / dim as f64);
            if norm == 0.0 {
                vec![0.0; dim]
            } else {
                dir.into_iter().map(|v| (v * r / norm).clamp(-radius, radius)).collect()
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureConfig {
    pub n_fourier: usize,
    pub n_landmark: usize,
    /// Radius `R` of the ball the frequencies are drawn from.
    pub radius: f64,
    /// Radius `R'` of the ball the landmarks are drawn from.
    pub radius_prime: f64,
    pub target_points: usize,
    pub kind: WeightKind,
    pub scale: f64,
    pub seed: u64,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        Self {
            n_fourier: 512,
            n_landmark: 512,
            radius: 1.0,
            radius_prime: 1.0,
            target_points: 200,
            kind: WeightKind::Weighting,
            scale: 1.0,
            seed: 0,
        }
    }
}

/// Frequencies and landmarks shared by every segment processed under one seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureBasis {
    pub xis: Vec<Vec<f64>>,
    pub landmarks: Vec<Vec<f64>>,
    pub modes: Vec<LandmarkMode>,
}

impl FeatureBasis {
    pub fn new(dim: usize, cfg: &FeatureConfig) -> Self {
        let xis = sample_ball(dim, cfg.radius, cfg.n_fourier, derive_seed(cfg.seed, "fourier"));
        let landmarks = sample_ball(dim, cfg.radius_prime, cfg.n_landmark, derive_seed(cfg.seed, "landmark"));
        let mut coin = child_rng(cfg.seed, "landmark-mode");
        let modes = (0..cfg.n_landmark)
            .map(|_| if coin.gen_bool(0.5) { LandmarkMode::Max } else { LandmarkMode::Min })
            .collect();
        Self { xis, landmarks, modes }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureLayout {
    pub n_fourier: usize,
    pub n_landmark: usize,
    pub radius: f64,
    pub radius_prime: f64,
    pub kind: WeightKind,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub values: Vec<f64>,
    pub layout: FeatureLayout,
}

/// The weight measure of the requested kind on `cloud`.
pub fn weight_measure(cloud: &PointCloud, kind: WeightKind, scale: f64) -> Result<WeightVector> {
    Ok(match kind {
        WeightKind::Weighting => weighting(cloud, scale)?.weights,
        WeightKind::Diversifier => diversifier(cloud, scale)?.weights,
        WeightKind::Uniform => WeightVector::uniform(cloud),
    })
}

/// Embeds and, if needed, downsamples a segment to `target_points`.
pub fn segment_cloud(segment: &DiscreteSignal, spec: &EmbeddingSpec, target_points: usize) -> Result<PointCloud> {
    let cloud = embed(segment, spec)?;
    if cloud.len() > target_points {
        downsample(&cloud, cloud.len() - target_points)
    } else {
        Ok(cloud)
    }
}

pub fn extract_features(segment: &DiscreteSignal, spec: &EmbeddingSpec, cfg: &FeatureConfig) -> Result<FeatureVector> {
    extract_features_with(segment, spec, cfg, &FeatureBasis::new(spec.dim, cfg))
}

/// As [`extract_features`] with a precomputed basis.
pub fn extract_features_with(
    segment: &DiscreteSignal,
    spec: &EmbeddingSpec,
    cfg: &FeatureConfig,
    basis: &FeatureBasis,
) -> Result<FeatureVector> {
    let cloud = segment_cloud(segment, spec, cfg.target_points)?;
    let w = weight_measure(&cloud, cfg.kind, cfg.scale)?;
    let mut values = Vec::with_capacity(basis.xis.len() + basis.landmarks.len());
    for xi in &basis.xis {
        values.push(fourier_integral(&w, xi)?.norm());
    }
    for (p, &mode) in basis.landmarks.iter().zip(&basis.modes) {
        values.push(landmark_feature(&cloud, p, mode)?);
    }
    Ok(FeatureVector {
        values,
        layout: FeatureLayout {
            n_fourier: basis.xis.len(),
            n_landmark: basis.landmarks.len(),
            radius: cfg.radius,
            radius_prime: cfg.radius_prime,
            kind: cfg.kind,
            seed: cfg.seed,
        },
    })
}
