//! The synthetic convergence study for weighting and diversifier integrals,
//! a multi-class identification analogue, and the small classifiers it uses.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::features::{
    downsample, embed, extract_features_with, fourier_integral, weight_measure, EmbeddingSpec, FeatureBasis,
    FeatureConfig,
};
use crate::magnitude::WeightKind;
use crate::seed::{child_rng, derive_seed, rng};
use crate::signal::{blind_segment, sample, synth_signal, SamplingSpec};

/// Lag, dimension and frequency used by the convergence study.
pub const CONVERGENCE_LAG_S: f64 = 0.5;
pub const CONVERGENCE_DIM: usize = 2;
pub const CONVERGENCE_XI: [f64; 2] = [1.0, -1.0];

/// The default `(f, δ)` sweep.
pub const DEFAULT_SWEEP: [(f64, f64); 3] = [(100.0, 0.4), (200.0, 0.2), (400.0, 0.1)];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceConfig {
    pub kind: WeightKind,
    pub f_hz: f64,
    pub delta: f64,
    pub n_segments: usize,
    pub seed: u64,
    /// Embedded clouds larger than this are reduced with [`downsample`]
    /// before the weighting or diversifier is solved. `None` keeps every point.
    pub max_points: Option<usize>,
}

impl ConvergenceConfig {
    pub fn new(kind: WeightKind, f_hz: f64, delta: f64, n_segments: usize, seed: u64) -> Self {
        Self { kind, f_hz, delta, n_segments, seed, max_points: Some(DEFAULT_MAX_POINTS) }
    }
}

pub const DEFAULT_MAX_POINTS: usize = 400;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRun {
    pub kind: WeightKind,
    pub f_hz: f64,
    pub delta: f64,
    pub n_segments: usize,
    /// Mean of the real part across segments.
    pub mean: f64,
    /// Sample standard deviation of the real part across segments.
    pub std: f64,
    pub integrals: Vec<Complex64>,
}

fn mean_std(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

pub fn run_convergence(
    kind: WeightKind,
    f_hz: f64,
    delta: f64,
    n_segments: usize,
    seed: u64,
) -> Result<ConvergenceRun> {
    run_convergence_with(&ConvergenceConfig::new(kind, f_hz, delta, n_segments, seed))
}

pub fn run_convergence_with(cfg: &ConvergenceConfig) -> Result<ConvergenceRun> {
    if cfg.n_segments < 2 {
        return Err(Error::invalid("convergence runs need at least two segments"));
    }
    let spec = EmbeddingSpec { lag_s: CONVERGENCE_LAG_S, dim: CONVERGENCE_DIM };
    spec.lag_samples(cfg.f_hz)?;
    let mut integrals = Vec::with_capacity(cfg.n_segments);
    for i in 0..cfg.n_segments {
        let mut g = child_rng(cfg.seed, &format!("segment-{i}"));
        let t_origin = g.gen_range(0.0..6.0);
        let duration = g.gen_range(7.0..=12.0);
        let sampling = SamplingSpec {
            t_origin,
            length: (duration * cfg.f_hz).round() as usize,
            freq_hz: cfg.f_hz,
            noise_bound: cfg.delta,
            seed: g.gen(),
        };
        let mut cloud = embed(&sample(synth_signal, &sampling)?, &spec)?;
        if cfg.kind != WeightKind::Uniform {
            if let Some(cap) = cfg.max_points.filter(|&cap| cloud.len() > cap) {
                cloud = downsample(&cloud, cloud.len() - cap)?;
            }
        }
        let w = weight_measure(&cloud, cfg.kind, 1.0)?;
        integrals.push(fourier_integral(&w, &CONVERGENCE_XI)?);
    }
    let re: Vec<f64> = integrals.iter().map(|z| z.re).collect();
    let (mean, std) = mean_std(&re);
    Ok(ConvergenceRun {
        kind: cfg.kind,
        f_hz: cfg.f_hz,
        delta: cfg.delta,
        n_segments: cfg.n_segments,
        mean,
        std,
        integrals,
    })
}

/// Bootstrap estimate of the standard error of the sample standard deviation.
pub fn bootstrap_std_error(values: &[f64], reps: usize, seed: u64) -> f64 {
    let mut g = rng(seed);
    let n = values.len();
    let stds: Vec<f64> = (0..reps)
        .map(|_| {
            let resample: Vec<f64> = (0..n).map(|_| values[g.gen_range(0..n)]).collect();
            mean_std(&resample).1
        })
        .collect();
    mean_std(&stds).1
}

/// Row-major feature matrix.
pub type Matrix = Vec<Vec<f64>>;

/// Column statistics of `train` applied to `train` and every matrix in `others`.
/// Constant columns map to zero.
pub fn standardize(train: &[Vec<f64>], others: &[&[Vec<f64>]]) -> Result<(Matrix, Vec<Matrix>)> {
    let n = train.len();
    if n == 0 {
        return Err(Error::invalid("cannot standardize an empty training set"));
    }
    let d = train[0].len();
    let mut mean = vec![0.0; d];
    for row in train {
        if row.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: row.len() });
        }
        for (m, v) in mean.iter_mut().zip(row) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n as f64);
    let mut std = vec![0.0; d];
    for row in train {
        for ((s, v), m) in std.iter_mut().zip(row).zip(&mean) {
            *s += (v - m).powi(2) / n as f64;
        }
    }
    // Spread at rounding level counts as constant.
    let std: Vec<f64> =
        std.into_iter().zip(&mean).map(|(v, m)| if v.sqrt() <= 1e-12 * m.abs() { 0.0 } else { v.sqrt() }).collect();
    let apply = |m: &[Vec<f64>]| -> Result<Matrix> {
        m.iter()
            .map(|row| {
                if row.len() != d {
                    return Err(Error::DimensionMismatch { expected: d, found: row.len() });
                }
                Ok(row
                    .iter()
                    .zip(&mean)
                    .zip(&std)
                    .map(|((v, mu), s)| if *s > 0.0 { (v - mu) / s } else { 0.0 })
                    .collect())
            })
            .collect()
    };
    let t = apply(train)?;
    let rest = others.iter().map(|m| apply(m)).collect::<Result<_>>()?;
    Ok((t, rest))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KnnWeighting {
    Uniform,
    Distance,
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum()
}

fn argmax_label(votes: &[f64]) -> usize {
    let mut best = 0;
    for (l, &v) in votes.iter().enumerate() {
        if v > votes[best] {
            best = l;
        }
    }
    best
}

/// Euclidean k-nearest-neighbour vote. Ties go to the smallest label.
pub fn knn_classify(
    train_x: &[Vec<f64>],
    train_y: &[usize],
    test_x: &[Vec<f64>],
    k: usize,
    weighting: KnnWeighting,
) -> Result<Vec<usize>> {
    if train_x.len() != train_y.len() {
        return Err(Error::invalid("training features and labels differ in length"));
    }
    if k == 0 || k > train_x.len() {
        return Err(Error::invalid(format!("k = {k} must lie in 1..={}", train_x.len())));
    }
    let n_labels = train_y.iter().max().map_or(0, |m| m + 1);
    Ok(test_x
        .iter()
        .map(|q| {
            let mut d: Vec<(f64, usize)> = train_x.iter().map(|x| sq_dist(x, q)).zip(train_y.iter().copied()).collect();
            d.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let near = &d[..k];
            let mut votes = vec![0.0; n_labels];
            match weighting {
                KnnWeighting::Uniform => near.iter().for_each(|&(_, l)| votes[l] += 1.0),
                KnnWeighting::Distance if near[0].0 == 0.0 => {
                    near.iter().filter(|(dd, _)| *dd == 0.0).for_each(|&(_, l)| votes[l] += 1.0)
                }
                KnnWeighting::Distance => near.iter().for_each(|&(dd, l)| votes[l] += 1.0 / dd.sqrt()),
            }
            argmax_label(&votes)
        })
        .collect())
}

/// Multinomial logistic regression parameters: one weight row and bias per class.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Logit {
    pub w: Matrix,
    pub b: Vec<f64>,
}

fn softmax_rows(model: &Logit, x: &[Vec<f64>]) -> Matrix {
    x.iter()
        .map(|row| {
            let logits: Vec<f64> = model
                .w
                .iter()
                .zip(&model.b)
                .map(|(wc, bc)| bc + wc.iter().zip(row).map(|(a, b)| a * b).sum::<f64>())
                .collect();
            let top = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let exps: Vec<f64> = logits.iter().map(|l| (l - top).exp()).collect();
            let total: f64 = exps.iter().sum();
            exps.into_iter().map(|e| e / total).collect()
        })
        .collect()
}

/// Mean cross-entropy plus `l2/2 ‖W‖²`, and its gradient.
pub(crate) fn logit_loss_grad(model: &Logit, x: &[Vec<f64>], y: &[usize], l2: f64) -> (f64, Logit) {
    let n = x.len() as f64;
    let probs = softmax_rows(model, x);
    let mut gw: Matrix = model.w.iter().map(|r| r.iter().map(|v| l2 * v).collect()).collect();
    let mut gb = vec![0.0; model.b.len()];
    let mut loss = 0.5 * l2 * model.w.iter().flatten().map(|v| v * v).sum::<f64>();
    for ((row, p), &label) in x.iter().zip(&probs).zip(y) {
        loss -= p[label].max(f64::MIN_POSITIVE).ln() / n;
        for (c, pc) in p.iter().enumerate() {
            let r = (pc - if c == label { 1.0 } else { 0.0 }) / n;
            gb[c] += r;
            for (g, v) in gw[c].iter_mut().zip(row) {
                *g += r * v;
            }
        }
    }
    (loss, Logit { w: gw, b: gb })
}

/// Full-batch gradient descent from zero on mean cross-entropy with an L2
/// penalty `l2/2 ‖W‖²` (biases unpenalized).
pub fn logreg_fit_predict(
    train_x: &[Vec<f64>],
    train_y: &[usize],
    test_x: &[Vec<f64>],
    l2: f64,
    epochs: usize,
    lr: f64,
) -> Result<Vec<usize>> {
    if train_x.is_empty() || train_x.len() != train_y.len() {
        return Err(Error::invalid("training features and labels must be nonempty and equal in length"));
    }
    let n_labels = train_y.iter().max().map_or(0, |m| m + 1);
    let d = train_x[0].len();
    let mut model = Logit { w: vec![vec![0.0; d]; n_labels], b: vec![0.0; n_labels] };
    for epoch in 0..epochs {
        let (loss, grad) = logit_loss_grad(&model, train_x, train_y, l2);
        if !loss.is_finite() {
            return Err(Error::NonFinite { epoch });
        }
        for (wr, gr) in model.w.iter_mut().zip(&grad.w) {
            for (w, g) in wr.iter_mut().zip(gr) {
                *w -= lr * g;
            }
        }
        for (b, g) in model.b.iter_mut().zip(&grad.b) {
            *b -= lr * g;
        }
        if model.w.iter().flatten().chain(&model.b).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { epoch });
        }
    }
    Ok(softmax_rows(&model, test_x).iter().map(|p| argmax_label(p)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum Model {
    Knn { k: usize, weighting: KnnWeighting },
    Logreg { c: f64, epochs: usize, lr: f64 },
}

impl Default for Model {
    fn default() -> Self {
        Model::Knn { k: 5, weighting: KnnWeighting::Distance }
    }
}

impl Model {
    pub fn logreg_default() -> Self {
        Model::Logreg { c: 1.0, epochs: 500, lr: 0.1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentificationConfig {
    pub n_classes: usize,
    pub segments_per_class: usize,
    pub model: Model,
    pub seed: u64,
    pub freq_hz: f64,
    pub segment_s: f64,
    pub noise_bound: f64,
    pub embedding: EmbeddingSpec,
    pub features: FeatureConfig,
}

impl IdentificationConfig {
    pub fn new(n_classes: usize, segments_per_class: usize, kind: WeightKind, seed: u64) -> Self {
        Self {
            n_classes,
            segments_per_class,
            model: Model::default(),
            seed,
            freq_hz: 250.0,
            segment_s: 2.0,
            noise_bound: 0.2,
            embedding: EmbeddingSpec { lag_s: 0.02, dim: 3 },
            features: FeatureConfig { kind, seed: derive_seed(seed, "features"), ..FeatureConfig::default() },
        }
    }
}

/// Amplitudes and periods of one synthetic class `a₁ sin(2πt/T₁) + a₂ sin(2πt/T₂)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassSignal {
    pub amplitudes: [f64; 2],
    pub periods: [f64; 2],
}

impl ClassSignal {
    /// Fundamental period uniform in `[1, 1.5]` s with its second harmonic, so
    /// both periods lie in `[0.5, 1.5]` s and the sum is periodic.
    pub fn draw<R: Rng + ?Sized>(g: &mut R) -> Self {
        let t1 = g.gen_range(1.0..=1.5);
        Self { amplitudes: [g.gen_range(1.0..=2.5), g.gen_range(1.0..=2.5)], periods: [t1, t1 / 2.0] }
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.amplitudes.iter().zip(&self.periods).map(|(a, p)| a * (2.0 * PI * t / p).sin()).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierReport {
    pub model: Model,
    pub feature_kind: WeightKind,
    pub accuracy: f64,
    pub n_train: usize,
    pub n_validation: usize,
    pub n_test: usize,
    pub classes: Vec<ClassSignal>,
}

pub fn run_identification(
    n_classes: usize,
    segments_per_class: usize,
    kind: WeightKind,
    seed: u64,
) -> Result<ClassifierReport> {
    run_identification_with(&IdentificationConfig::new(n_classes, segments_per_class, kind, seed))
}

/// Each class is one long noisy recording cut into blind segments; the first
/// 60% of each class's segments train, the next 20% validate, the last 20% test.
pub fn run_identification_with(cfg: &IdentificationConfig) -> Result<ClassifierReport> {
    if cfg.n_classes < 2 {
        return Err(Error::invalid(format!("identification needs at least two classes, got {}", cfg.n_classes)));
    }
    if cfg.segments_per_class < 5 {
        return Err(Error::invalid("each class needs at least five segments to split 60/20/20"));
    }
    let basis = FeatureBasis::new(cfg.embedding.dim, &cfg.features);
    let n_train = cfg.segments_per_class * 3 / 5;
    let n_val = cfg.segments_per_class / 5;
    let (mut train_x, mut train_y, mut test_x, mut test_y) = (vec![], vec![], vec![], vec![]);
    let mut classes = Vec::with_capacity(cfg.n_classes);
    for c in 0..cfg.n_classes {
        let mut g = child_rng(cfg.seed, &format!("class-{c}"));
        let class = ClassSignal::draw(&mut g);
        classes.push(class);
        let width = (cfg.segment_s * cfg.freq_hz + 0.5).floor() as usize;
        let spec = SamplingSpec {
            t_origin: g.gen_range(0.0..10.0),
            length: width * cfg.segments_per_class,
            freq_hz: cfg.freq_hz,
            noise_bound: cfg.noise_bound,
            seed: g.gen(),
        };
        let recording = sample(|t| class.eval(t), &spec)?;
        for (i, seg) in blind_segment(&recording, cfg.segment_s)?.iter().enumerate() {
            if i >= n_train && i < n_train + n_val {
                continue;
            }
            let values = extract_features_with(seg, &cfg.embedding, &cfg.features, &basis)?.values;
            if i < n_train {
                train_x.push(values);
                train_y.push(c);
            } else {
                test_x.push(values);
                test_y.push(c);
            }
        }
    }
    let (train_x, rest) = standardize(&train_x, &[&test_x])?;
    let test_x = &rest[0];
    let pred = match cfg.model {
        Model::Knn { k, weighting } => knn_classify(&train_x, &train_y, test_x, k, weighting)?,
        Model::Logreg { c, epochs, lr } => {
            logreg_fit_predict(&train_x, &train_y, test_x, 1.0 / (c * train_x.len() as f64), epochs, lr)?
        }
    };
    let correct = pred.iter().zip(&test_y).filter(|(p, y)| p == y).count();
    Ok(ClassifierReport {
        model: cfg.model,
        feature_kind: cfg.features.kind,
        accuracy: correct as f64 / test_y.len() as f64,
        n_train: train_y.len(),
        n_validation: n_val * cfg.n_classes,
        n_test: test_y.len(),
        classes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets::gaussian_blob;

    fn blobs(seed: u64, per: usize, sep: f64) -> (Matrix, Vec<usize>) {
        let mut g = rng(seed);
        let mut x = gaussian_blob(&mut g, per, &[0.0, 0.0], 1.0);
        x.extend(gaussian_blob(&mut g, per, &[sep, 0.0], 1.0));
        let y = (0..2 * per).map(|i| i / per).collect();
        (x, y)
    }

    #[test]
    fn standardize_examples() {
        let mut g = rng(1);
        let m: Matrix = (0..30).map(|_| vec![g.gen_range(-5.0..5.0), 3.0, g.gen_range(0.0..100.0)]).collect();
        let (t, rest) = standardize(&m, &[&m]).unwrap();
        assert_eq!(t, rest[0]);
        for j in 0..3 {
            let col: Vec<f64> = t.iter().map(|r| r[j]).collect();
            let mean = col.iter().sum::<f64>() / 30.0;
            let var = col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 30.0;
            assert!(mean.abs() < 1e-10);
            if j == 1 {
                assert!(col.iter().all(|v| *v == 0.0));
            } else {
                assert!((var.sqrt() - 1.0).abs() < 1e-10);
            }
        }
        let mu = m.iter().map(|r| r[0]).sum::<f64>() / 30.0;
        let sd = (m.iter().map(|r| (r[0] - mu).powi(2)).sum::<f64>() / 30.0).sqrt();
        assert!((t[7][0] - (m[7][0] - mu) / sd).abs() < 1e-12);
        let (again, _) = standardize(&t, &[]).unwrap();
        for (a, b) in again.iter().flatten().zip(t.iter().flatten()) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn knn_examples() {
        let (x, y) = blobs(2, 20, 10.0);
        let (tx, ty) = blobs(3, 10, 10.0);
        for w in [KnnWeighting::Uniform, KnnWeighting::Distance] {
            assert_eq!(knn_classify(&x, &y, &tx, 5, w).unwrap(), ty);
            assert_eq!(knn_classify(&x, &y, &[x[25].clone()], 1, w).unwrap(), vec![1]);
        }
        let skewed: Vec<usize> = (0..40).map(|i| usize::from(i >= 15)).collect();
        assert!(knn_classify(&x, &skewed, &tx, 40, KnnWeighting::Uniform).unwrap().iter().all(|&p| p == 1));
        assert!(knn_classify(&x, &y, &tx, 41, KnnWeighting::Uniform).is_err());
    }

    #[test]
    fn knn_tie_goes_to_smallest_label() {
        let x = vec![vec![-1.0], vec![1.0]];
        assert_eq!(knn_classify(&x, &[1, 0], &[vec![0.0]], 2, KnnWeighting::Distance).unwrap(), vec![0]);
    }

    #[test]
    fn logreg_examples() {
        let (x, y) = blobs(4, 20, 10.0);
        let (tx, ty) = blobs(5, 10, 10.0);
        let (x, rest) = standardize(&x, &[&tx]).unwrap();
        assert_eq!(logreg_fit_predict(&x, &y, &rest[0], 0.01, 300, 0.5).unwrap(), ty);
        let zeros = vec![0; 40];
        assert!(logreg_fit_predict(&x, &zeros, &rest[0], 0.01, 50, 0.5).unwrap().iter().all(|&p| p == 0));
        let huge: Matrix = x.iter().map(|r| r.iter().map(|v| v * 1e150).collect()).collect();
        assert!(matches!(logreg_fit_predict(&huge, &y, &rest[0], 0.0, 50, 1e150), Err(Error::NonFinite { .. })));
    }

    #[test]
    fn logreg_gradient_matches_finite_differences() {
        let mut g = rng(6);
        let x: Matrix = (0..12).map(|_| (0..4).map(|_| g.gen_range(-1.0..1.0)).collect()).collect();
        let y: Vec<usize> = (0..12).map(|i| i % 3).collect();
        let l2 = 0.3;
        for start in [0.0, 0.2] {
            let model = Logit {
                w: (0..3).map(|c| (0..4).map(|j| start * ((c * 4 + j) as f64).sin()).collect()).collect(),
                b: vec![start, -start, 0.5 * start],
            };
            let (_, grad) = logit_loss_grad(&model, &x, &y, l2);
            let h = 1e-6;
            for c in 0..3 {
                for j in 0..4 {
                    let mut up = model.clone();
                    let mut dn = model.clone();
                    up.w[c][j] += h;
                    dn.w[c][j] -= h;
                    let fd = (logit_loss_grad(&up, &x, &y, l2).0 - logit_loss_grad(&dn, &x, &y, l2).0) / (2.0 * h);
                    assert!((fd - grad.w[c][j]).abs() < 1e-6);
                }
                let mut up = model.clone();
                let mut dn = model.clone();
                up.b[c] += h;
                dn.b[c] -= h;
                let fd = (logit_loss_grad(&up, &x, &y, l2).0 - logit_loss_grad(&dn, &x, &y, l2).0) / (2.0 * h);
                assert!((fd - grad.b[c]).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn classifiers_are_label_permutation_equivariant() {
        let mut g = rng(7);
        let mut x = Vec::new();
        let mut y = Vec::new();
        for c in 0..3 {
            for row in gaussian_blob(&mut g, 15, &[2.0 * c as f64, (c % 2) as f64], 1.0) {
                x.push(row);
                y.push(c);
            }
        }
        let tx: Matrix = (0..20).map(|_| vec![g.gen_range(-1.0..5.0), g.gen_range(-1.0..2.0)]).collect();
        let perm = [2, 0, 1];
        let py: Vec<usize> = y.iter().map(|&l| perm[l]).collect();
        for (k, w) in [(1, KnnWeighting::Uniform), (4, KnnWeighting::Distance)] {
            let a = knn_classify(&x, &y, &tx, k, w).unwrap();
            let b = knn_classify(&x, &py, &tx, k, w).unwrap();
            assert_eq!(a.iter().map(|&l| perm[l]).collect::<Vec<_>>(), b);
        }
        let a = logreg_fit_predict(&x, &y, &tx, 0.01, 200, 0.5).unwrap();
        let b = logreg_fit_predict(&x, &py, &tx, 0.01, 200, 0.5).unwrap();
        assert_eq!(a.iter().map(|&l| perm[l]).collect::<Vec<_>>(), b);
    }

    #[test]
    fn convergence_is_deterministic() {
        let a = run_convergence(WeightKind::Weighting, 20.0, 0.1, 4, 1).unwrap();
        assert_eq!(a, run_convergence(WeightKind::Weighting, 20.0, 0.1, 4, 1).unwrap());
        assert_eq!(a.integrals.len(), 4);
        assert!(run_convergence(WeightKind::Uniform, 20.0, 0.1, 1, 1).is_err());
        assert!(run_convergence(WeightKind::Uniform, 3.0, 0.1, 4, 1).is_err());
    }

    #[test]
    fn bootstrap_error_of_constant_sample_is_zero() {
        assert_eq!(bootstrap_std_error(&[2.0; 10], 50, 1), 0.0);
        assert!(bootstrap_std_error(&[1.0, 2.0, 3.0, 9.0], 50, 1) > 0.0);
    }

    #[test]
    fn identification_rejects_single_class() {
        assert!(run_identification(1, 20, WeightKind::Weighting, 0).is_err());
    }
}
