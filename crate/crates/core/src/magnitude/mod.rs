//! Weighting, magnitude, diversifier and maximum diversity of finite point clouds.
//!
//! The weighting `w` solves `Z w = 1` and the magnitude is `Σ w`. The
//! diversifier is the minimizer of `½ wᵀZw − Σ w` over `w ≥ 0`; its total mass
//! is the maximum diversity. Both are normalized so that `Σ w = wᵀ Z w`.

mod active_set;
mod oracle;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::SymMatrix;
use crate::metric::{check_scale, dedup, euclidean, similarity_matrix, PointCloud, DEDUP_TOL};

pub use oracle::{diversifier_oracle, ORACLE_MAX_POINTS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightKind {
    Weighting,
    Diversifier,
    /// Uniform probability measure, the baseline the other two are compared against.
    Uniform,
}

/// A signed measure with finite support: one coefficient per point of `support`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightVector {
    support: PointCloud,
    coeffs: Vec<f64>,
    kind: WeightKind,
}

impl WeightVector {
    pub fn new(support: PointCloud, coeffs: Vec<f64>, kind: WeightKind) -> Result<Self> {
        if coeffs.len() != support.len() {
            return Err(Error::invalid(format!(
                "{} coefficients for a support of {} points",
                coeffs.len(),
                support.len()
            )));
        }
        Ok(Self { support, coeffs, kind })
    }

    /// The uniform probability measure on `cloud`.
    pub fn uniform(cloud: &PointCloud) -> Self {
        let n = cloud.len();
        Self { support: cloud.clone(), coeffs: vec![1.0 / n as f64; n], kind: WeightKind::Uniform }
    }

    /// A unit Dirac mass at `point`.
    pub fn atom(point: &[f64]) -> Result<Self> {
        let support = PointCloud::new(point.len(), point.to_vec())?;
        Ok(Self { support, coeffs: vec![1.0], kind: WeightKind::Weighting })
    }

    pub fn support(&self) -> &PointCloud {
        &self.support
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.coeffs.iter().sum()
    }

    pub fn min_coeff(&self) -> f64 {
        self.coeffs.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MagnitudeResult {
    /// Magnitude (weighting) or maximum diversity (diversifier).
    pub value: f64,
    pub weights: WeightVector,
    /// Sup-norm of `Zw − 1` for the weighting, of the KKT residual for the diversifier.
    pub residual: f64,
    pub iterations: usize,
    /// Points dropped as duplicates before solving.
    pub removed_duplicates: usize,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Sup-norm tolerance on primal feasibility, dual feasibility and complementarity.
    pub tolerance: f64,
    pub dedup_tol: f64,
    /// Active-set steps allowed per point before switching to projected gradient.
    pub active_set_steps_per_point: usize,
    pub fallback_max_iterations: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { tolerance: 1e-8, dedup_tol: DEDUP_TOL, active_set_steps_per_point: 5, fallback_max_iterations: 200_000 }
    }
}

fn prepare(cloud: &PointCloud, cfg: &SolverConfig) -> (PointCloud, usize, Vec<String>) {
    let clean = dedup(cloud, cfg.dedup_tol);
    let removed = cloud.len() - clean.len();
    let mut warnings = Vec::new();
    if removed > 0 {
        warnings.push(format!("removed {removed} duplicate point(s) within {:e}", cfg.dedup_tol));
    }
    (clean, removed, warnings)
}

pub fn weighting(cloud: &PointCloud, scale: f64) -> Result<MagnitudeResult> {
    weighting_with(cloud, scale, &SolverConfig::default())
}

pub fn weighting_with(cloud: &PointCloud, scale: f64, cfg: &SolverConfig) -> Result<MagnitudeResult> {
    let (cloud, removed_duplicates, warnings) = prepare(cloud, cfg);
    let (z, chol) = similarity_matrix(&cloud, scale)?.into_parts();
    let n = z.n();
    let idx: Vec<usize> = (0..n).collect();
    let ones = vec![1.0; n];
    let coeffs = chol.solve_refined(&z, &idx, &ones);
    let residual = z.mul_vec(&coeffs).iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
    let value = coeffs.iter().sum();
    Ok(MagnitudeResult {
        value,
        weights: WeightVector { support: cloud, coeffs, kind: WeightKind::Weighting },
        residual,
        iterations: 1,
        removed_duplicates,
        warnings,
    })
}

pub fn diversifier(cloud: &PointCloud, scale: f64) -> Result<MagnitudeResult> {
    diversifier_with(cloud, scale, &SolverConfig::default())
}

pub fn diversifier_with(cloud: &PointCloud, scale: f64, cfg: &SolverConfig) -> Result<MagnitudeResult> {
    let (cloud, removed_duplicates, mut warnings) = prepare(cloud, cfg);
    let (z, chol) = similarity_matrix(&cloud, scale)?.into_parts();
    let outcome = active_set::solve(&z, chol, cfg)?;
    if outcome.used_fallback {
        warnings.push("active-set budget exhausted; finished with projected gradient".to_string());
    }
    let value = outcome.coeffs.iter().sum();
    Ok(MagnitudeResult {
        value,
        weights: WeightVector { support: cloud, coeffs: outcome.coeffs, kind: WeightKind::Diversifier },
        residual: outcome.residual,
        iterations: outcome.iterations,
        removed_duplicates,
        warnings,
    })
}

/// Residual of the complementarity system `w ≥ 0`, `Zw − 1 ≥ 0`, `w ⊥ (Zw − 1)`:
/// the sup-norm of `min(w, Zw − 1)`, which vanishes exactly at the diversifier.
pub fn kkt_residual(z: &SymMatrix, w: &[f64]) -> f64 {
    z.mul_vec(w).iter().zip(w).map(|(zw, wi)| wi.min(zw - 1.0).abs()).fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfilePoint {
    pub scale: f64,
    pub magnitude: f64,
    pub max_diversity: f64,
}

pub fn magnitude_profile(cloud: &PointCloud, scales: &[f64]) -> Result<Vec<ProfilePoint>> {
    if scales.is_empty() {
        return Err(Error::invalid("no scales given"));
    }
    scales
        .iter()
        .map(|&scale| {
            Ok(ProfilePoint {
                scale,
                magnitude: weighting(cloud, scale)?.value,
                max_diversity: diversifier(cloud, scale)?.value,
            })
        })
        .collect()
}

/// `⟨u, v⟩ = Σ_i Σ_j u_i v_j exp(−scale·d(p_i, q_j))` over the two supports.
pub fn w_inner(u: &WeightVector, v: &WeightVector, scale: f64) -> Result<f64> {
    check_scale(scale)?;
    u.support.check_dim(v.support.dim())?;
    let mut total = 0.0;
    for (p, ui) in u.support.points().zip(&u.coeffs) {
        let row: f64 = v.support.points().zip(&v.coeffs).map(|(q, vj)| vj * (-scale * euclidean(p, q)).exp()).sum();
        total += ui * row;
    }
    Ok(total)
}
