//! Brute-force diversifier by enumerating candidate supports.
//!
//! At the optimum the support `S` satisfies `Z_SS w_S = 1` with `w_S ≥ 0`,
//! and every index has `(Zw)_i ≥ 1`. Enumerating all `2ⁿ − 1` supports and
//! keeping those that pass both checks recovers the unique KKT point without
//! sharing any code path with the active-set solver beyond the factorization.

use super::{kkt_residual, MagnitudeResult, SolverConfig, WeightKind, WeightVector};
use crate::error::{Error, Result};
use crate::linalg::Cholesky;
use crate::metric::{check_scale, dedup, kernel_matrix, PointCloud};

pub const ORACLE_MAX_POINTS: usize = 15;
const DUAL_SLACK: f64 = 1e-10;

pub fn diversifier_oracle(cloud: &PointCloud, scale: f64) -> Result<MagnitudeResult> {
    check_scale(scale)?;
    let cfg = SolverConfig::default();
    let clean = dedup(cloud, cfg.dedup_tol);
    let n = clean.len();
    if n > ORACLE_MAX_POINTS {
        return Err(Error::TooLarge { n, max: ORACLE_MAX_POINTS });
    }
    let z = kernel_matrix(&clean, scale);

    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut visited = 0;
    for mask in 1u32..(1 << n) {
        visited += 1;
        let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let Ok(chol) = Cholesky::factor_subset(&z, &idx) else { continue };
        let ones = vec![1.0; idx.len()];
        let ws = chol.solve_refined(&z, &idx, &ones);
        if ws.iter().any(|&v| v < 0.0) {
            continue;
        }
        let mut w = vec![0.0; n];
        for (&i, &v) in idx.iter().zip(&ws) {
            w[i] = v;
        }
        let zw = z.mul_vec(&w);
        if zw.iter().any(|&v| v < 1.0 - DUAL_SLACK) {
            continue;
        }
        // Every survivor is a KKT point up to rounding; keep the lowest objective −½Σw.
        let total: f64 = w.iter().sum();
        if best.as_ref().map_or(true, |(t, _)| total > *t) {
            best = Some((total, w));
        }
    }
    let (value, coeffs) = best.expect("singleton supports always satisfy the checks");
    let residual = kkt_residual(&z, &coeffs);
    Ok(MagnitudeResult {
        value,
        weights: WeightVector::new(clean, coeffs, WeightKind::Diversifier)?,
        residual,
        iterations: visited,
        removed_duplicates: cloud.len() - n,
        warnings: Vec::new(),
    })
}
