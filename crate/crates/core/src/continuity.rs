//! Hausdorff distance, the weighting-space norm between measures on different
//! supports, and executable forms of the continuity bounds for weightings,
//! diversifiers and maximum diversity.
//!
//! All bounds are evaluated in the scaled metric `scale·d`, so the Hausdorff
//! distance that enters them is `scale · hausdorff(A, B)`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::datasets::uniform_cloud;
use crate::error::{Error, Result};
use crate::magnitude::{diversifier, weighting, WeightVector};
use crate::metric::{check_scale, dedup, euclidean, PointCloud, DEDUP_TOL};
use crate::seed::{child_rng, digest};

/// Additive slack absorbing solver residuals on both sides of a bound.
pub const BOUND_SLACK: f64 = 1e-9;

/// Negative radicands smaller than this in magnitude are rounding noise.
const RADICAND_CLAMP: f64 = 1e-10;

fn directed(a: &PointCloud, b: &PointCloud) -> f64 {
    a.points().map(|p| b.points().map(|q| euclidean(p, q)).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max)
}

/// `max(max_a d(a, B), max_b d(b, A))`.
pub fn hausdorff(a: &PointCloud, b: &PointCloud) -> Result<f64> {
    a.check_dim(b.dim())?;
    Ok(directed(a, b).max(directed(b, a)))
}

/// `‖u − v‖_W`, evaluated on the merged support so coincident atoms cancel
/// before the quadratic form is formed.
pub fn w_dist(u: &WeightVector, v: &WeightVector, scale: f64) -> Result<f64> {
    check_scale(scale)?;
    u.support().check_dim(v.support().dim())?;
    let mut points: Vec<&[f64]> = u.support().points().collect();
    let mut mass: Vec<f64> = u.coeffs().to_vec();
    for (q, &vq) in v.support().points().zip(v.coeffs()) {
        match points.iter().position(|p| euclidean(p, q) <= DEDUP_TOL) {
            Some(k) => mass[k] -= vq,
            None => {
                points.push(q);
                mass.push(-vq);
            }
        }
    }
    let mut radicand = 0.0;
    for (i, (p, mi)) in points.iter().zip(&mass).enumerate() {
        if *mi == 0.0 {
            continue;
        }
        let mut row = mi * 0.5;
        for (q, mj) in points[i + 1..].iter().zip(&mass[i + 1..]) {
            row += mj * (-scale * euclidean(p, q)).exp();
        }
        radicand += 2.0 * mi * row;
    }
    if radicand >= 0.0 {
        Ok(radicand.sqrt())
    } else if radicand > -RADICAND_CLAMP {
        Ok(0.0)
    } else {
        Err(Error::NegativeRadicand { value: radicand })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
    /// `rhs − lhs`.
    pub slack: f64,
    /// The bound's precondition fails, so it asserts nothing.
    pub vacuous: bool,
    pub inputs_digest: String,
}

impl BoundReport {
    fn new(lhs: f64, rhs: f64, digest: &str) -> Self {
        Self {
            lhs,
            rhs,
            satisfied: lhs <= rhs + BOUND_SLACK,
            slack: rhs - lhs,
            vacuous: false,
            inputs_digest: digest.to_string(),
        }
    }

    fn vacuous(lhs: f64, rhs: f64, digest: &str) -> Self {
        Self { satisfied: true, vacuous: true, ..Self::new(lhs, rhs, digest) }
    }

    /// Satisfied or vacuous.
    pub fn holds(&self) -> bool {
        self.vacuous || self.satisfied
    }
}

fn pair_digest(a: &PointCloud, b: &PointCloud) -> String {
    format!("{:016x}{:016x}", digest(a.coords()), digest(b.coords()))
}

fn union(a: &PointCloud, b: &PointCloud) -> Result<PointCloud> {
    Ok(dedup(&a.concat(b)?, DEDUP_TOL))
}

fn sqrt_gap(big: f64, small: f64) -> f64 {
    (big - small).max(0.0).sqrt()
}

/// `‖w_A − w_B‖ ≤ √(|A∪B| − |A|) + √(|A∪B| − |B|)`.
pub fn check_weighting_bound(a: &PointCloud, b: &PointCloud, scale: f64) -> Result<BoundReport> {
    let wa = weighting(a, scale)?;
    let wb = weighting(b, scale)?;
    let wu = weighting(&union(a, b)?, scale)?;
    let lhs = w_dist(&wa.weights, &wb.weights, scale)?;
    let rhs = sqrt_gap(wu.value, wa.value) + sqrt_gap(wu.value, wb.value);
    Ok(BoundReport::new(lhs, rhs, &pair_digest(a, b)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiversifierBoundReport {
    /// `‖w_{A,+} − w_{B,+}‖ ≤ √(|A∪B|₊ − |A|₊) + √(|A∪B|₊ − |B|₊)`.
    pub union_form: BoundReport,
    /// `‖w_{A,+} − w_{B,+}‖ ≤ 4√2 |A∪B|₊ d_H^{1/2}`, vacuous unless `8|A∪B|₊ d_H < 1`.
    pub hausdorff_form: BoundReport,
    pub hausdorff: f64,
    pub union_max_diversity: f64,
}

impl DiversifierBoundReport {
    pub fn holds(&self) -> bool {
        self.union_form.holds() && self.hausdorff_form.holds()
    }
}

pub fn check_diversifier_bound(a: &PointCloud, b: &PointCloud, scale: f64) -> Result<DiversifierBoundReport> {
    let da = diversifier(a, scale)?;
    let db = diversifier(b, scale)?;
    let du = diversifier(&union(a, b)?, scale)?;
    let lhs = w_dist(&da.weights, &db.weights, scale)?;
    let tag = pair_digest(a, b);
    let union_rhs = sqrt_gap(du.value, da.value) + sqrt_gap(du.value, db.value);
    let dh = scale * hausdorff(a, b)?;
    let h_rhs = 4.0 * std::f64::consts::SQRT_2 * du.value * dh.sqrt();
    let hausdorff_form = if 8.0 * du.value * dh < 1.0 {
        BoundReport::new(lhs, h_rhs, &tag)
    } else {
        BoundReport::vacuous(lhs, h_rhs, &tag)
    };
    Ok(DiversifierBoundReport {
        union_form: BoundReport::new(lhs, union_rhs, &tag),
        hausdorff_form,
        hausdorff: dh,
        union_max_diversity: du.value,
    })
}

/// Two-sided check of `1 − 8|A|₊d_H ≤ |B|₊/|A|₊ ≤ 1/(1 − 8|A|₊d_H)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiversityRatioReport {
    pub ratio: f64,
    /// `lhs = 1 − 8|A|₊d_H`, `rhs = ratio`.
    pub lower: BoundReport,
    /// `lhs = ratio`, `rhs = 1/(1 − 8|A|₊d_H)`.
    pub upper: BoundReport,
    pub vacuous: bool,
}

impl DiversityRatioReport {
    pub fn holds(&self) -> bool {
        self.lower.holds() && self.upper.holds()
    }
}

pub fn check_diversity_continuity(a: &PointCloud, b: &PointCloud, scale: f64) -> Result<DiversityRatioReport> {
    let ma = diversifier(a, scale)?.value;
    let mb = diversifier(b, scale)?.value;
    let dh = scale * hausdorff(a, b)?;
    let eta = 8.0 * ma * dh;
    let ratio = mb / ma;
    let tag = pair_digest(a, b);
    let (lo, hi) = (1.0 - eta, 1.0 / (1.0 - eta));
    let vacuous = eta >= 1.0;
    let (lower, upper) = if vacuous {
        (BoundReport::vacuous(lo, ratio, &tag), BoundReport::vacuous(ratio, hi, &tag))
    } else {
        (BoundReport::new(lo, ratio, &tag), BoundReport::new(ratio, hi, &tag))
    };
    Ok(DiversityRatioReport { ratio, lower, upper, vacuous })
}

/// Regular planar grid; cell `(ix, iy)` is centered at `origin + ((ix + ½)·cell, (iy + ½)·cell)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid2 {
    pub origin: [f64; 2],
    pub cell: f64,
    pub nx: usize,
    pub ny: usize,
}

impl Grid2 {
    pub fn center(&self, ix: usize, iy: usize) -> [f64; 2] {
        [self.origin[0] + (ix as f64 + 0.5) * self.cell, self.origin[1] + (iy as f64 + 0.5) * self.cell]
    }
}

/// Convolution of a planar weight vector with the indicator of the disk of
/// radius `kernel_radius`, sampled at grid cell centers. Row-major, `ny` rows of `nx`.
pub fn smooth_weights(w: &WeightVector, grid: &Grid2, kernel_radius: f64) -> Result<Vec<f64>> {
    if w.support().dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: w.support().dim() });
    }
    let mut out = Vec::with_capacity(grid.nx * grid.ny);
    for iy in 0..grid.ny {
        for ix in 0..grid.nx {
            let c = grid.center(ix, iy);
            let v = w
                .support()
                .points()
                .zip(w.coeffs())
                .filter(|(p, _)| euclidean(p, &c) <= kernel_radius)
                .map(|(_, coeff)| coeff)
                .sum();
            out.push(v);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    WeightingBound,
    DiversifierBound,
    DiversityRatio,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairMode {
    Independent,
    Perturbed,
    Nested,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledBound {
    pub bound: String,
    #[serde(flatten)]
    pub report: BoundReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteEntry {
    pub trial: usize,
    pub mode: PairMode,
    pub dim: usize,
    pub n_a: usize,
    pub n_b: usize,
    pub hausdorff: f64,
    pub checks: Vec<LabeledBound>,
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub scale: f64,
    pub trials: usize,
    pub satisfied: usize,
    /// Checks whose precondition failed, counted over all entries.
    pub vacuous_checks: usize,
    pub entries: Vec<SuiteEntry>,
}

/// A seeded pair of clouds with at most 30 points in total, dimension 2 or 3.
pub fn random_pair<R: Rng + ?Sized>(rng: &mut R, mode: PairMode) -> (PointCloud, PointCloud) {
    let dim = rng.gen_range(2..=3);
    let side = 2.0;
    match mode {
        PairMode::Independent => {
            let na = rng.gen_range(3..=15);
            let nb = rng.gen_range(3..=15);
            (uniform_cloud(rng, na, dim, side), uniform_cloud(rng, nb, dim, side))
        }
        PairMode::Perturbed => {
            let n = rng.gen_range(3..=15);
            let a = uniform_cloud(rng, n, dim, side);
            let eps = 10f64.powf(rng.gen_range(-4.0..-2.0));
            let coords = a.coords().iter().map(|c| c + eps * rng.gen_range(-1.0..1.0)).collect();
            (a, PointCloud::new(dim, coords).expect("same shape"))
        }
        PairMode::Nested => {
            let nb = rng.gen_range(4..=30);
            let b = uniform_cloud(rng, nb, dim, side);
            let na = rng.gen_range(1..nb);
            let idx: Vec<usize> = rand::seq::index::sample(rng, nb, na).into_vec();
            (b.select(&idx).expect("nonempty subset"), b)
        }
    }
}

fn mode_for(suite: Suite, trial: usize) -> PairMode {
    match (suite, trial % 3) {
        // The ratio bound is informative only for nearby pairs.
        (Suite::DiversityRatio, 0) => PairMode::Independent,
        (Suite::DiversityRatio, _) => PairMode::Perturbed,
        (_, 0) => PairMode::Independent,
        (_, 1) => PairMode::Perturbed,
        _ => PairMode::Nested,
    }
}

pub fn run_suite(suite: Suite, trials: usize, seed: u64, scale: f64) -> Result<SuiteReport> {
    check_scale(scale)?;
    let mut entries = Vec::with_capacity(trials);
    for trial in 0..trials {
        let mut rng = child_rng(seed, &format!("pair-{trial}"));
        let mode = mode_for(suite, trial);
        let (a, b) = random_pair(&mut rng, mode);
        let checks = match suite {
            Suite::WeightingBound => {
                vec![LabeledBound { bound: "weighting-union".into(), report: check_weighting_bound(&a, &b, scale)? }]
            }
            Suite::DiversifierBound => {
                let r = check_diversifier_bound(&a, &b, scale)?;
                vec![
                    LabeledBound { bound: "diversifier-union".into(), report: r.union_form },
                    LabeledBound { bound: "diversifier-hausdorff".into(), report: r.hausdorff_form },
                ]
            }
            Suite::DiversityRatio => {
                let r = check_diversity_continuity(&a, &b, scale)?;
                vec![
                    LabeledBound { bound: "ratio-lower".into(), report: r.lower },
                    LabeledBound { bound: "ratio-upper".into(), report: r.upper },
                ]
            }
        };
        let satisfied = checks.iter().all(|c| c.report.holds());
        entries.push(SuiteEntry {
            trial,
            mode,
            dim: a.dim(),
            n_a: a.len(),
            n_b: b.len(),
            hausdorff: scale * hausdorff(&a, &b)?,
            checks,
            satisfied,
        });
    }
    Ok(SuiteReport {
        suite,
        scale,
        trials,
        satisfied: entries.iter().filter(|e| e.satisfied).count(),
        vacuous_checks: entries.iter().flat_map(|e| &e.checks).filter(|c| c.report.vacuous).count(),
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets::s_curve;
    use crate::magnitude::WeightKind;
    use crate::seed::rng;
    use crate::testutil::random_cloud;

    #[test]
    fn hausdorff_examples() {
        let a = PointCloud::from_rows(&[[0.0]]).unwrap();
        let b = PointCloud::from_rows(&[[0.0], [3.0]]).unwrap();
        assert_eq!(hausdorff(&a, &a).unwrap(), 0.0);
        assert_eq!(hausdorff(&a, &b).unwrap(), 3.0);
        let c = PointCloud::from_rows(&[[0.0, 1.0]]).unwrap();
        assert!(matches!(hausdorff(&a, &c), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn hausdorff_matches_double_loop() {
        let a = random_cloud(20, 2, 1.0, 1);
        let b = random_cloud(20, 2, 1.0, 2);
        let mut ab: f64 = 0.0;
        let mut ba: f64 = 0.0;
        for i in 0..20 {
            let mut best_a = f64::INFINITY;
            let mut best_b = f64::INFINITY;
            for j in 0..20 {
                let (p, q) = (a.point(i), b.point(j));
                best_a = best_a.min(((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt());
                let (p, q) = (b.point(i), a.point(j));
                best_b = best_b.min(((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt());
            }
            ab = ab.max(best_a);
            ba = ba.max(best_b);
        }
        assert_eq!(hausdorff(&a, &b).unwrap(), ab.max(ba));
    }

    #[test]
    fn hausdorff_is_a_metric_on_samples() {
        for seed in 0..30 {
            let a = random_cloud(8, 2, 1.0, 3 * seed);
            let b = random_cloud(11, 2, 1.0, 3 * seed + 1);
            let c = random_cloud(5, 2, 1.0, 3 * seed + 2);
            let ab = hausdorff(&a, &b).unwrap();
            assert_eq!(ab, hausdorff(&b, &a).unwrap());
            assert!(hausdorff(&a, &c).unwrap() <= ab + hausdorff(&b, &c).unwrap() + 1e-12);
        }
    }

    #[test]
    fn w_dist_of_identical_measures_is_zero() {
        let c = random_cloud(10, 3, 1.0, 4);
        let w = weighting(&c, 1.0).unwrap();
        assert_eq!(w_dist(&w.weights, &w.weights, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn w_dist_squared_between_diversifier_and_weighting() {
        let c = random_cloud(25, 2, 1.0, 5);
        let w = weighting(&c, 1.0).unwrap();
        let d = diversifier(&c, 1.0).unwrap();
        assert!(w.weights.min_coeff() < 0.0);
        let dist = w_dist(&d.weights, &w.weights, 1.0).unwrap();
        assert!((dist * dist - (w.value - d.value)).abs() < 1e-8);
    }

    #[test]
    fn identical_pair_checks() {
        let a = random_cloud(9, 2, 2.0, 6);
        let r = check_weighting_bound(&a, &a, 1.0).unwrap();
        assert_eq!((r.lhs, r.rhs), (0.0, 0.0));
        assert!(r.satisfied);
        let r = check_diversifier_bound(&a, &a, 1.0).unwrap();
        assert_eq!(r.union_form.lhs, 0.0);
        assert!(r.holds() && !r.hausdorff_form.vacuous);
        let r = check_diversity_continuity(&a, &a, 1.0).unwrap();
        assert_eq!(r.ratio, 1.0);
        assert_eq!((r.lower.lhs, r.upper.rhs), (1.0, 1.0));
        assert!(r.holds() && !r.vacuous);
    }

    #[test]
    fn far_pair_is_vacuous_for_ratio_bound() {
        let a = random_cloud(5, 2, 1.0, 7);
        let b = random_cloud(5, 2, 1.0, 8).scaled(10.0);
        let r = check_diversity_continuity(&a, &b, 1.0).unwrap();
        assert!(r.vacuous && r.holds());
    }

    #[test]
    fn near_identical_clouds_satisfy_ratio_bound() {
        let mut g = rng(9);
        let a = random_cloud(12, 2, 2.0, 9);
        let coords = a.coords().iter().map(|c| c + 1e-3 * g.gen_range(-1.0..1.0)).collect();
        let b = PointCloud::new(2, coords).unwrap();
        let r = check_diversity_continuity(&a, &b, 1.0).unwrap();
        assert!(!r.vacuous && r.holds());
        let r = check_diversifier_bound(&a, &b, 1.0).unwrap();
        assert!(!r.hausdorff_form.vacuous && r.holds());
    }

    #[test]
    fn nested_pair_satisfies_union_form() {
        let b = random_cloud(20, 3, 2.0, 10);
        let a = b.select(&[0, 3, 5, 8, 13]).unwrap();
        assert!(check_diversifier_bound(&a, &b, 1.0).unwrap().union_form.satisfied);
    }

    #[test]
    fn nested_chain_is_cauchy() {
        let x = random_cloud(40, 2, 3.0, 11);
        let sizes = [5, 10, 20, 30, 40];
        let chain: Vec<_> =
            sizes.iter().map(|&k| weighting(&x.select(&(0..k).collect::<Vec<_>>()).unwrap(), 1.0).unwrap()).collect();
        let full = chain.last().unwrap().value;
        for lo in 0..chain.len() {
            let bound = 2.0 * (full - chain[lo].value).max(0.0).sqrt();
            for i in lo..chain.len() {
                for j in lo..chain.len() {
                    let d = w_dist(&chain[i].weights, &chain[j].weights, 1.0).unwrap();
                    assert!(d <= bound + BOUND_SLACK, "({i},{j}) from {lo}: {d} > {bound}");
                }
            }
        }
    }

    #[test]
    fn smoothing_examples() {
        let atom = WeightVector::atom(&[0.5, 0.5]).unwrap();
        let grid = Grid2 { origin: [0.0, 0.0], cell: 1.0, nx: 3, ny: 1 };
        assert_eq!(smooth_weights(&atom, &grid, 0.5).unwrap(), vec![1.0, 0.0, 0.0]);
        let w3 =
            WeightVector::new(PointCloud::from_rows(&[[0.0, 0.0, 0.0]]).unwrap(), vec![1.0], WeightKind::Weighting)
                .unwrap();
        assert!(smooth_weights(&w3, &grid, 0.5).is_err());
    }

    #[test]
    fn smoothing_s_curve_matches_direct_scan() {
        let cloud = s_curve(&mut rng(12), 100, 0.1);
        let w = weighting(&cloud, 1.0).unwrap();
        let grid = Grid2 { origin: [-1.5, -2.5], cell: 0.25, nx: 12, ny: 20 };
        let got = smooth_weights(&w.weights, &grid, 0.5).unwrap();
        for iy in 0..grid.ny {
            for ix in 0..grid.nx {
                let cx = -1.5 + (ix as f64 + 0.5) * 0.25;
                let cy = -2.5 + (iy as f64 + 0.5) * 0.25;
                let mut expect = 0.0;
                for k in 0..w.weights.len() {
                    let p = w.weights.support().point(k);
                    if ((p[0] - cx).powi(2) + (p[1] - cy).powi(2)).sqrt() <= 0.5 {
                        expect += w.weights.coeffs()[k];
                    }
                }
                assert_eq!(got[iy * grid.nx + ix], expect);
            }
        }
    }

    #[test]
    fn suites_are_deterministic() {
        let a = run_suite(Suite::WeightingBound, 6, 3, 1.0).unwrap();
        let b = run_suite(Suite::WeightingBound, 6, 3, 1.0).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.satisfied, 6);
    }
}
