//! Synthetic point clouds used by tests, benchmarks and property runs.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::metric::PointCloud;

/// `n` points uniform in the cube `[0, side]^dim`.
pub fn uniform_cloud<R: Rng + ?Sized>(rng: &mut R, n: usize, dim: usize, side: f64) -> PointCloud {
    let coords = (0..n * dim).map(|_| rng.gen::<f64>() * side).collect();
    PointCloud::new(dim, coords).expect("n and dim are positive")
}

/// Points x, y, z in the plane with `d(x,y) = d(x,z) = t` and `d(y,z) = c·t`, for `0 < c < 2`.
pub fn three_point_space(t: f64, c: f64) -> PointCloud {
    let h = t * (1.0 - c * c / 4.0).sqrt();
    PointCloud::from_rows(&[[0.0, 0.0], [h, c * t / 2.0], [h, -c * t / 2.0]]).expect("three rows of two")
}

/// `n` samples of the planar S-curve `(sin u, sgn(u)(cos u − 1))`, `u ∈ [−3π/2, 3π/2]`,
/// with isotropic Gaussian noise of standard deviation `sigma`.
pub fn s_curve<R: Rng + ?Sized>(rng: &mut R, n: usize, sigma: f64) -> PointCloud {
    let noise = Normal::new(0.0, sigma.max(0.0)).expect("nonnegative sigma");
    let half = 1.5 * std::f64::consts::PI;
    let mut coords = Vec::with_capacity(2 * n);
    for _ in 0..n {
        let u: f64 = rng.gen_range(-half..=half);
        coords.push(u.sin() + noise.sample(rng));
        coords.push(u.signum() * (u.cos() - 1.0) + noise.sample(rng));
    }
    PointCloud::new(2, coords).expect("n is positive")
}

/// Isotropic Gaussian blob of `n` points around `center`.
pub fn gaussian_blob<R: Rng + ?Sized>(rng: &mut R, n: usize, center: &[f64], sigma: f64) -> Vec<Vec<f64>> {
    let noise = Normal::new(0.0, sigma).expect("valid sigma");
    (0..n).map(|_| center.iter().map(|c| c + noise.sample(rng)).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::euclidean;

    #[test]
    fn three_point_space_realizes_distances() {
        let c = three_point_space(1.3, 0.6);
        assert!((euclidean(c.point(0), c.point(1)) - 1.3).abs() < 1e-15);
        assert!((euclidean(c.point(0), c.point(2)) - 1.3).abs() < 1e-15);
        assert!((euclidean(c.point(1), c.point(2)) - 0.78).abs() < 1e-15);
    }
}
