use crate::datasets::{three_point_space, uniform_cloud};
use crate::metric::PointCloud;
use crate::seed::rng;

pub fn random_cloud(n: usize, dim: usize, side: f64, seed: u64) -> PointCloud {
    uniform_cloud(&mut rng(seed), n, dim, side)
}

pub fn three_point(t: f64, c: f64) -> PointCloud {
    three_point_space(t, c)
}
