//! Finite point clouds in Euclidean space and their distance and similarity matrices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Cholesky, SymMatrix};

/// Duplicates closer than this are removed before any solve.
pub const DEDUP_TOL: f64 = 1e-12;

/// A nonempty ordered list of points in `R^dim`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointCloud {
    dim: usize,
    coords: Vec<f64>,
}

impl PointCloud {
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("ambient dimension must be positive"));
        }
        if coords.is_empty() {
            return Err(Error::EmptyCloud);
        }
        if coords.len() % dim != 0 {
            return Err(Error::DimensionMismatch { expected: dim, found: coords.len() % dim });
        }
        Ok(Self { dim, coords })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let first = rows.first().ok_or(Error::EmptyCloud)?;
        let dim = first.as_ref().len();
        let mut coords = Vec::with_capacity(dim * rows.len());
        for row in rows {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: row.len() });
            }
            coords.extend_from_slice(row);
        }
        Self::new(dim, coords)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn select(&self, idx: &[usize]) -> Result<Self> {
        let coords = idx.iter().flat_map(|&i| self.point(i).iter().copied()).collect();
        Self::new(self.dim, coords)
    }

    /// Every coordinate multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self { dim: self.dim, coords: self.coords.iter().map(|c| c * factor).collect() }
    }

    /// Concatenation `self ++ other`; combine with [`dedup`] to form a set union.
    pub fn concat(&self, other: &PointCloud) -> Result<Self> {
        self.check_dim(other.dim)?;
        let mut coords = self.coords.clone();
        coords.extend_from_slice(&other.coords);
        Self::new(self.dim, coords)
    }

    pub(crate) fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim == dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.dim, found: dim })
        }
    }
}

#[inline]
pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

pub fn distance_matrix(cloud: &PointCloud) -> SymMatrix {
    SymMatrix::from_upper(cloud.len(), |i, j| if i == j { 0.0 } else { euclidean(cloud.point(i), cloud.point(j)) })
}

/// `Z = exp(-scale * d)`, certified positive definite by a successful Cholesky factorization.
#[derive(Debug, Clone)]
pub struct SimilarityMatrix {
    entries: SymMatrix,
    factor: Cholesky,
}

impl SimilarityMatrix {
    pub fn entries(&self) -> &SymMatrix {
        &self.entries
    }

    pub fn factor(&self) -> &Cholesky {
        &self.factor
    }

    pub fn n(&self) -> usize {
        self.entries.n()
    }

    pub(crate) fn into_parts(self) -> (SymMatrix, Cholesky) {
        (self.entries, self.factor)
    }
}

/// Kernel matrix without the SPD certificate.
pub(crate) fn kernel_matrix(cloud: &PointCloud, scale: f64) -> SymMatrix {
    SymMatrix::from_upper(cloud.len(), |i, j| {
        if i == j {
            1.0
        } else {
            (-scale * euclidean(cloud.point(i), cloud.point(j))).exp()
        }
    })
}

pub(crate) fn check_scale(scale: f64) -> Result<()> {
    if scale.is_finite() && scale > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("scale must be positive and finite, got {scale}")))
    }
}

pub fn similarity_matrix(cloud: &PointCloud, scale: f64) -> Result<SimilarityMatrix> {
    check_scale(scale)?;
    let entries = kernel_matrix(cloud, scale);
    let factor = Cholesky::factor(&entries)?;
    Ok(SimilarityMatrix { entries, factor })
}

/// Removes every point lying within `tol` of an earlier survivor; survivor order is preserved.
pub fn dedup(cloud: &PointCloud, tol: f64) -> PointCloud {
    let mut keep: Vec<usize> = Vec::with_capacity(cloud.len());
    for i in 0..cloud.len() {
        let p = cloud.point(i);
        if keep.iter().all(|&k| euclidean(cloud.point(k), p) > tol) {
            keep.push(i);
        }
    }
    if keep.len() == cloud.len() {
        return cloud.clone();
    }
    cloud.select(&keep).expect("first point always survives")
}
