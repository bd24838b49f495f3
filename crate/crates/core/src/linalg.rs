//! Dense symmetric matrices and an updatable Cholesky factor.
//!
//! The active-set diversifier solver grows and shrinks its working support one
//! index at a time, so [`Cholesky`] supports appending a row and deleting an
//! arbitrary row in O(m²) instead of refactoring from scratch.

use crate::error::{Error, Result};

/// Pivots at or below this fraction of the diagonal entry are treated as zero.
const PIVOT_TOL: f64 = 1e-14;

/// Square symmetric matrix stored densely in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    /// Builds the matrix from its upper triangle; `f(i, j)` is called for `i <= j` only.
    pub fn from_upper(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        Self { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.n);
        (0..self.n).map(|i| dot(self.row(i), x)).collect()
    }

    /// `A[idx, idx] * x` where `x` is indexed like `idx`.
    pub fn mul_vec_subset(&self, idx: &[usize], x: &[f64]) -> Vec<f64> {
        idx.iter()
            .map(|&i| {
                let row = self.row(i);
                idx.iter().zip(x).map(|(&j, &xj)| row[j] * xj).sum()
            })
            .collect()
    }

    pub fn quad_form(&self, x: &[f64]) -> f64 {
        dot(x, &self.mul_vec(x))
    }

    pub fn principal(&self, idx: &[usize]) -> SymMatrix {
        SymMatrix::from_upper(idx.len(), |a, b| self.get(idx[a], idx[b]))
    }

    /// Largest absolute row sum, an upper bound on the spectral radius.
    pub fn max_row_sum(&self) -> f64 {
        (0..self.n).map(|i| self.row(i).iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
    }
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Lower-triangular Cholesky factor `L` with `A = L Lᵀ`, stored by rows.
#[derive(Debug, Clone)]
pub struct Cholesky {
    rows: Vec<Vec<f64>>,
}

impl Cholesky {
    pub fn empty() -> Self {
        Self { rows: Vec::new() }
    }

    pub fn factor(a: &SymMatrix) -> Result<Self> {
        let idx: Vec<usize> = (0..a.n()).collect();
        Self::factor_subset(a, &idx)
    }

    /// Factors the principal submatrix `A[idx, idx]`.
    pub fn factor_subset(a: &SymMatrix, idx: &[usize]) -> Result<Self> {
        let mut chol = Self { rows: Vec::with_capacity(idx.len()) };
        for (k, &i) in idx.iter().enumerate() {
            let col: Vec<f64> = idx[..k].iter().map(|&j| a.get(i, j)).collect();
            chol.push(&col, a.get(i, i))?;
        }
        Ok(chol)
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Appends a row/column to the factored matrix. `col` holds the new
    /// off-diagonal entries against the existing rows, `diag` the new diagonal.
    pub fn push(&mut self, col: &[f64], diag: f64) -> Result<()> {
        debug_assert_eq!(col.len(), self.dim());
        let mut l = col.to_vec();
        self.forward_in_place(&mut l);
        let pivot = diag - dot(&l, &l);
        if pivot.is_nan() || pivot <= PIVOT_TOL * diag.abs().max(f64::MIN_POSITIVE) {
            return Err(Error::NumericallySingular { row: self.dim(), pivot });
        }
        l.push(pivot.sqrt());
        self.rows.push(l);
        Ok(())
    }

    /// Deletes row/column `k` of the factored matrix, restoring the factor of
    /// the remaining principal submatrix by a rank-one update of the trailing block.
    pub fn remove(&mut self, k: usize) {
        assert!(k < self.dim(), "row {k} out of range");
        self.rows.remove(k);
        let m = self.dim();
        // Column k below the removed row, then drop it from each trailing row.
        let mut x: Vec<f64> = self.rows[k..].iter_mut().map(|row| row.remove(k)).collect();
        for j in k..m {
            let t = j - k;
            let ljj = self.rows[j][j];
            let r = ljj.hypot(x[t]);
            let c = r / ljj;
            let s = x[t] / ljj;
            self.rows[j][j] = r;
            for i in (j + 1)..m {
                let ti = i - k;
                let lij = (self.rows[i][j] + s * x[ti]) / c;
                x[ti] = c * x[ti] - s * lij;
                self.rows[i][j] = lij;
            }
        }
    }

    fn forward_in_place(&self, b: &mut [f64]) {
        for i in 0..b.len() {
            let row = &self.rows[i];
            let s = b[i] - dot(&row[..i], &b[..i]);
            b[i] = s / row[i];
        }
    }

    fn backward_in_place(&self, b: &mut [f64]) {
        for i in (0..b.len()).rev() {
            b[i] /= self.rows[i][i];
            let bi = b[i];
            for (bj, lij) in b[..i].iter_mut().zip(&self.rows[i][..i]) {
                *bj -= lij * bi;
            }
        }
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        assert_eq!(b.len(), self.dim());
        let mut x = b.to_vec();
        self.forward_in_place(&mut x);
        self.backward_in_place(&mut x);
        x
    }

    /// Solves `A[idx, idx] x = b` with one step of iterative refinement,
    /// where `self` factors that principal submatrix.
    pub fn solve_refined(&self, a: &SymMatrix, idx: &[usize], b: &[f64]) -> Vec<f64> {
        let mut x = self.solve(b);
        let ax = a.mul_vec_subset(idx, &x);
        let r: Vec<f64> = b.iter().zip(&ax).map(|(bi, axi)| bi - axi).collect();
        for (xi, di) in x.iter_mut().zip(self.solve(&r)) {
            *xi += di;
        }
        x
    }

    /// Reconstructs `L Lᵀ`; used by tests.
    pub fn reconstruct(&self) -> SymMatrix {
        let n = self.dim();
        SymMatrix::from_upper(n, |i, j| {
            let (ri, rj) = (&self.rows[i], &self.rows[j]);
            dot(&ri[..=i.min(j)], &rj[..=i.min(j)])
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_spd(n: usize, seed: u64) -> SymMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts: Vec<[f64; 2]> = (0..n).map(|_| [rng.gen::<f64>() * 4.0, rng.gen::<f64>() * 4.0]).collect();
        SymMatrix::from_upper(n, |i, j| {
            let d = ((pts[i][0] - pts[j][0]).powi(2) + (pts[i][1] - pts[j][1]).powi(2)).sqrt();
            (-d).exp()
        })
    }

    fn max_abs_diff(a: &SymMatrix, b: &SymMatrix) -> f64 {
        (0..a.n())
            .flat_map(|i| (0..a.n()).map(move |j| (i, j)))
            .map(|(i, j)| (a.get(i, j) - b.get(i, j)).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn factor_reconstructs_matrix() {
        let a = random_spd(12, 1);
        let chol = Cholesky::factor(&a).unwrap();
        assert!(max_abs_diff(&a, &chol.reconstruct()) < 1e-13);
    }

    #[test]
    fn solve_has_small_residual() {
        let a = random_spd(30, 2);
        let idx: Vec<usize> = (0..30).collect();
        let chol = Cholesky::factor(&a).unwrap();
        let b = vec![1.0; 30];
        let x = chol.solve_refined(&a, &idx, &b);
        let r = a.mul_vec(&x);
        assert!(r.iter().all(|v| (v - 1.0).abs() < 1e-11));
    }

    #[test]
    fn remove_matches_fresh_factor() {
        let a = random_spd(10, 3);
        for k in [0, 4, 9] {
            let mut chol = Cholesky::factor(&a).unwrap();
            chol.remove(k);
            let idx: Vec<usize> = (0..10).filter(|&i| i != k).collect();
            let expect = a.principal(&idx);
            assert!(max_abs_diff(&expect, &chol.reconstruct()) < 1e-13, "k = {k}");
        }
    }

    #[test]
    fn push_after_remove_tracks_support() {
        let a = random_spd(8, 4);
        let mut idx: Vec<usize> = vec![0, 1, 2, 3, 4];
        let mut chol = Cholesky::factor_subset(&a, &idx).unwrap();
        chol.remove(2);
        idx.remove(2);
        let col: Vec<f64> = idx.iter().map(|&j| a.get(7, j)).collect();
        chol.push(&col, a.get(7, 7)).unwrap();
        idx.push(7);
        assert!(max_abs_diff(&a.principal(&idx), &chol.reconstruct()) < 1e-13);
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let a = SymMatrix::from_upper(2, |_, _| 1.0);
        assert!(matches!(Cholesky::factor(&a), Err(Error::NumericallySingular { row: 1, .. })));
    }
}
