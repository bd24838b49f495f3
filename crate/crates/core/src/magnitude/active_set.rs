//! Primal active-set solver for `min ½ wᵀZw − Σ w` subject to `w ≥ 0`.
//!
//! Phase one starts from the full support and repeatedly drops the most
//! negative coefficient of the restricted solve `Z_SS w_S = 1` until the
//! restricted solution is nonnegative. Phase two is a Lawson–Hanson style
//! primal method: it re-adds the index whose dual `(Zw)_i − 1` is most
//! negative and backtracks along the segment to the new restricted solution
//! whenever that would leave the feasible set. The Cholesky factor of `Z_SS`
//! is updated in place as indices enter and leave.

use super::{kkt_residual, SolverConfig};
use crate::error::{Error, Result};
use crate::linalg::{Cholesky, SymMatrix};

pub(super) struct Outcome {
    pub coeffs: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
    pub used_fallback: bool,
}

struct Support<'a> {
    z: &'a SymMatrix,
    idx: Vec<usize>,
    chol: Cholesky,
}

impl<'a> Support<'a> {
    fn solve(&self) -> Vec<f64> {
        let ones = vec![1.0; self.idx.len()];
        self.chol.solve_refined(self.z, &self.idx, &ones)
    }

    fn remove(&mut self, pos: usize) {
        self.idx.remove(pos);
        self.chol.remove(pos);
    }

    fn push(&mut self, j: usize) -> Result<()> {
        let col: Vec<f64> = self.idx.iter().map(|&i| self.z.get(j, i)).collect();
        self.chol.push(&col, self.z.get(j, j))?;
        self.idx.push(j);
        Ok(())
    }

    fn scatter(&self, ws: &[f64], n: usize) -> Vec<f64> {
        let mut w = vec![0.0; n];
        for (&i, &v) in self.idx.iter().zip(ws) {
            w[i] = v;
        }
        w
    }
}

fn argmin(v: &[f64]) -> Option<(usize, f64)> {
    v.iter().copied().enumerate().fold(None, |best, (i, x)| match best {
        Some((_, b)) if b <= x => best,
        _ => Some((i, x)),
    })
}

pub(super) fn solve(z: &SymMatrix, full: Cholesky, cfg: &SolverConfig) -> Result<Outcome> {
    let n = z.n();
    let budget = cfg.active_set_steps_per_point * n;
    let dual_tol = 0.1 * cfg.tolerance;
    let mut iterations = 0;
    let mut s = Support { z, idx: (0..n).collect(), chol: full };

    let mut ws = s.solve();
    let mut exhausted = false;
    // Phase one: shrink the support until the restricted solve is nonnegative.
    while let Some((k, min)) = argmin(&ws) {
        if min >= 0.0 {
            break;
        }
        if iterations >= budget {
            exhausted = true;
            break;
        }
        iterations += 1;
        s.remove(k);
        ws = s.solve();
    }

    let mut w = s.scatter(&ws, n);
    if !exhausted {
        // Phase two: w stays feasible and the objective decreases monotonically.
        let mut blocked = vec![false; n];
        'outer: loop {
            let zw = z.mul_vec(&w);
            let mut in_support = vec![false; n];
            for &i in &s.idx {
                in_support[i] = true;
            }
            let candidate = (0..n).filter(|&i| !in_support[i] && !blocked[i]).map(|i| (i, zw[i] - 1.0)).fold(
                None,
                |best: Option<(usize, f64)>, (i, g)| match best {
                    Some((_, b)) if b <= g => best,
                    _ => Some((i, g)),
                },
            );
            let Some((j, g)) = candidate else { break };
            if g >= -dual_tol {
                break;
            }
            if iterations >= budget {
                exhausted = true;
                break;
            }
            if s.push(j).is_err() {
                blocked[j] = true;
                continue;
            }
            ws.push(0.0);
            loop {
                iterations += 1;
                let trial = s.solve();
                if trial.iter().all(|&v| v > 0.0) {
                    ws = trial;
                    blocked.iter_mut().for_each(|b| *b = false);
                    break;
                }
                // Step as far toward `trial` as feasibility allows.
                let mut alpha = f64::INFINITY;
                let mut hit = 0;
                for (pos, (&cur, &next)) in ws.iter().zip(&trial).enumerate() {
                    if next <= 0.0 {
                        let a = if cur > 0.0 { cur / (cur - next) } else { 0.0 };
                        if a < alpha {
                            alpha = a;
                            hit = pos;
                        }
                    }
                }
                if alpha <= 0.0 && s.idx[hit] == j && ws[hit] == 0.0 {
                    // The entering index cannot move off zero at working precision.
                    s.remove(hit);
                    ws.remove(hit);
                    blocked[j] = true;
                    w = s.scatter(&ws, n);
                    continue 'outer;
                }
                for (cur, &next) in ws.iter_mut().zip(&trial) {
                    *cur += alpha * (next - *cur);
                }
                ws[hit] = 0.0;
                for pos in (0..ws.len()).rev() {
                    if ws[pos] <= 0.0 {
                        s.remove(pos);
                        ws.remove(pos);
                    }
                }
                if iterations >= budget {
                    exhausted = true;
                    w = s.scatter(&ws, n);
                    break 'outer;
                }
            }
            w = s.scatter(&ws, n);
        }
    }

    let residual = kkt_residual(z, &w);
    if !exhausted && residual <= cfg.tolerance {
        return Ok(Outcome { coeffs: w, iterations, residual, used_fallback: false });
    }
    let start: Vec<f64> = w.iter().map(|v| v.max(0.0)).collect();
    let (coeffs, extra) = projected_gradient(z, start, cfg)?;
    let residual = kkt_residual(z, &coeffs);
    Ok(Outcome { coeffs, iterations: iterations + extra, residual, used_fallback: true })
}

/// Accelerated projected gradient with adaptive restart, polished by an exact
/// restricted solve on the detected support.
fn projected_gradient(z: &SymMatrix, start: Vec<f64>, cfg: &SolverConfig) -> Result<(Vec<f64>, usize)> {
    let step = 1.0 / z.max_row_sum();
    let mut x = start;
    let mut y = x.clone();
    let mut t = 1.0_f64;
    let mut residual = f64::INFINITY;
    for it in 1..=cfg.fallback_max_iterations {
        let g = z.mul_vec(&y);
        let next: Vec<f64> = y.iter().zip(&g).map(|(yi, gi)| (yi - step * (gi - 1.0)).max(0.0)).collect();
        let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
        let momentum = (t - 1.0) / t_next;
        let restart: f64 = y.iter().zip(&next).zip(&x).map(|((yi, ni), xi)| (yi - ni) * (ni - xi)).sum();
        if restart > 0.0 {
            t = 1.0;
            y = next.clone();
        } else {
            t = t_next;
            y = next.iter().zip(&x).map(|(ni, xi)| ni + momentum * (ni - xi)).collect();
        }
        x = next;

        if it % 25 == 0 {
            residual = kkt_residual(z, &x);
            if residual <= cfg.tolerance {
                return Ok((x, it));
            }
            if let Some(polished) = polish(z, &x, cfg.tolerance) {
                return Ok((polished, it));
            }
        }
    }
    residual = residual.min(kkt_residual(z, &x));
    if residual <= cfg.tolerance {
        return Ok((x, cfg.fallback_max_iterations));
    }
    Err(Error::MaxIterations { iterations: cfg.fallback_max_iterations, residual })
}

fn polish(z: &SymMatrix, x: &[f64], tol: f64) -> Option<Vec<f64>> {
    let idx: Vec<usize> = (0..x.len()).filter(|&i| x[i] > 0.0).collect();
    if idx.is_empty() {
        return None;
    }
    let chol = Cholesky::factor_subset(z, &idx).ok()?;
    let ones = vec![1.0; idx.len()];
    let ws = chol.solve_refined(z, &idx, &ones);
    if ws.iter().any(|&v| v < 0.0) {
        return None;
    }
    let mut w = vec![0.0; x.len()];
    for (&i, v) in idx.iter().zip(ws) {
        w[i] = v;
    }
    (kkt_residual(z, &w) <= tol).then_some(w)
}
