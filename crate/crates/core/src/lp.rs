//! Dense two-phase simplex with Bland's rule.
//!
//! Solves min c'x subject to A x = b, x >= 0. Small and deterministic; sized
//! for the basis-pursuit and Chebyshev subproblems of this crate (tens of
//! rows, a few hundred columns).

use crate::error::{Error, Result};
use crate::scalar::{cast, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct LpSolution<T: Scalar> {
    pub status: LpStatus,
    pub objective: T,
    pub x: Vec<T>,
}

fn pivot<T: Scalar>(tab: &mut [Vec<T>], basis: &mut [usize], row: usize, col: usize) {
    let piv = tab[row][col];
    let inv = T::one() / piv;
    for v in tab[row].iter_mut() {
        *v = *v * inv;
    }
    let prow = tab[row].clone();
    for (i, r) in tab.iter_mut().enumerate() {
        if i == row {
            continue;
        }
        let f = r[col];
        if f != T::zero() {
            for (v, p) in r.iter_mut().zip(&prow) {
                *v = *v - f * *p;
            }
        }
    }
    basis[row] = col;
}

/// One simplex phase on the current tableau. `costs` has one entry per
/// column. Reduced costs are recomputed from scratch each iteration, which is
/// slower than tableau bookkeeping but immune to drift.
fn run_phase<T: Scalar>(
    tab: &mut [Vec<T>],
    basis: &mut [usize],
    costs: &[T],
    eps: T,
) -> Result<LpStatus> {
    let m = tab.len();
    let ncols = costs.len();
    let max_iters = 200 * (ncols + m + 1);
    for _ in 0..max_iters {
        // reduced cost r_j = c_j - sum_i c_{B(i)} tab[i][j]
        let mut entering = None;
        for j in 0..ncols {
            let mut r = costs[j];
            for i in 0..m {
                let cb = costs[basis[i]];
                if cb != T::zero() {
                    r = r - cb * tab[i][j];
                }
            }
            if r < -eps {
                entering = Some(j); // Bland: first (lowest-index) negative
                break;
            }
        }
        let Some(col) = entering else {
            return Ok(LpStatus::Optimal);
        };
        let mut leave: Option<(usize, T)> = None;
        for i in 0..m {
            if tab[i][col] > eps {
                let ratio = tab[i][ncols] / tab[i][col];
                match &leave {
                    None => leave = Some((i, ratio)),
                    Some((li, lr)) => {
                        // Bland tie-break: smallest basis variable index.
                        if ratio < *lr - eps || (ratio <= *lr + eps && basis[i] < basis[*li]) {
                            leave = Some((i, ratio));
                        }
                    }
                }
            }
        }
        let Some((row, _)) = leave else {
            return Ok(LpStatus::Unbounded);
        };
        pivot(tab, basis, row, col);
    }
    Err(Error::SolverFailure("simplex iteration budget".into()))
}

/// Two-phase simplex for min c'x, A x = b, x >= 0.
///
/// `feas_tol` is the absolute phase-1 objective threshold below which the
/// problem counts as feasible.
pub fn solve_lp<T: Scalar>(a: &[Vec<T>], b: &[T], c: &[T], feas_tol: T) -> Result<LpSolution<T>> {
    let m = a.len();
    let n = c.len();
    for row in a {
        if row.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: row.len(),
            });
        }
    }
    if b.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: b.len(),
        });
    }
    let eps: T = cast(1e-11);

    // Tableau: n structural + m artificial columns + rhs.
    let ncols = n + m;
    let mut tab: Vec<Vec<T>> = Vec::with_capacity(m);
    for i in 0..m {
        let neg = b[i] < T::zero();
        let mut row = vec![T::zero(); ncols + 1];
        for j in 0..n {
            row[j] = if neg { -a[i][j] } else { a[i][j] };
        }
        row[n + i] = T::one();
        row[ncols] = if neg { -b[i] } else { b[i] };
        tab.push(row);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // Phase 1: minimize the sum of artificials.
    let mut phase1_costs = vec![T::zero(); ncols];
    for cost in phase1_costs.iter_mut().skip(n) {
        *cost = T::one();
    }
    if let LpStatus::Unbounded = run_phase(&mut tab, &mut basis, &phase1_costs, eps)? {
        return Err(Error::SolverFailure("phase-1 unbounded".into()));
    }
    let phase1_obj: T = (0..m)
        .filter(|i| basis[*i] >= n)
        .map(|i| tab[i][ncols])
        .sum();
    if phase1_obj > feas_tol {
        return Ok(LpSolution {
            status: LpStatus::Infeasible,
            objective: phase1_obj,
            x: vec![T::zero(); n],
        });
    }
    // Drive remaining artificials out of the basis where possible.
    for i in 0..m {
        if basis[i] >= n {
            if let Some(col) = (0..n).find(|j| tab[i][*j].abs() > eps) {
                pivot(&mut tab, &mut basis, i, col);
            }
        }
    }

    // Phase 2 on the original costs; artificial columns get a prohibitive
    // cost instead of removal, keeping column indexing intact. Any artificial
    // stuck in the basis sits at value ~0, so the penalty does not perturb
    // the optimum.
    let mut phase2_costs = vec![T::zero(); ncols];
    phase2_costs[..n].copy_from_slice(c);
    let big: T = {
        let mut mx = T::one();
        for x in c {
            mx = mx.max(x.abs());
        }
        mx * cast(1e8)
    };
    for cost in phase2_costs.iter_mut().skip(n) {
        *cost = big;
    }
    let status = run_phase(&mut tab, &mut basis, &phase2_costs, eps)?;
    if status == LpStatus::Unbounded {
        return Ok(LpSolution {
            status,
            objective: T::zero(),
            x: vec![T::zero(); n],
        });
    }
    let mut x = vec![T::zero(); n];
    for i in 0..m {
        if basis[i] < n {
            x[basis[i]] = tab[i][ncols];
        }
    }
    let objective = c.iter().zip(&x).map(|(ci, xi)| *ci * *xi).sum();
    Ok(LpSolution {
        status: LpStatus::Optimal,
        objective,
        x,
    })
}
