//! Distance from a vector to the span of a finite set, in l_2 (Gram-Schmidt
//! or normal equations), l_1 / l_inf (exact LP), and general p (damped
//! gradient descent on the p-power objective).

use crate::error::{Error, Result};
use crate::lp::{solve_lp, LpStatus};
use crate::scalar::{cast, Scalar};
use crate::space::{AmbientSpace, Norm};
use crate::tol;

/// min over coefficients c of ||v - sum_i c_i b_i|| in the norm of `space`.
/// Returns ||v|| for an empty basis.
pub fn dist_to_span<T: Scalar>(
    space: &AmbientSpace<T>,
    basis_vectors: &[Vec<T>],
    v: &[T],
) -> Result<T> {
    space.check_dim(v)?;
    for b in basis_vectors {
        space.check_dim(b)?;
    }
    if basis_vectors.is_empty() {
        return Ok(space.norm(v));
    }
    match &space.norm {
        Norm::Euclidean | Norm::WeightedEuclidean(_) => {
            let (_, r) = crate::ortho::least_squares(space, basis_vectors, v)?;
            Ok(r)
        }
        Norm::Lp(p) => {
            if *p == T::one() {
                dist_l1(space, basis_vectors, v)
            } else {
                dist_gd(space, basis_vectors, v, *p)
            }
        }
        Norm::LInf => dist_linf(space, basis_vectors, v),
    }
}

/// l_1 distance by LP: v - Bc = s+ - s-, minimize sum(s+ + s-), c free
/// (split into c+ - c-).
fn dist_l1<T: Scalar>(space: &AmbientSpace<T>, basis: &[Vec<T>], v: &[T]) -> Result<T> {
    let d = space.dim;
    let k = basis.len();
    let ncols = 2 * k + 2 * d;
    let mut a = vec![vec![T::zero(); ncols]; d];
    for (j, row) in a.iter_mut().enumerate() {
        for (i, b) in basis.iter().enumerate() {
            row[i] = b[j];
            row[k + i] = -b[j];
        }
        row[2 * k + j] = T::one();
        row[2 * k + d + j] = -T::one();
    }
    let mut c = vec![T::zero(); ncols];
    for cost in c.iter_mut().skip(2 * k) {
        *cost = T::one();
    }
    let feas = cast::<T>(tol::TOL_LP_REL) * space.norm(v).max(T::one());
    let sol = solve_lp(&a, v, &c, feas)?;
    match sol.status {
        LpStatus::Optimal => Ok(sol.objective.max(T::zero())),
        _ => Err(Error::SolverFailure("l1 distance LP".into())),
    }
}

/// l_inf distance by LP: minimize t with Bc + t >= v and Bc - t <= v
/// componentwise.
fn dist_linf<T: Scalar>(space: &AmbientSpace<T>, basis: &[Vec<T>], v: &[T]) -> Result<T> {
    let d = space.dim;
    let k = basis.len();
    // columns: c+ (k), c- (k), t, slack u (d), slack w (d)
    let ncols = 2 * k + 1 + 2 * d;
    let mut a = vec![vec![T::zero(); ncols]; 2 * d];
    let mut b = vec![T::zero(); 2 * d];
    for j in 0..d {
        for (i, bv) in basis.iter().enumerate() {
            a[j][i] = bv[j];
            a[j][k + i] = -bv[j];
            a[d + j][i] = bv[j];
            a[d + j][k + i] = -bv[j];
        }
        a[j][2 * k] = T::one();
        a[j][2 * k + 1 + j] = -T::one();
        b[j] = v[j];
        a[d + j][2 * k] = -T::one();
        a[d + j][2 * k + 1 + d + j] = T::one();
        b[d + j] = v[j];
    }
    let mut c = vec![T::zero(); ncols];
    c[2 * k] = T::one();
    let feas = cast::<T>(tol::TOL_LP_REL) * space.norm(v).max(T::one());
    let sol = solve_lp(&a, &b, &c, feas)?;
    match sol.status {
        LpStatus::Optimal => Ok(sol.objective.max(T::zero())),
        _ => Err(Error::SolverFailure("linf distance LP".into())),
    }
}

/// General finite p > 1: minimize F(c) = sum_j |v_j - (Bc)_j|^p by gradient
/// descent with backtracking, starting at c = 0. Convex and smooth for p > 1,
/// so the tolerance-stopped value is a certified upper estimate that sits
/// within `TOL_OPT` of the optimum in practice. The problem is pre-scaled to
/// ||v|| = 1 and unit basis columns so the stopping test is scale-free.
fn dist_gd<T: Scalar>(
    space: &AmbientSpace<T>,
    basis_raw: &[Vec<T>],
    v_raw: &[T],
    p: T,
) -> Result<T> {
    let vnorm = space.norm(v_raw);
    if vnorm == T::zero() {
        return Ok(T::zero());
    }
    let v: Vec<T> = v_raw.iter().map(|x| *x / vnorm).collect();
    let basis: Vec<Vec<T>> = basis_raw
        .iter()
        .filter_map(|b| {
            let n = space.norm(b);
            if n == T::zero() {
                None
            } else {
                Some(b.iter().map(|x| *x / n).collect())
            }
        })
        .collect();
    let v = &v[..];
    let basis = &basis[..];
    let k = basis.len();
    let obj = |c: &[T]| -> T {
        let mut r = v.to_vec();
        for (ci, b) in c.iter().zip(basis) {
            for (rj, bj) in r.iter_mut().zip(b) {
                *rj = *rj - *ci * *bj;
            }
        }
        r.iter().map(|x| x.abs().powf(p)).sum()
    };
    let grad = |c: &[T]| -> Vec<T> {
        let mut r = v.to_vec();
        for (ci, b) in c.iter().zip(basis) {
            for (rj, bj) in r.iter_mut().zip(b) {
                *rj = *rj - *ci * *bj;
            }
        }
        let w: Vec<T> = r
            .iter()
            .map(|x| {
                if *x == T::zero() {
                    T::zero()
                } else {
                    p * x.abs().powf(p - T::one()) * x.signum()
                }
            })
            .collect();
        basis
            .iter()
            .map(|b| -b.iter().zip(&w).map(|(bj, wj)| *bj * *wj).sum::<T>())
            .collect()
    };
    let mut c = vec![T::zero(); k];
    let mut f = obj(&c);
    let tol_opt: T = cast(tol::TOL_OPT);
    let mut step: T = cast(0.5);
    for _ in 0..20_000 {
        let g = grad(&c);
        let gnorm = g.iter().map(|x| *x * *x).sum::<T>().sqrt();
        if gnorm * step <= tol_opt {
            break;
        }
        // backtracking on the p-power objective
        let mut accepted = false;
        for _ in 0..60 {
            let cand: Vec<T> = c.iter().zip(&g).map(|(ci, gi)| *ci - step * *gi).collect();
            let fc = obj(&cand);
            if fc < f - cast::<T>(1e-4) * step * gnorm * gnorm {
                c = cand;
                f = fc;
                accepted = true;
                step = step * cast(1.5);
                break;
            }
            step = step * cast(0.5);
        }
        if !accepted {
            break; // step underflow: at the floating-point optimum
        }
    }
    let mut r = v.to_vec();
    for (ci, b) in c.iter().zip(basis) {
        for (rj, bj) in r.iter_mut().zip(b) {
            *rj = *rj - *ci * *bj;
        }
    }
    Ok(space.norm(&r) * vnorm)
}
