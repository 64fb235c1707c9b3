//! Incremental Gram-Schmidt orthonormalization with the twice-is-enough
//! re-orthogonalization rule.

use crate::error::{Error, Result};
use crate::scalar::{cast, Scalar};
use crate::space::{AmbientSpace, Norm};
use crate::tol;
use serde::Serialize;

/// Mutually orthonormal columns spanning a subspace of an inner-product space.
#[derive(Debug, Clone, Serialize)]
#[serde(bound = "T: Serialize")]
pub struct OrthoBasis<T: Scalar> {
    pub space: AmbientSpace<T>,
    pub columns: Vec<Vec<T>>,
}

impl<T: Scalar> OrthoBasis<T> {
    pub fn new(space: AmbientSpace<T>) -> Result<Self> {
        if !space.is_inner_product() {
            return Err(Error::NonEuclidean);
        }
        Ok(Self {
            space,
            columns: Vec::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    /// One modified-Gram-Schmidt sweep; returns the swept vector.
    fn sweep(&self, v: &[T]) -> Vec<T> {
        let mut r = v.to_vec();
        for q in &self.columns {
            let c = self.space.dot(&r, q).expect("basis space is inner-product");
            for (ri, qi) in r.iter_mut().zip(q) {
                *ri = *ri - c * *qi;
            }
        }
        r
    }

    /// Splits `v` into (projection onto span, residual).
    ///
    /// The residual is orthogonal to every column within `TOL_ORTHO`; its norm
    /// equals dist(v, span). A second sweep runs whenever the first removes
    /// more than the twice-is-enough fraction of the norm.
    pub fn project(&self, v: &[T]) -> Result<(Vec<T>, Vec<T>)> {
        self.space.check_dim(v)?;
        let nv = self.space.norm(v);
        let mut r = self.sweep(v);
        if self.space.norm(&r) < cast::<T>(tol::REORTH_THRESHOLD) * nv {
            r = self.sweep(&r);
        }
        let proj: Vec<T> = v.iter().zip(&r).map(|(vi, ri)| *vi - *ri).collect();
        Ok((proj, r))
    }

    /// dist(v, span of the basis).
    pub fn residual_norm(&self, v: &[T]) -> Result<T> {
        let (_, r) = self.project(v)?;
        Ok(self.space.norm(&r))
    }

    /// Appends the normalized residual of `v`.
    ///
    /// Errors with `RankDeficient` when the residual is below the rank
    /// tolerance relative to ||v||.
    pub fn extend(&mut self, v: &[T]) -> Result<()> {
        let (_, r) = self.project(v)?;
        let rn = self.space.norm(&r);
        if rn <= cast::<T>(tol::TOL_RANK_REL) * self.space.norm(v) {
            return Err(Error::RankDeficient);
        }
        let inv = T::one() / rn;
        self.columns.push(r.iter().map(|x| *x * inv).collect());
        Ok(())
    }

    /// Coefficients of the projection of `v` in the orthonormal columns.
    pub fn coefficients(&self, v: &[T]) -> Result<Vec<T>> {
        self.space.check_dim(v)?;
        self.columns.iter().map(|q| self.space.dot(v, q)).collect()
    }

    /// Max deviation of pairwise column inner products from the identity.
    pub fn orthonormality_defect(&self) -> T {
        let mut worst = T::zero();
        for (i, qi) in self.columns.iter().enumerate() {
            for (j, qj) in self.columns.iter().enumerate() {
                let d = self
                    .space
                    .dot(qi, qj)
                    .expect("basis space is inner-product");
                let target = if i == j { T::one() } else { T::zero() };
                worst = worst.max((d - target).abs());
            }
        }
        worst
    }
}

/// Solves the positive-definite system G x = b by Cholesky factorization.
///
/// Returns `None` when a pivot falls below `eps_rel` times the largest
/// diagonal entry (numerically semi-definite input).
pub fn cholesky_solve<T: Scalar>(g: &[Vec<T>], b: &[T], eps_rel: f64) -> Option<Vec<T>> {
    let n = g.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let mut l = vec![vec![T::zero(); n]; n];
    let dmax = (0..n).fold(T::zero(), |m, i| m.max(g[i][i].abs()));
    let floor = cast::<T>(eps_rel) * dmax;
    for i in 0..n {
        for j in 0..=i {
            let mut s = g[i][j];
            for k in 0..j {
                s = s - l[i][k] * l[j][k];
            }
            if i == j {
                if s <= floor {
                    return None;
                }
                l[i][j] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    // forward then backward substitution
    let mut y = vec![T::zero(); n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s = s - l[i][k] * y[k];
        }
        y[i] = s / l[i][i];
    }
    let mut x = vec![T::zero(); n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in i + 1..n {
            s = s - l[k][i] * x[k];
        }
        x[i] = s / l[i][i];
    }
    Some(x)
}

/// Least-squares fit of `v` by the given vectors: returns (coefficients,
/// residual norm). Solves the normal equations; on rank deficiency the Gram
/// matrix gets a graded diagonal lift until the factorization succeeds, which
/// only ever increases the reported residual (the fit stays a valid
/// upper bound on the distance).
pub fn least_squares<T: Scalar>(
    space: &AmbientSpace<T>,
    vectors: &[Vec<T>],
    v: &[T],
) -> Result<(Vec<T>, T)> {
    if !space.is_inner_product() {
        return Err(Error::NonEuclidean);
    }
    space.check_dim(v)?;
    let k = vectors.len();
    if k == 0 {
        return Ok((Vec::new(), space.norm(v)));
    }
    let mut gram = vec![vec![T::zero(); k]; k];
    let mut rhs = vec![T::zero(); k];
    for i in 0..k {
        for j in 0..=i {
            let d = space.dot(&vectors[i], &vectors[j])?;
            gram[i][j] = d;
            gram[j][i] = d;
        }
        rhs[i] = space.dot(&vectors[i], v)?;
    }
    let mut lift = 0.0f64;
    let coeffs = loop {
        let mut g = gram.clone();
        if lift > 0.0 {
            let dmax = (0..k).fold(T::zero(), |m, i| m.max(gram[i][i]));
            for (i, row) in g.iter_mut().enumerate() {
                row[i] = row[i] + cast::<T>(lift) * dmax;
            }
        }
        if let Some(c) = cholesky_solve(&g, &rhs, 1e-14) {
            break c;
        }
        lift = if lift == 0.0 { 1e-12 } else { lift * 100.0 };
        if lift > 1e-3 {
            return Err(Error::SolverFailure(
                "least-squares Gram factorization".into(),
            ));
        }
    };
    let mut r = v.to_vec();
    for (c, vec_i) in coeffs.iter().zip(vectors) {
        for (ri, xi) in r.iter_mut().zip(vec_i) {
            *ri = *ri - *c * *xi;
        }
    }
    Ok((coeffs, space.norm(&r)))
}

/// Top-`r` principal directions of a point cloud (mean kept at the origin, as
/// subspaces here always pass through 0), via Jacobi eigendecomposition of the
/// second-moment matrix. Returns an orthonormal basis of the dominant
/// subspace, used for mean-square-optimal width upper bounds.
pub fn principal_subspace<T: Scalar>(
    space: &AmbientSpace<T>,
    points: &[Vec<T>],
    r: usize,
) -> Result<Vec<Vec<T>>> {
    if !space.is_inner_product() {
        return Err(Error::NonEuclidean);
    }
    let d = space.dim;
    // Work in the isometric coordinates z = sqrt(w) x so plain Jacobi applies.
    let w: Vec<T> = match &space.norm {
        Norm::WeightedEuclidean(w) => w.iter().map(|x| x.sqrt()).collect(),
        _ => vec![T::one(); d],
    };
    let mut m = vec![vec![T::zero(); d]; d];
    for p in points {
        space.check_dim(p)?;
        let z: Vec<T> = p.iter().zip(&w).map(|(x, s)| *x * *s).collect();
        for i in 0..d {
            for j in 0..d {
                m[i][j] = m[i][j] + z[i] * z[j];
            }
        }
    }
    let (vals, vecs) = jacobi_eigh(&mut m);
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|a, b| vals[*b].partial_cmp(&vals[*a]).expect("finite eigenvalues"));
    let mut basis = Vec::new();
    for &idx in order.iter().take(r.min(d)) {
        // Undo the sqrt(w) scaling so the column is unit-norm in `space`.
        let col: Vec<T> = (0..d).map(|i| vecs[i][idx] / w[i]).collect();
        let n = space.norm(&col);
        if n > T::zero() {
            basis.push(col.iter().map(|x| *x / n).collect());
        }
    }
    Ok(basis)
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix (destroys input).
/// Returns (eigenvalues, eigenvector columns). Intended for the small dense
/// matrices of this crate (dim <= a few hundred).
fn jacobi_eigh<T: Scalar>(a: &mut [Vec<T>]) -> (Vec<T>, Vec<Vec<T>>) {
    let n = a.len();
    let mut v = vec![vec![T::zero(); n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = T::one();
    }
    let tol: T = cast(1e-14);
    for _sweep in 0..100 {
        let mut off = T::zero();
        for i in 0..n {
            for j in i + 1..n {
                off = off.max(a[i][j].abs());
            }
        }
        let scale = (0..n)
            .fold(T::zero(), |m, i| m.max(a[i][i].abs()))
            .max(T::one());
        if off <= tol * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() <= tol * scale {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (cast::<T>(2.0) * a[p][q]);
                let t = {
                    let s = if theta >= T::zero() {
                        T::one()
                    } else {
                        -T::one()
                    };
                    s / (theta.abs() + (theta * theta + T::one()).sqrt())
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let vp = row[p];
                    let vq = row[q];
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    let vals: Vec<T> = (0..n).map(|i| a[i][i]).collect();
    (vals, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cholesky_solves_spd() {
        let g = vec![vec![4.0f64, 2.0], vec![2.0, 3.0]];
        let x = cholesky_solve(&g, &[8.0, 7.0], 1e-14).unwrap();
        assert!((x[0] - 1.25).abs() < 1e-12);
        assert!((x[1] - 1.5).abs() < 1e-12);
    }

    #[test]
    fn jacobi_recovers_diagonal() {
        let s = AmbientSpace::euclidean(3);
        let pts = vec![vec![2.0f64, 0.0, 0.0], vec![0.0, 1.0, 0.0]];
        let basis = principal_subspace(&s, &pts, 2).unwrap();
        assert!((basis[0][0].abs() - 1.0f64).abs() < 1e-10);
        assert!((basis[1][1].abs() - 1.0f64).abs() < 1e-10);
    }
}
