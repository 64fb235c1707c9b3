//! Orthogonal greedy algorithm over a finite dictionary, the PGA and RGA
//! baselines, the variation norm by linear programming, best n-term error by
//! exhaustive search, the convergence recurrence bound, and the K-functional
//! upper estimate.

use crate::error::{Error, Result};
use crate::lp::{solve_lp, LpStatus};
use crate::ortho::{least_squares, OrthoBasis};
use crate::scalar::{cast, Scalar};
use crate::space::AmbientSpace;
use crate::tol;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Finite collection of nonzero atoms in an inner-product space.
#[derive(Debug, Clone, Serialize)]
#[serde(bound = "T: Serialize")]
pub struct Dictionary<T: Scalar> {
    pub atoms: Vec<Vec<T>>,
    pub space: AmbientSpace<T>,
    /// When set, every atom norm is <= 1 (checked / enforced at build).
    pub normalized: bool,
}

impl<T: Scalar> Dictionary<T> {
    /// Builds a dictionary; with `normalize` each atom is scaled to unit
    /// norm. Zero atoms are rejected.
    pub fn new(space: AmbientSpace<T>, atoms: Vec<Vec<T>>, normalize: bool) -> Result<Self> {
        if !space.is_inner_product() {
            return Err(Error::NonEuclidean);
        }
        if atoms.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut out = Vec::with_capacity(atoms.len());
        for a in atoms {
            space.check_dim(&a)?;
            let n = space.norm(&a);
            if n == T::zero() {
                return Err(Error::InvalidParameter(
                    "dictionary atoms must be nonzero".into(),
                ));
            }
            if normalize {
                out.push(a.iter().map(|x| *x / n).collect());
            } else {
                out.push(a);
            }
        }
        Ok(Self {
            atoms: out,
            space,
            normalized: normalize,
        })
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Max atom norm; <= 1 + 1e-12 when `normalized`.
    pub fn sup_norm(&self) -> T {
        self.atoms
            .iter()
            .map(|a| self.space.norm(a))
            .fold(T::zero(), |m, x| m.max(x))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(bound = "T: Serialize")]
pub enum Algorithm<T: Scalar> {
    Oga,
    WeakOga { gamma: T },
    Pga,
    Rga,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OgaStop {
    ReachedNMax,
    /// max |<g, r>| fell below tolerance: the residual is orthogonal to the
    /// dictionary, so the algorithm has terminated.
    ResidualOrthogonal,
}

#[derive(Debug, Clone, Serialize)]
#[serde(bound = "T: Serialize")]
pub struct OgaTrace<T: Scalar> {
    /// Atom index chosen at each step (repeats possible for PGA/RGA).
    pub selected: Vec<usize>,
    /// ||f - f_k|| for k = 0..=steps.
    pub residual_norms: Vec<T>,
    /// Coefficients of f_N on the selected atoms, in selection order (for
    /// OGA these are the least-squares coefficients; for PGA/RGA the
    /// coefficients accumulated by the update rule).
    pub coefficients: Vec<T>,
    /// |<g_k, r_{k-1}>| per step.
    pub inner_products: Vec<T>,
    /// max over the dictionary of |<g, r_{k-1}>| per step (weak-selection
    /// contract checking).
    pub max_inner_products: Vec<T>,
    /// ||g_k - P_{k-1} g_k|| per step (OGA only; the denominator of the
    /// residual recursion). Empty for PGA/RGA.
    pub atom_residual_norms: Vec<T>,
    pub algorithm: Algorithm<T>,
    /// Atoms that were admissible but already inside the selected span and
    /// therefore skipped.
    pub skipped: usize,
    pub stop: OgaStop,
}

impl<T: Scalar> OgaTrace<T> {
    /// CSV rows `step,atom_index,inner_product,residual_norm`, one row per
    /// step with the post-step residual norm.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,atom_index,inner_product,residual_norm\n");
        for (k, idx) in self.selected.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{}\n",
                k + 1,
                idx,
                self.inner_products[k],
                self.residual_norms[k + 1]
            ));
        }
        out
    }
}

/// Orthogonal greedy algorithm: select the atom with maximal |<g, r>| (or a
/// gamma-admissible one, seeded-random, for gamma < 1), then recompute the
/// approximation as the full orthogonal projection onto all selected atoms.
pub fn run_oga<T: Scalar>(
    dict: &Dictionary<T>,
    f: &[T],
    n_max: usize,
    gamma: T,
    seed: u64,
) -> Result<OgaTrace<T>> {
    if gamma <= T::zero() || gamma > T::one() {
        return Err(Error::InvalidParameter("gamma must lie in (0, 1]".into()));
    }
    let space = &dict.space;
    space.check_dim(f)?;
    if n_max > dict.len().min(space.dim) {
        return Err(Error::InvalidParameter(format!(
            "n_max {} exceeds min(dim, atoms) = {}",
            n_max,
            dict.len().min(space.dim)
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut basis = OrthoBasis::new(space.clone())?;
    let mut selected: Vec<usize> = Vec::new();
    let mut inner_products = Vec::new();
    let mut max_inner_products = Vec::new();
    let mut atom_residual_norms = Vec::new();
    let f_norm = space.norm(f);
    let mut residual_norms = vec![f_norm];
    let mut r: Vec<T> = f.to_vec();
    let mut skipped = 0usize;
    let mut usable = vec![true; dict.len()];
    let mut stop = OgaStop::ReachedNMax;
    let ip_tol = cast::<T>(tol::TOL_RANK_REL) * f_norm.max(T::one());

    for _step in 0..n_max {
        let ips: Vec<T> = dict
            .atoms
            .iter()
            .map(|g| space.dot(g, &r).expect("inner-product space").abs())
            .collect();
        let max_ip = ips.iter().fold(T::zero(), |m, x| m.max(*x));
        if max_ip <= ip_tol {
            stop = OgaStop::ResidualOrthogonal;
            break;
        }
        // candidate order: argmax-first for gamma = 1; a seeded-random
        // admissible ordering for gamma < 1
        let mut order: Vec<usize> = (0..dict.len())
            .filter(|i| usable[*i] && ips[*i] >= gamma * max_ip)
            .collect();
        if gamma == T::one() {
            order.sort_by(|a, b| {
                ips[*b]
                    .partial_cmp(&ips[*a])
                    .expect("finite inner products")
                    .then(a.cmp(b))
            });
        } else {
            // uniform choice among admissible: one shuffle, then first usable
            for i in (1..order.len()).rev() {
                let j = rng.gen_range(0..=i);
                order.swap(i, j);
            }
        }
        let mut chosen = None;
        for idx in order {
            let g = &dict.atoms[idx];
            let arn = basis.residual_norm(g)?;
            if arn <= cast::<T>(tol::TOL_RANK_REL) * space.norm(g) {
                usable[idx] = false;
                skipped += 1;
                continue;
            }
            chosen = Some((idx, arn));
            break;
        }
        let Some((idx, arn)) = chosen else {
            return Err(Error::RankExhausted);
        };
        inner_products.push(ips[idx]);
        max_inner_products.push(max_ip);
        atom_residual_norms.push(arn);
        selected.push(idx);
        basis.extend(&dict.atoms[idx])?;
        // full orthogonal projection of f onto the enlarged span
        let (_, res) = basis.project(f)?;
        r = res;
        residual_norms.push(space.norm(&r));
    }
    let sel_atoms: Vec<Vec<T>> = selected.iter().map(|i| dict.atoms[*i].clone()).collect();
    let (coefficients, _) = least_squares(space, &sel_atoms, f)?;
    Ok(OgaTrace {
        selected,
        residual_norms,
        coefficients,
        inner_products,
        max_inner_products,
        atom_residual_norms,
        algorithm: if gamma == T::one() {
            Algorithm::Oga
        } else {
            Algorithm::WeakOga { gamma }
        },
        skipped,
        stop,
    })
}

/// Pure greedy algorithm: f_n = f_{n-1} + <r, g_n> g_n with g_n the
/// max-correlation atom. No projection, so atoms can repeat.
pub fn run_pga<T: Scalar>(dict: &Dictionary<T>, f: &[T], n_max: usize) -> Result<OgaTrace<T>> {
    let space = &dict.space;
    space.check_dim(f)?;
    let f_norm = space.norm(f);
    let mut r = f.to_vec();
    let mut selected = Vec::new();
    let mut inner_products = Vec::new();
    let mut max_inner_products = Vec::new();
    let mut residual_norms = vec![f_norm];
    let mut coeff_acc: Vec<T> = Vec::new();
    let mut stop = OgaStop::ReachedNMax;
    let ip_tol = cast::<T>(tol::TOL_RANK_REL) * f_norm.max(T::one());
    for _ in 0..n_max {
        let ips: Vec<T> = dict
            .atoms
            .iter()
            .map(|g| space.dot(g, &r).expect("inner-product space"))
            .collect();
        let (mut best, mut best_abs) = (0usize, T::zero());
        for (i, ip) in ips.iter().enumerate() {
            if ip.abs() > best_abs {
                best_abs = ip.abs();
                best = i;
            }
        }
        if best_abs <= ip_tol {
            stop = OgaStop::ResidualOrthogonal;
            break;
        }
        let g = &dict.atoms[best];
        let gn2 = space.dot(g, g)?;
        // steepest single-atom coefficient: for unit atoms this is <r, g>
        let c = ips[best] / gn2;
        for (ri, gi) in r.iter_mut().zip(g) {
            *ri = *ri - c * *gi;
        }
        selected.push(best);
        inner_products.push(best_abs);
        max_inner_products.push(best_abs);
        coeff_acc.push(c);
        residual_norms.push(space.norm(&r));
    }
    Ok(OgaTrace {
        selected,
        residual_norms,
        coefficients: coeff_acc,
        inner_products,
        max_inner_products,
        atom_residual_norms: Vec::new(),
        algorithm: Algorithm::Pga,
        skipped: 0,
        stop,
    })
}

/// Relaxed greedy algorithm: per step, the best (alpha, beta, g) for
/// f_n = alpha f_{n-1} + beta g, the inner 2x2 least-squares problem solved
/// exactly per atom.
pub fn run_rga<T: Scalar>(dict: &Dictionary<T>, f: &[T], n_max: usize) -> Result<OgaTrace<T>> {
    let space = &dict.space;
    space.check_dim(f)?;
    let f_norm = space.norm(f);
    let mut fn_cur = vec![T::zero(); space.dim];
    let mut selected = Vec::new();
    let mut inner_products = Vec::new();
    let mut max_inner_products = Vec::new();
    let mut residual_norms = vec![f_norm];
    let mut coeffs: Vec<T> = Vec::new();
    let mut stop = OgaStop::ReachedNMax;
    let ip_tol = cast::<T>(tol::TOL_RANK_REL) * f_norm.max(T::one());
    for _ in 0..n_max {
        let r: Vec<T> = f.iter().zip(&fn_cur).map(|(a, b)| *a - *b).collect();
        let max_ip = dict
            .atoms
            .iter()
            .map(|g| space.dot(g, &r).expect("inner-product space").abs())
            .fold(T::zero(), |m, x| m.max(x));
        if max_ip <= ip_tol {
            stop = OgaStop::ResidualOrthogonal;
            break;
        }
        let ff = space.dot(&fn_cur, &fn_cur)?;
        let fy = space.dot(&fn_cur, f)?;
        let mut best: Option<(usize, T, T, T)> = None; // (idx, alpha, beta, resid2)
        for (i, g) in dict.atoms.iter().enumerate() {
            let gg = space.dot(g, g)?;
            let fg = space.dot(&fn_cur, g)?;
            let gy = space.dot(g, f)?;
            // minimize ||f - alpha F - beta g||^2
            let (alpha, beta) = {
                let det = ff * gg - fg * fg;
                if det.abs() > cast::<T>(1e-14) * (ff * gg).max(T::one()) {
                    ((fy * gg - gy * fg) / det, (gy * ff - fy * fg) / det)
                } else {
                    // F and g dependent (or F = 0): single-variable fit on g
                    (T::zero(), gy / gg)
                }
            };
            let yy = space.dot(f, f)?;
            let resid2 = yy - cast::<T>(2.0) * (alpha * fy + beta * gy)
                + alpha * alpha * ff
                + cast::<T>(2.0) * alpha * beta * fg
                + beta * beta * gg;
            let better = match &best {
                None => true,
                Some((_, _, _, b2)) => resid2 < *b2,
            };
            if better {
                best = Some((i, alpha, beta, resid2));
            }
        }
        let (idx, alpha, beta, _) = best.expect("nonempty dictionary");
        let g = &dict.atoms[idx];
        inner_products.push(space.dot(g, &r)?.abs());
        max_inner_products.push(max_ip);
        for c in coeffs.iter_mut() {
            *c = *c * alpha;
        }
        coeffs.push(beta);
        selected.push(idx);
        for (fi, gi) in fn_cur.iter_mut().zip(g) {
            *fi = alpha * *fi + beta * *gi;
        }
        let r: Vec<T> = f.iter().zip(&fn_cur).map(|(a, b)| *a - *b).collect();
        residual_norms.push(space.norm(&r));
    }
    Ok(OgaTrace {
        selected,
        residual_norms,
        coefficients: coeffs,
        inner_products,
        max_inner_products,
        atom_residual_norms: Vec::new(),
        algorithm: Algorithm::Rga,
        skipped: 0,
        stop,
    })
}

/// Variation-norm certificate: the minimal l1 coefficient norm representing
/// `value`, or `None` when f is outside the dictionary span (the +infinity
/// sentinel).
#[derive(Debug, Clone, Serialize)]
#[serde(bound = "T: Serialize")]
pub struct VariationCertificate<T: Scalar> {
    /// None encodes +infinity (f not representable).
    pub value: Option<T>,
    /// Sparse witness (atom index, coefficient) reproducing f when finite.
    pub coefficients: Vec<(usize, T)>,
}

/// min sum |c_i| subject to sum c_i g_i = f, solved as an LP with the
/// coefficients split into positive and negative parts.
pub fn variation_norm<T: Scalar>(dict: &Dictionary<T>, f: &[T]) -> Result<VariationCertificate<T>> {
    let space = &dict.space;
    space.check_dim(f)?;
    let f_norm = space.norm(f);
    if f_norm == T::zero() {
        return Ok(VariationCertificate {
            value: Some(T::zero()),
            coefficients: Vec::new(),
        });
    }
    let m = dict.len();
    let d = space.dim;
    let mut a = vec![vec![T::zero(); 2 * m]; d];
    for (j, row) in a.iter_mut().enumerate() {
        for (i, g) in dict.atoms.iter().enumerate() {
            row[i] = g[j];
            row[m + i] = -g[j];
        }
    }
    let c = vec![T::one(); 2 * m];
    let feas_tol = cast::<T>(tol::TOL_LP_REL) * f_norm.max(T::one());
    let sol = solve_lp(&a, f, &c, feas_tol)?;
    match sol.status {
        LpStatus::Infeasible => Ok(VariationCertificate {
            value: None,
            coefficients: Vec::new(),
        }),
        LpStatus::Unbounded => Err(Error::SolverFailure("variation LP unbounded".into())),
        LpStatus::Optimal => {
            let mut coeffs = Vec::new();
            for i in 0..m {
                let ci = sol.x[i] - sol.x[m + i];
                if ci.abs() > cast::<T>(1e-12) * sol.objective.max(T::one()) {
                    coeffs.push((i, ci));
                }
            }
            Ok(VariationCertificate {
                value: Some(sol.objective),
                coefficients: coeffs,
            })
        }
    }
}

/// Best n-term approximation error E_n(f, D): exact minimum of ||f - g|| over
/// all n-subsets of the dictionary, least squares per subset.
pub fn best_n_term<T: Scalar>(dict: &Dictionary<T>, f: &[T], n: usize) -> Result<T> {
    let space = &dict.space;
    space.check_dim(f)?;
    let m = dict.len();
    let n = n.min(m);
    if n == 0 {
        return Ok(space.norm(f));
    }
    let subsets = match binom_u128(m as u64, n as u64) {
        Some(c) if c <= 1_000_000 => c,
        _ => {
            return Err(Error::BudgetExceeded(format!(
                "C({m}, {n}) subsets exceed the enumeration budget"
            )))
        }
    };
    let _ = subsets;
    let mut best = space.norm(f);
    let mut subset: Vec<usize> = (0..n).collect();
    loop {
        // distance via span projection, skipping dependent atoms
        let mut basis = OrthoBasis::new(space.clone())?;
        for i in &subset {
            match basis.extend(&dict.atoms[*i]) {
                Ok(()) | Err(Error::RankDeficient) => {}
                Err(e) => return Err(e),
            }
        }
        let d = basis.residual_norm(f)?;
        if d < best {
            best = d;
        }
        // next combination in lexicographic order
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(best);
            }
            i -= 1;
            if subset[i] != i + m - n {
                subset[i] += 1;
                for j in i + 1..n {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn binom_u128(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)?;
        acc /= (i + 1) as u128;
    }
    Some(acc)
}

/// The bound sequence 1/(b_0 + ... + b_n) with b_0 = 1/a_0, for n =
/// 0..=bs.len(); entry 0 is a_0 itself.
pub fn recurrence_bound<T: Scalar>(a0: T, bs: &[T]) -> Result<Vec<T>> {
    if a0 <= T::zero() {
        return Err(Error::InvalidParameter("a0 must be positive".into()));
    }
    let mut denom = T::one() / a0;
    let mut out = vec![a0];
    for b in bs {
        if *b < T::zero() {
            return Err(Error::InvalidParameter(
                "b terms must be nonnegative".into(),
            ));
        }
        denom = denom + *b;
        out.push(T::one() / denom);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct RecurrenceCheck {
    pub recurrence_ok: bool,
    pub bound_ok: bool,
}

/// Verifies that `a_seq` (with a_seq[0] = a_0) satisfies both the one-step
/// recurrence a_n <= a_{n-1} (1 - b_n a_{n-1}) and the closed-form bound.
pub fn check_recurrence<T: Scalar>(a_seq: &[T], bs: &[T]) -> Result<RecurrenceCheck> {
    if a_seq.is_empty() {
        return Err(Error::EmptySet);
    }
    if a_seq.len() != bs.len() + 1 {
        return Err(Error::DimensionMismatch {
            expected: bs.len() + 1,
            got: a_seq.len(),
        });
    }
    let bound = recurrence_bound(a_seq[0], bs)?;
    let slack: T = cast(1e-12);
    let mut recurrence_ok = true;
    let mut bound_ok = true;
    for n in 1..a_seq.len() {
        let prev = a_seq[n - 1];
        if a_seq[n] > prev * (T::one() - bs[n - 1] * prev) + slack {
            recurrence_ok = false;
        }
        if a_seq[n] > bound[n] + slack {
            bound_ok = false;
        }
    }
    Ok(RecurrenceCheck {
        recurrence_ok,
        bound_ok,
    })
}

/// K-functional upper estimate: inf over h in span(D) of
/// ||f - h|| + t ||h||_L1(D), by proximal gradient (ISTA) on the penalized
/// least-squares surrogate with the penalty weight re-tied to the current
/// residual norm. Any iterate is a valid upper bound; the best one is
/// returned.
pub fn k_functional<T: Scalar>(dict: &Dictionary<T>, f: &[T], t: T) -> Result<T> {
    Ok(k_functional_detail(dict, f, t)?.0)
}

/// As [`k_functional`], also returning the witness coefficients and their l1
/// norm.
pub fn k_functional_detail<T: Scalar>(
    dict: &Dictionary<T>,
    f: &[T],
    t: T,
) -> Result<(T, Vec<T>, T)> {
    if t <= T::zero() {
        return Err(Error::InvalidParameter("t must be positive".into()));
    }
    let space = &dict.space;
    space.check_dim(f)?;
    let m = dict.len();
    let f_norm = space.norm(f);
    if f_norm == T::zero() {
        return Ok((T::zero(), vec![T::zero(); m], T::zero()));
    }
    // Lipschitz constant of the smooth part: lambda_max of the Gram matrix,
    // by power iteration.
    let gram_vec = |c: &[T]| -> Vec<T> {
        // B^T B c with weighted inner products
        let mut img = vec![T::zero(); space.dim];
        for (ci, g) in c.iter().zip(&dict.atoms) {
            for (x, gi) in img.iter_mut().zip(g) {
                *x = *x + *ci * *gi;
            }
        }
        dict.atoms
            .iter()
            .map(|g| space.dot(g, &img).expect("inner-product space"))
            .collect()
    };
    let mut v = vec![T::one(); m];
    let mut lmax = T::one();
    for _ in 0..60 {
        let w = gram_vec(&v);
        let n = w.iter().map(|x| *x * *x).sum::<T>().sqrt();
        if n == T::zero() {
            break;
        }
        lmax = n / v.iter().map(|x| *x * *x).sum::<T>().sqrt();
        v = w.iter().map(|x| *x / n).collect();
    }
    let lstep = T::one() / (lmax * cast(1.05));

    let objective = |c: &[T]| -> (T, T) {
        let mut r = f.to_vec();
        for (ci, g) in c.iter().zip(&dict.atoms) {
            for (ri, gi) in r.iter_mut().zip(g) {
                *ri = *ri - *ci * *gi;
            }
        }
        let l1: T = c.iter().map(|x| x.abs()).sum();
        (space.norm(&r), l1)
    };

    let mut c = vec![T::zero(); m];
    let mut best = f_norm; // h = 0
    let mut best_c = c.clone();
    let mut mu = t * f_norm;
    for _outer in 0..25 {
        for _inner in 0..400 {
            // gradient of 1/2 ||f - Bc||^2
            let mut r = f.to_vec();
            for (ci, g) in c.iter().zip(&dict.atoms) {
                for (ri, gi) in r.iter_mut().zip(g) {
                    *ri = *ri - *ci * *gi;
                }
            }
            let grad: Vec<T> = dict
                .atoms
                .iter()
                .map(|g| -space.dot(g, &r).expect("inner-product space"))
                .collect();
            let thresh = mu * lstep;
            let mut moved = T::zero();
            for i in 0..m {
                let z = c[i] - lstep * grad[i];
                let nz = if z > thresh {
                    z - thresh
                } else if z < -thresh {
                    z + thresh
                } else {
                    T::zero()
                };
                moved = moved.max((nz - c[i]).abs());
                c[i] = nz;
            }
            if moved <= cast::<T>(tol::TOL_OPT) * f_norm.max(T::one()) {
                break;
            }
        }
        let (rn, l1) = objective(&c);
        let val = rn + t * l1;
        if val < best {
            best = val;
            best_c = c.clone();
        }
        let new_mu = t * rn.max(cast::<T>(1e-14) * f_norm);
        if (new_mu - mu).abs() <= cast::<T>(1e-12) * mu {
            break;
        }
        mu = new_mu;
    }
    let l1_best: T = best_c.iter().map(|x| x.abs()).sum();
    Ok((best, best_c, l1_best))
}
