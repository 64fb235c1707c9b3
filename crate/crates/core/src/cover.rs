//! Covering and packing machinery for finite point sets: greedy k-center
//! (Gonzalez) with local-swap refinement, minimum enclosing balls, packing
//! separation lower bounds, and an exact small-instance partition search.
//! Ball centers are unconstrained points of the space, so cluster radii are
//! measured by minimum enclosing balls, not by in-set centers.

use crate::error::Result;
use crate::scalar::{cast, Scalar};
use crate::space::{AmbientSpace, Norm};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct Cover<T: Scalar> {
    pub centers: Vec<Vec<T>>,
    pub radius: T,
}

/// Pairwise distance matrix in the space's norm.
pub fn distance_matrix<T: Scalar>(space: &AmbientSpace<T>, pts: &[Vec<T>]) -> Vec<Vec<T>> {
    let m = pts.len();
    let mut d = vec![vec![T::zero(); m]; m];
    for i in 0..m {
        for j in i + 1..m {
            let dij = space.dist(&pts[i], &pts[j]);
            d[i][j] = dij;
            d[j][i] = dij;
        }
    }
    d
}

/// Greedy farthest-point k-center (Gonzalez) on in-set centers, then local
/// swap refinement. Returns the chosen center indices and the cover radius
/// with respect to those in-set centers.
pub fn gonzalez_kcenter<T: Scalar>(dmat: &[Vec<T>], k: usize) -> (Vec<usize>, T) {
    let m = dmat.len();
    assert!(k >= 1 && m >= 1);
    let radius_of = |centers: &[usize]| -> T {
        let mut r = T::zero();
        for i in 0..m {
            let mut best = T::infinity();
            for c in centers {
                best = best.min(dmat[i][*c]);
            }
            r = r.max(best);
        }
        r
    };
    let mut centers = vec![0usize];
    while centers.len() < k.min(m) {
        // farthest point from current centers, lowest index on ties
        let mut best_i = 0usize;
        let mut best_d = -T::one();
        for i in 0..m {
            let mut dmin = T::infinity();
            for c in &centers {
                dmin = dmin.min(dmat[i][*c]);
            }
            if dmin > best_d {
                best_d = dmin;
                best_i = i;
            }
        }
        centers.push(best_i);
    }
    let mut radius = radius_of(&centers);
    // first-improvement swap refinement, deterministic scan order
    let mut improved = true;
    let mut passes = 0;
    while improved && passes < 100 {
        improved = false;
        passes += 1;
        'outer: for ci in 0..centers.len() {
            for cand in 0..m {
                if centers.contains(&cand) {
                    continue;
                }
                let mut trial = centers.clone();
                trial[ci] = cand;
                let r = radius_of(&trial);
                if r < radius * (T::one() - cast(1e-12)) {
                    centers = trial;
                    radius = r;
                    improved = true;
                    break 'outer;
                }
            }
        }
    }
    (centers, radius)
}

/// Lower bound on the k-ball covering radius: any k+1 points must put two in
/// one ball, so half their minimum pairwise separation is a valid bound.
/// Uses farthest-first traversal to pick a well-separated k+1 subset.
pub fn packing_lower<T: Scalar>(dmat: &[Vec<T>], k: usize) -> T {
    let m = dmat.len();
    if m <= k {
        return T::zero();
    }
    let want = k + 1;
    let mut chosen = vec![0usize];
    while chosen.len() < want {
        let mut best_i = 0usize;
        let mut best_d = -T::one();
        for i in 0..m {
            if chosen.contains(&i) {
                continue;
            }
            let mut dmin = T::infinity();
            for c in &chosen {
                dmin = dmin.min(dmat[i][*c]);
            }
            if dmin > best_d {
                best_d = dmin;
                best_i = i;
            }
        }
        chosen.push(best_i);
    }
    let min_sep = |set: &[usize]| -> T {
        let mut s = T::infinity();
        for (a, i) in set.iter().enumerate() {
            for j in set.iter().skip(a + 1) {
                s = s.min(dmat[*i][*j]);
            }
        }
        s
    };
    let mut sep = min_sep(&chosen);
    // try to improve the worst member by swaps
    let mut improved = true;
    let mut passes = 0;
    while improved && passes < 50 {
        improved = false;
        passes += 1;
        'outer: for ci in 0..chosen.len() {
            for cand in 0..m {
                if chosen.contains(&cand) {
                    continue;
                }
                let mut trial = chosen.clone();
                trial[ci] = cand;
                let s = min_sep(&trial);
                if s > sep * (T::one() + cast(1e-12)) {
                    chosen = trial;
                    sep = s;
                    improved = true;
                    break 'outer;
                }
            }
        }
    }
    sep / cast(2.0)
}

/// Minimum enclosing ball. Exact for inner-product norms (Welzl) and l_inf
/// (coordinate box); for other norms falls back to the best in-set center,
/// which still yields a valid covering radius.
pub fn min_enclosing_ball<T: Scalar>(space: &AmbientSpace<T>, pts: &[Vec<T>]) -> Result<Cover<T>> {
    assert!(!pts.is_empty());
    // The returned radius is always recomputed as the true max distance from
    // the chosen center, so the certificate never depends on solver slack.
    let certify = |center: Vec<T>| -> Cover<T> {
        let radius = pts
            .iter()
            .fold(T::zero(), |m, p| m.max(space.dist(&center, p)));
        Cover {
            centers: vec![center],
            radius,
        }
    };
    match &space.norm {
        Norm::Euclidean => {
            let (c, _) = welzl_meb(pts);
            Ok(certify(c))
        }
        Norm::WeightedEuclidean(w) => {
            // isometric rescale z = sqrt(w) x, solve, map back
            let sw: Vec<T> = w.iter().map(|x| x.sqrt()).collect();
            let scaled: Vec<Vec<T>> = pts
                .iter()
                .map(|p| p.iter().zip(&sw).map(|(x, s)| *x * *s).collect())
                .collect();
            let (c, _) = welzl_meb(&scaled);
            let center: Vec<T> = c.iter().zip(&sw).map(|(x, s)| *x / *s).collect();
            Ok(certify(center))
        }
        Norm::LInf => {
            let d = space.dim;
            let mut center = vec![T::zero(); d];
            for (j, cj) in center.iter_mut().enumerate().take(d) {
                let mut lo = T::infinity();
                let mut hi = T::neg_infinity();
                for p in pts {
                    lo = lo.min(p[j]);
                    hi = hi.max(p[j]);
                }
                *cj = (lo + hi) / cast(2.0);
            }
            Ok(certify(center))
        }
        Norm::Lp(_) => {
            let mut best_c = 0usize;
            let mut best_r = T::infinity();
            for (i, c) in pts.iter().enumerate() {
                let mut r = T::zero();
                for p in pts {
                    r = r.max(space.dist(c, p));
                }
                if r < best_r {
                    best_r = r;
                    best_c = i;
                }
            }
            Ok(certify(pts[best_c].clone()))
        }
    }
}

/// Welzl's algorithm in plain Euclidean coordinates.
fn welzl_meb<T: Scalar>(pts: &[Vec<T>]) -> (Vec<T>, T) {
    let mut order: Vec<usize> = (0..pts.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    order.shuffle(&mut rng);
    let mut support: Vec<usize> = Vec::new();
    let ball = welzl_rec(pts, &order, order.len(), &mut support);
    ball.unwrap_or_else(|| {
        // Pathological degeneracy: fall back to best in-set center.
        let mut best = (0usize, T::infinity());
        for (i, c) in pts.iter().enumerate() {
            let mut r = T::zero();
            for p in pts {
                r = r.max(euclid_dist(c, p));
            }
            if r < best.1 {
                best = (i, r);
            }
        }
        (pts[best.0].clone(), best.1)
    })
}

fn euclid_dist<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .map(|(x, y)| (*x - *y) * (*x - *y))
        .sum::<T>()
        .sqrt()
}

fn welzl_rec<T: Scalar>(
    pts: &[Vec<T>],
    order: &[usize],
    n: usize,
    support: &mut Vec<usize>,
) -> Option<(Vec<T>, T)> {
    let d = pts[0].len();
    if n == 0 || support.len() == d + 1 {
        return ball_of_support(pts, support);
    }
    let idx = order[n - 1];
    let ball = welzl_rec(pts, order, n - 1, support);
    if let Some((c, r)) = &ball {
        if euclid_dist(c, &pts[idx]) <= *r * (T::one() + cast(1e-10)) + cast(1e-30) {
            return ball;
        }
    }
    support.push(idx);
    let out = welzl_rec(pts, order, n - 1, support);
    support.pop();
    out
}

/// Smallest ball with the support points on its boundary (circumball of the
/// affine-hull projection). Returns None for an empty support or a singular
/// configuration (which cannot be a true support set).
fn ball_of_support<T: Scalar>(pts: &[Vec<T>], support: &[usize]) -> Option<(Vec<T>, T)> {
    match support.len() {
        0 => None,
        1 => Some((pts[support[0]].clone(), T::zero())),
        _ => {
            let p0 = &pts[support[0]];
            let k = support.len() - 1;
            // center = p0 + sum l_i (p_i - p0); boundary conditions give a
            // k x k symmetric system 2 (p_i-p0).(p_j-p0) l_j = |p_i-p0|^2.
            let diffs: Vec<Vec<T>> = support[1..]
                .iter()
                .map(|i| pts[*i].iter().zip(p0).map(|(x, y)| *x - *y).collect())
                .collect();
            let mut a = vec![vec![T::zero(); k]; k];
            let mut b = vec![T::zero(); k];
            for i in 0..k {
                for j in 0..k {
                    a[i][j] = cast::<T>(2.0)
                        * diffs[i]
                            .iter()
                            .zip(&diffs[j])
                            .map(|(x, y)| *x * *y)
                            .sum::<T>();
                }
                b[i] = diffs[i].iter().map(|x| *x * *x).sum::<T>();
            }
            let l = gauss_solve(&mut a, &mut b)?;
            let mut center = p0.clone();
            for (li, diff) in l.iter().zip(&diffs) {
                for (cj, dj) in center.iter_mut().zip(diff) {
                    *cj = *cj + *li * *dj;
                }
            }
            let r = euclid_dist(&center, p0);
            Some((center, r))
        }
    }
}

/// Gaussian elimination with partial pivoting; None when singular.
fn gauss_solve<T: Scalar>(a: &mut [Vec<T>], b: &mut [T]) -> Option<Vec<T>> {
    let n = b.len();
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if a[r][col].abs() > a[piv][col].abs() {
                piv = r;
            }
        }
        if a[piv][col].abs() < cast(1e-12) {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                a[r][c] = a[r][c] - f * a[col][c];
            }
            b[r] = b[r] - f * b[col];
        }
    }
    let mut x = vec![T::zero(); n];
    for r in (0..n).rev() {
        let mut s = b[r];
        for c in r + 1..n {
            s = s - a[r][c] * x[c];
        }
        x[r] = s / a[r][r];
    }
    Some(x)
}

/// Certified k-ball cover of a finite set: Gonzalez + swaps for the
/// assignment, then per-cluster minimum enclosing balls (which can only
/// shrink the radius).
pub fn kcenter_cover<T: Scalar>(
    space: &AmbientSpace<T>,
    pts: &[Vec<T>],
    k: usize,
) -> Result<Cover<T>> {
    let dmat = distance_matrix(space, pts);
    let (centers_idx, _) = gonzalez_kcenter(&dmat, k);
    let mut clusters: Vec<Vec<usize>> = vec![Vec::new(); centers_idx.len()];
    for i in 0..pts.len() {
        let mut best = 0usize;
        for (ci, c) in centers_idx.iter().enumerate() {
            if dmat[i][*c] < dmat[i][centers_idx[best]] {
                best = ci;
            }
        }
        clusters[best].push(i);
    }
    let mut centers = Vec::new();
    let mut radius = T::zero();
    for cl in clusters.iter().filter(|c| !c.is_empty()) {
        let sub: Vec<Vec<T>> = cl.iter().map(|i| pts[*i].clone()).collect();
        let meb = min_enclosing_ball(space, &sub)?;
        radius = radius.max(meb.radius);
        centers.extend(meb.centers);
    }
    Ok(Cover { centers, radius })
}

/// Exact optimal k-ball cover by exhaustive partition search with
/// branch-and-bound on pairwise diameters. Caller gates instance size.
pub fn exact_cover<T: Scalar>(
    space: &AmbientSpace<T>,
    pts: &[Vec<T>],
    k: usize,
) -> Result<Cover<T>> {
    let m = pts.len();
    let dmat = distance_matrix(space, pts);
    // start from the heuristic cover as the incumbent
    let incumbent = kcenter_cover(space, pts, k)?;
    let mut best_radius = incumbent.radius;
    let mut best_assign: Option<Vec<usize>> = None;
    let mut assign = vec![usize::MAX; m];

    // Depth-first over assignments; point 0 pinned to ball 0 (balls are
    // interchangeable). Bound: half the max intra-ball pairwise distance.
    #[allow(clippy::too_many_arguments)]
    fn dfs<T: Scalar>(
        i: usize,
        m: usize,
        k: usize,
        dmat: &[Vec<T>],
        assign: &mut Vec<usize>,
        used: usize,
        best_radius: &mut T,
        best_assign: &mut Option<Vec<usize>>,
        space: &AmbientSpace<T>,
        pts: &[Vec<T>],
    ) {
        if i == m {
            // exact radius of this partition via MEBs
            let mut radius = T::zero();
            for b in 0..used {
                let sub: Vec<Vec<T>> = (0..m)
                    .filter(|j| assign[*j] == b)
                    .map(|j| pts[j].clone())
                    .collect();
                if sub.is_empty() {
                    continue;
                }
                if let Ok(meb) = min_enclosing_ball(space, &sub) {
                    radius = radius.max(meb.radius);
                } else {
                    return;
                }
            }
            if radius < *best_radius {
                *best_radius = radius;
                *best_assign = Some(assign.clone());
            }
            return;
        }
        let limit = (used + 1).min(k); // first unused ball breaks symmetry
        for b in 0..limit {
            // diameter-based lower bound on the radius of ball b with i added
            let mut diam = T::zero();
            for j in 0..i {
                if assign[j] == b {
                    diam = diam.max(dmat[i][j]);
                }
            }
            if diam / cast::<T>(2.0) >= *best_radius {
                continue;
            }
            assign[i] = b;
            dfs(
                i + 1,
                m,
                k,
                dmat,
                assign,
                used.max(b + 1),
                best_radius,
                best_assign,
                space,
                pts,
            );
            assign[i] = usize::MAX;
        }
    }
    dfs(
        0,
        m,
        k,
        &dmat,
        &mut assign,
        0,
        &mut best_radius,
        &mut best_assign,
        space,
        pts,
    );
    match best_assign {
        None => Ok(incumbent),
        Some(asg) => {
            let balls = asg.iter().copied().max().map(|b| b + 1).unwrap_or(0);
            let mut centers = Vec::new();
            let mut radius = T::zero();
            for b in 0..balls {
                let sub: Vec<Vec<T>> = (0..m)
                    .filter(|j| asg[*j] == b)
                    .map(|j| pts[j].clone())
                    .collect();
                if sub.is_empty() {
                    continue;
                }
                let meb = min_enclosing_ball(space, &sub)?;
                radius = radius.max(meb.radius);
                centers.extend(meb.centers);
            }
            Ok(Cover { centers, radius })
        }
    }
}

/// Post-hoc witness check: every point within `radius` (plus slack) of some
/// center.
pub fn verify_cover<T: Scalar>(
    space: &AmbientSpace<T>,
    pts: &[Vec<T>],
    centers: &[Vec<T>],
    radius: T,
) -> bool {
    let slack = cast::<T>(1e-9) * radius.max(T::one());
    pts.iter()
        .all(|p| centers.iter().any(|c| space.dist(p, c) <= radius + slack))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn meb_of_segment_is_midpoint() {
        let s = AmbientSpace::euclidean(2);
        let pts = vec![vec![0.0, 0.0], vec![2.0, 0.0]];
        let meb = min_enclosing_ball(&s, &pts).unwrap();
        assert!((meb.radius - 1.0f64).abs() < 1e-10);
        assert!((meb.centers[0][0] - 1.0f64).abs() < 1e-10);
    }

    #[test]
    fn meb_of_unit_square() {
        let s = AmbientSpace::euclidean(2);
        let pts = vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 1.0],
        ];
        let meb = min_enclosing_ball(&s, &pts).unwrap();
        assert!((meb.radius - 0.5f64 * 2.0f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn exact_cover_square_two_balls() {
        let s = AmbientSpace::euclidean(2);
        let pts = vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 1.0],
        ];
        let cov = exact_cover(&s, &pts, 2).unwrap();
        assert!((cov.radius - 0.5f64).abs() < 1e-10);
        assert!(verify_cover(&s, &pts, &cov.centers, cov.radius));
    }

    #[test]
    fn packing_bound_square() {
        let s = AmbientSpace::euclidean(2);
        let pts = vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 1.0],
        ];
        let dmat = distance_matrix(&s, &pts);
        let lb = packing_lower(&dmat, 2);
        assert!((lb - 0.5f64).abs() < 1e-10);
    }
}
