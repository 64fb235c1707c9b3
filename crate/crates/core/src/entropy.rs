//! Certified brackets for entropy numbers of finite sets and of symmetric
//! convex hulls, the volume lower bound, n-width surrogates, and the
//! Banach-Mazur factors.
//!
//! Entropy number eps_n(K): smallest radius such that 2^n balls cover K.
//! Every upper reported here is backed by an explicit cover construction
//! (k-center / exact partition / sparse-mean / lattice); every lower by a
//! packing or volume argument. Upper and lower therefore bracket the true
//! value by construction, which is all the one-sided inequalities need.

use crate::cover;
use crate::error::{Error, Result};
use crate::greedy::{run_greedy, GreedyBasis, PointCloud};
use crate::scalar::{cast, Scalar};
use crate::space::Norm;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EntropyMethod {
    VolumeLemma1,
    Packing,
    GreedyCover,
    ExactSmall,
    MaureySparse,
}

impl EntropyMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            EntropyMethod::VolumeLemma1 => "VOLUME_LEMMA1",
            EntropyMethod::Packing => "PACKING",
            EntropyMethod::GreedyCover => "GREEDY_COVER",
            EntropyMethod::ExactSmall => "EXACT_SMALL",
            EntropyMethod::MaureySparse => "MAUREY_SPARSE",
        }
    }
}

/// Explicit description of the cover achieving an upper bracket.
#[derive(Debug, Clone, Serialize)]
#[serde(bound = "T: Serialize")]
pub enum EntropyWitness<T: Scalar> {
    /// Materialized ball centers.
    Centers(Vec<Vec<T>>),
    /// All means of `sparsity` draws from the signed atoms plus zero; the
    /// center count (2m+1)^s stays within the 2^n budget by construction.
    SparseMeans { sparsity: usize, atom_count: usize },
    /// Product lattice on the coordinate box of the subspace spanned by
    /// `basis`: axis j carries `counts[j]` equispaced centers on
    /// [-box_radii[j], box_radii[j]], plus the out-of-subspace tail radius.
    ProjectedLattice {
        basis: Vec<Vec<T>>,
        box_radii: Vec<T>,
        counts: Vec<usize>,
        tail: T,
    },
}

#[derive(Debug, Clone, Serialize)]
#[serde(bound = "T: Serialize")]
pub struct EntropyEstimate<T: Scalar> {
    pub n: usize,
    pub lower: T,
    pub upper: T,
    pub method_lower: EntropyMethod,
    pub method_upper: EntropyMethod,
    pub witness: EntropyWitness<T>,
}

/// CSV rows `n,lower,upper,method_lower,method_upper`.
pub fn estimates_to_csv<T: Scalar>(ests: &[EntropyEstimate<T>]) -> String {
    let mut out = String::from("n,lower,upper,method_lower,method_upper\n");
    for e in ests {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            e.n,
            e.lower,
            e.upper,
            e.method_lower.as_str(),
            e.method_upper.as_str()
        ));
    }
    out
}

/// Largest ball count we are willing to expand as 2^n.
const MAX_N_EXPONENT: usize = 26;
/// Exact partition search budget: k^(m-1) assignments.
const EXACT_ENUM_BUDGET: u64 = 1 << 18;

/// Certified bracket for eps_n of a finite point set.
///
/// Upper: exact partition search on tiny instances (at most 4 balls within
/// the enumeration budget), otherwise greedy k-center with swap refinement
/// tightened by per-cluster minimum enclosing balls. Lower: half the packing
/// separation of 2^n + 1 farthest-first points. m <= 2^n points cover
/// themselves, giving (0, 0).
pub fn entropy_pointset<T: Scalar>(cloud: &PointCloud<T>, n: usize) -> Result<EntropyEstimate<T>> {
    if cloud.is_empty() {
        return Err(Error::EmptySet);
    }
    let m = cloud.len();
    if n > MAX_N_EXPONENT {
        // 2^n balls dwarf any desk-scale point count; points cover themselves.
        return Ok(EntropyEstimate {
            n,
            lower: T::zero(),
            upper: T::zero(),
            method_lower: EntropyMethod::ExactSmall,
            method_upper: EntropyMethod::ExactSmall,
            witness: EntropyWitness::Centers(cloud.points.clone()),
        });
    }
    let k = 1usize << n;
    if m <= k {
        return Ok(EntropyEstimate {
            n,
            lower: T::zero(),
            upper: T::zero(),
            method_lower: EntropyMethod::ExactSmall,
            method_upper: EntropyMethod::ExactSmall,
            witness: EntropyWitness::Centers(cloud.points.clone()),
        });
    }
    let exact_feasible = k <= 4 && {
        let mut cnt: u64 = 1;
        let mut ok = true;
        for _ in 0..m.saturating_sub(1) {
            cnt = cnt.saturating_mul(k as u64);
            if cnt > EXACT_ENUM_BUDGET {
                ok = false;
                break;
            }
        }
        ok
    };
    let dmat = cover::distance_matrix(&cloud.space, &cloud.points);
    if exact_feasible {
        let cov = cover::exact_cover(&cloud.space, &cloud.points, k)?;
        return Ok(EntropyEstimate {
            n,
            lower: cov.radius,
            upper: cov.radius,
            method_lower: EntropyMethod::ExactSmall,
            method_upper: EntropyMethod::ExactSmall,
            witness: EntropyWitness::Centers(cov.centers),
        });
    }
    let cov = cover::kcenter_cover(&cloud.space, &cloud.points, k)?;
    let lower = cover::packing_lower(&dmat, k);
    Ok(EntropyEstimate {
        n,
        lower,
        upper: cov.radius,
        method_lower: EntropyMethod::Packing,
        method_upper: EntropyMethod::GreedyCover,
        witness: EntropyWitness::Centers(cov.centers),
    })
}

/// ln of (n! V_n)^(1/n) with V_n the Euclidean unit-ball volume
/// pi^(n/2) / Gamma(n/2 + 1). Everything stays in log space.
fn ln_stirling_factor(n: usize) -> f64 {
    let nf = n as f64;
    let ln_nfact = libm::lgamma(nf + 1.0);
    let ln_vn = 0.5 * nf * std::f64::consts::PI.ln() - libm::lgamma(0.5 * nf + 1.0);
    (ln_nfact + ln_vn) / nf
}

/// (n! V_n)^(1/n): the constant in front of the entropy number in the
/// greedy convergence bounds. No overflow up to n = 10^6.
pub fn stirling_factor<T: Scalar>(n: usize) -> T {
    assert!(n >= 1);
    cast(ln_stirling_factor(n).exp())
}

/// Volume lower bound on eps_n(co(K)) from n vectors of K: the geometric
/// mean of the successive Gram-Schmidt residuals divided by (n! V_n)^(1/n).
/// Returns 0 when any residual vanishes (the bound degenerates).
pub fn volume_lower_bound<T: Scalar>(
    cloud_space: &crate::space::AmbientSpace<T>,
    vs: &[Vec<T>],
) -> Result<T> {
    if !cloud_space.is_inner_product() {
        return Err(Error::NonEuclidean);
    }
    let n = vs.len();
    if n == 0 {
        return Ok(T::zero());
    }
    let mut basis = crate::ortho::OrthoBasis::new(cloud_space.clone())?;
    let mut ln_sum = 0.0f64;
    for v in vs {
        let r = basis.residual_norm(v)?;
        let rf = r.to_f64().expect("residual converts to f64");
        // the negated compare also trips on NaN residuals
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(rf > 0.0) || r <= cast::<T>(crate::tol::TOL_RANK_REL) * cloud_space.norm(v) {
            return Ok(T::zero());
        }
        ln_sum += rf.ln();
        match basis.extend(v) {
            Ok(()) => {}
            Err(Error::RankDeficient) => return Ok(T::zero()),
            Err(e) => return Err(e),
        }
    }
    let ln_bound = ln_sum / n as f64 - ln_stirling_factor(n);
    Ok(cast(ln_bound.exp()))
}

/// The set whose symmetric convex hull co(K) is meant.
#[derive(Debug, Clone, Serialize)]
#[serde(bound = "T: Serialize")]
pub struct ConvexHullSet<T: Scalar> {
    pub generators: PointCloud<T>,
}

impl<T: Scalar> ConvexHullSet<T> {
    pub fn new(generators: PointCloud<T>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(Self { generators })
    }
}

/// Checks whether all generators are scalar multiples of the longest one;
/// returns that direction if so. The hull is then the segment [-u, u].
fn segment_direction<T: Scalar>(hull: &ConvexHullSet<T>) -> Option<Vec<T>> {
    let pts = &hull.generators.points;
    let space = &hull.generators.space;
    let (i_max, nmax) = pts
        .iter()
        .enumerate()
        .map(|(i, p)| (i, space.norm(p)))
        .fold(
            (0usize, T::zero()),
            |acc, (i, n)| if n > acc.1 { (i, n) } else { acc },
        );
    if nmax == T::zero() {
        return None;
    }
    let u = &pts[i_max];
    // anchor coordinate: largest |u_j|
    let j_star = (0..u.len())
        .max_by(|a, b| u[*a].abs().partial_cmp(&u[*b].abs()).expect("finite"))
        .expect("nonempty vector");
    let tol = cast::<T>(1e-12) * nmax;
    for p in pts {
        let t = p[j_star] / u[j_star];
        if t.abs() > T::one() + cast(1e-12) {
            return None;
        }
        let diff: Vec<T> = p.iter().zip(u).map(|(pi, ui)| *pi - t * *ui).collect();
        if space.norm(&diff) > tol {
            return None;
        }
    }
    Some(u.clone())
}

struct UpperCandidate<T: Scalar> {
    radius: T,
    method: EntropyMethod,
    witness: EntropyWitness<T>,
}

/// Sparse-mean cover radius: every point of co(K) lies within
/// max||g|| / sqrt(s) of a mean of s draws from the signed generators plus
/// zero; there are at most (2m+1)^s such means, which fits the 2^n budget for
/// the returned sparsity. Inner-product spaces only (the variance identity).
fn maurey_candidate<T: Scalar>(
    hull: &ConvexHullSet<T>,
    n: usize,
    max_norm: T,
) -> Option<UpperCandidate<T>> {
    if !hull.generators.space.is_inner_product() {
        return None;
    }
    let m = hull.generators.len() as f64;
    let s = ((n as f64) * std::f64::consts::LN_2 / (2.0 * m + 1.0).ln()).floor() as usize;
    if s == 0 {
        return None;
    }
    Some(UpperCandidate {
        radius: max_norm / cast::<T>(s as f64).sqrt(),
        method: EntropyMethod::MaureySparse,
        witness: EntropyWitness::SparseMeans {
            sparsity: s,
            atom_count: hull.generators.len(),
        },
    })
}

/// Subspace-projection cover: project the hull onto the span of the first r
/// greedy picks; every hull point has coordinate j bounded by the max over
/// generators (convex combinations cannot exceed it) and projection residual
/// bounded by sigma_r. An odd-count product lattice on that coordinate box,
/// with the per-axis counts allocated greedily under the 2^n budget, covers
/// the projection; the residual is paid as an additive tail. r = 0
/// degenerates to the single origin ball of radius max||g||.
fn projection_lattice_candidate<T: Scalar>(
    hull: &ConvexHullSet<T>,
    n: usize,
    max_norm: T,
) -> Option<UpperCandidate<T>> {
    let space = &hull.generators.space;
    if !space.is_inner_product() {
        return None;
    }
    let r_cap = 24usize.min(hull.generators.len()).min(space.dim);
    let trace = run_greedy(&hull.generators, r_cap, T::one(), 0).ok()?;
    let basis = match &trace.basis {
        GreedyBasis::Orthonormal(b) => b,
        GreedyBasis::Raw(_) => return None,
    };
    // coords[i][j] = <g_i, q_j>
    let coords: Vec<Vec<T>> = hull
        .generators
        .points
        .iter()
        .map(|g| basis.coefficients(g).expect("inner-product space"))
        .collect();
    let mut best: Option<UpperCandidate<T>> = None;
    let rank = basis.len();
    let mut consider = |radius: T, cand: UpperCandidate<T>| {
        let better = match &best {
            None => true,
            Some(b) => radius < b.radius,
        };
        if better {
            best = Some(cand);
        }
    };
    // r = 0: origin ball
    consider(
        max_norm,
        UpperCandidate {
            radius: max_norm,
            method: EntropyMethod::GreedyCover,
            witness: EntropyWitness::Centers(vec![vec![T::zero(); space.dim]]),
        },
    );
    let budget: u128 = 1u128 << n.min(100);
    for r in 1..=rank {
        let tail = trace.sigmas[r];
        let rho: Vec<T> = (0..r)
            .map(|j| {
                coords
                    .iter()
                    .map(|c| c[j].abs())
                    .fold(T::zero(), |m, x| m.max(x))
            })
            .collect();
        // counts[j] odd centers on axis j; per-axis error rho_j / counts_j;
        // grow the axis with the largest error while the product fits; the
        // iteration cap keeps huge budgets cheap (the cover stays valid,
        // merely not fully refined)
        let mut counts: Vec<u128> = vec![1; r];
        let mut steps = 0usize;
        while steps < 4000 {
            steps += 1;
            let mut order: Vec<usize> = (0..r).collect();
            order.sort_by(|a, b| {
                let ea = rho[*a] / cast::<T>(counts[*a] as f64);
                let eb = rho[*b] / cast::<T>(counts[*b] as f64);
                eb.partial_cmp(&ea).expect("finite errors")
            });
            let total: u128 = counts.iter().product();
            let mut grown = false;
            for j in order {
                if rho[j] == T::zero() {
                    continue;
                }
                let new_total = total / counts[j] * (counts[j] + 2);
                if new_total <= budget {
                    counts[j] += 2;
                    grown = true;
                    break;
                }
            }
            if !grown {
                break;
            }
        }
        let err2: T = (0..r)
            .map(|j| {
                let e = rho[j] / cast::<T>(counts[j] as f64);
                e * e
            })
            .sum();
        let radius = err2.sqrt() + tail;
        consider(
            radius,
            UpperCandidate {
                radius,
                method: EntropyMethod::GreedyCover,
                witness: EntropyWitness::ProjectedLattice {
                    basis: basis.columns[..r].to_vec(),
                    box_radii: rho,
                    counts: counts.iter().map(|c| *c as usize).collect(),
                    tail,
                },
            },
        );
    }
    best
}

/// Coefficient-lattice cover valid in any norm: quantize hull coefficients
/// toward zero on a (1/K)-grid of the l1 ball; the center count
/// sum_j 2^j C(m,j) C(K,j) must fit the 2^n budget, and the radius is
/// (1/K) * sum ||g_i||.
fn coefficient_lattice_candidate<T: Scalar>(
    hull: &ConvexHullSet<T>,
    n: usize,
) -> Option<UpperCandidate<T>> {
    let m = hull.generators.len();
    let norm_sum: T = hull
        .generators
        .points
        .iter()
        .map(|g| hull.generators.space.norm(g))
        .sum();
    let budget: u128 = 1u128 << n.min(100);
    let count_for = |k_levels: u64| -> Option<u128> {
        let mut total: u128 = 0;
        let jmax = m.min(k_levels as usize);
        for j in 0..=jmax {
            let mut term: u128 = 1u128 << j.min(100);
            term = term.checked_mul(binomial(m as u64, j as u64)?)?;
            term = term.checked_mul(binomial(k_levels, j as u64)?)?;
            total = total.checked_add(term)?;
            if total > budget {
                return Some(total);
            }
        }
        Some(total)
    };
    let mut best_k: u64 = 0;
    let mut k = 1u64;
    while k <= 1 << 20 {
        match count_for(k) {
            Some(c) if c <= budget => best_k = k,
            _ => break,
        }
        k += 1;
    }
    if best_k == 0 {
        return None;
    }
    Some(UpperCandidate {
        radius: norm_sum / cast::<T>(best_k as f64),
        method: EntropyMethod::GreedyCover,
        witness: EntropyWitness::SparseMeans {
            sparsity: best_k as usize,
            atom_count: m,
        },
    })
}

fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut num: u128 = 1;
    for i in 0..k {
        num = num.checked_mul((n - i) as u128)?;
        num /= (i + 1) as u128;
    }
    Some(num)
}

/// Certified bracket for eps_n of the symmetric convex hull co(K).
///
/// Lower: max of the Lemma-1 volume bound on the greedy-selected n-subset
/// (inner-product spaces) and the packing bound on the signed generators.
/// Upper: min over the segment-exact, sparse-mean, projection-lattice, and
/// coefficient-lattice covers. Every path has an explicit witness, so the
/// bracket is valid in exact arithmetic; no +infinity sentinel can occur
/// because the single origin ball always covers the hull.
pub fn entropy_hull<T: Scalar>(hull: &ConvexHullSet<T>, n: usize) -> Result<EntropyEstimate<T>> {
    let space = &hull.generators.space;
    let pts = &hull.generators.points;
    let max_norm = pts
        .iter()
        .map(|p| space.norm(p))
        .fold(T::zero(), |m, x| m.max(x));
    if max_norm == T::zero() {
        return Err(Error::DegenerateSet);
    }
    if n == 0 {
        // one ball centered at the origin is optimal up to the packing bound
        let mut signed = pts.clone();
        signed.extend(pts.iter().map(|p| p.iter().map(|x| -*x).collect()));
        let dmat = cover::distance_matrix(space, &signed);
        let lower = cover::packing_lower(&dmat, 1);
        return Ok(EntropyEstimate {
            n,
            lower,
            upper: max_norm,
            method_lower: EntropyMethod::Packing,
            method_upper: EntropyMethod::GreedyCover,
            witness: EntropyWitness::Centers(vec![vec![T::zero(); space.dim]]),
        });
    }

    // ---- lower bracket ----
    let mut lower = T::zero();
    let mut method_lower = EntropyMethod::Packing;
    if n <= MAX_N_EXPONENT {
        let mut signed = pts.clone();
        signed.extend(
            pts.iter()
                .map(|p| p.iter().map(|x| -*x).collect::<Vec<T>>()),
        );
        let dmat = cover::distance_matrix(space, &signed);
        lower = cover::packing_lower(&dmat, 1usize << n);
    }
    if space.is_inner_product() && n <= pts.len() {
        if let Ok(trace) = run_greedy(&hull.generators, n, T::one(), 0) {
            if trace.selected.len() == n {
                let sel: Vec<Vec<T>> = trace.selected.iter().map(|i| pts[*i].clone()).collect();
                let vb = volume_lower_bound(space, &sel)?;
                if vb > lower {
                    lower = vb;
                    method_lower = EntropyMethod::VolumeLemma1;
                }
            }
        }
    }

    // ---- upper bracket ----
    let mut candidates: Vec<UpperCandidate<T>> = Vec::new();
    if let Some(u) = segment_direction(hull) {
        let len = space.norm(&u);
        let radius = len / cast::<T>(2f64.powi(n as i32));
        let centers: Vec<Vec<T>> = if n <= 12 {
            (0..(1usize << n))
                .map(|j| {
                    let lam = cast::<T>((2 * j + 1) as f64 / 2f64.powi(n as i32) - 1.0);
                    u.iter().map(|x| lam * *x).collect()
                })
                .collect()
        } else {
            Vec::new()
        };
        // the segment [-u, u] has exactly this entropy, so tighten the lower
        // bracket too
        if radius > lower {
            lower = radius;
            method_lower = EntropyMethod::ExactSmall;
        }
        candidates.push(UpperCandidate {
            radius,
            method: EntropyMethod::ExactSmall,
            witness: EntropyWitness::Centers(centers),
        });
    } else {
        candidates.push(UpperCandidate {
            radius: max_norm,
            method: EntropyMethod::GreedyCover,
            witness: EntropyWitness::Centers(vec![vec![T::zero(); space.dim]]),
        });
        if let Some(c) = maurey_candidate(hull, n, max_norm) {
            candidates.push(c);
        }
        if let Some(c) = projection_lattice_candidate(hull, n, max_norm) {
            candidates.push(c);
        }
        if let Some(c) = coefficient_lattice_candidate(hull, n) {
            candidates.push(c);
        }
    }
    let best = candidates
        .into_iter()
        .min_by(|a, b| a.radius.partial_cmp(&b.radius).expect("finite radii"))
        .expect("at least one cover candidate");
    Ok(EntropyEstimate {
        n,
        lower: lower.min(best.radius),
        upper: best.radius,
        method_lower,
        method_upper: best.method,
        witness: best.witness,
    })
}

/// Banach-Mazur factor n^{|1/2 - 1/p|} for l_p spaces; `None` encodes
/// p = infinity.
pub fn delta_n_lp<T: Scalar>(p: Option<T>, n: usize) -> T {
    let half: f64 = 0.5;
    let inv_p = match p {
        Some(p) => 1.0 / p.to_f64().expect("finite p"),
        None => 0.0,
    };
    cast((n as f64).powf((half - inv_p).abs()))
}

/// Generic Banach-Mazur bound sqrt(n), valid in every n-dimensional space.
pub fn delta_n_general<T: Scalar>(n: usize) -> T {
    cast((n as f64).sqrt())
}

/// Dispatch on the ambient norm: exact exponent for the l_p family (inner
/// product spaces count as p = 2, giving 1), sqrt(n) otherwise.
pub fn delta_n_for_space<T: Scalar>(space: &crate::space::AmbientSpace<T>, n: usize) -> T {
    match &space.norm {
        Norm::Euclidean | Norm::WeightedEuclidean(_) => T::one(),
        Norm::Lp(p) => delta_n_lp(Some(*p), n),
        Norm::LInf => delta_n_lp(None, n),
    }
}

/// Reference-rate upper shape for the dyadic coordinate construction
/// (generators x_j e_j with x_j = 2^(-k alpha) on the k-th dyadic block),
/// evaluated at a ball budget of `n_balls` balls.
///
/// Sum of the three block-split terms with every suppressed constant set to
/// one: the volume term for the first 2^nd coordinates, the l1-ball covering
/// terms for the middle blocks, and the tail norm bound. This is a rate
/// diagnostic for log-log slope fits, not a certified radius: the middle
/// blocks use a reference covering rate whose constant is unspecified.
pub fn dyadic_block_rate_bound<T: Scalar>(alpha: T, p: T, n_balls: usize) -> T {
    let a = alpha.to_f64().expect("finite alpha");
    let pf = p.to_f64().expect("finite p");
    assert!(a > 1.0, "the construction requires alpha > 1");
    assert!(pf >= 1.0);
    let rate = a + 1.0 - 1.0 / pf;
    let nd = ((n_balls as f64) / 3.0).log2().max(0.0);
    let m = 2f64.powf(nd);
    let t0 = m.powf(-rate);
    let mut block_sum = 0.0;
    for k in 1..=200 {
        let kf = k as f64;
        block_sum += kf.sqrt() * 2f64.powf(-kf * (a - 1.0));
    }
    let tk = block_sum * m.powf(-rate);
    let tinf = 2f64.powf(-2.0 * nd * a);
    cast(t0 + tk + tinf)
}

/// Ordinary least-squares slope of ln(y) against ln(x); entries with
/// nonpositive y are skipped.
pub fn loglog_slope<T: Scalar>(xs: &[T], ys: &[T]) -> Option<T> {
    let mut pts: Vec<(f64, f64)> = Vec::new();
    for (x, y) in xs.iter().zip(ys) {
        let xf = x.to_f64()?;
        let yf = y.to_f64()?;
        if xf > 0.0 && yf > 0.0 {
            pts.push((xf.ln(), yf.ln()));
        }
    }
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-30 {
        return None;
    }
    Some(cast((n * sxy - sx * sy) / denom))
}

#[derive(Debug, Clone, Serialize)]
#[serde(bound = "T: Serialize")]
pub struct CarlRateReport<T: Scalar> {
    pub slope_d: T,
    pub slope_eps: T,
    pub alpha: T,
    pub slope_tolerance: T,
    pub pass: bool,
}

/// Rate-level consistency check for Carl's inequality: the entropy sequence
/// must decay at least as fast as the width sequence, up to a slope
/// tolerance. No constant is asserted.
pub fn carl_rate_check<T: Scalar>(
    d_seq: &[T],
    eps_seq: &[T],
    alpha: T,
) -> Result<CarlRateReport<T>> {
    if d_seq.len() != eps_seq.len() {
        return Err(Error::DimensionMismatch {
            expected: d_seq.len(),
            got: eps_seq.len(),
        });
    }
    let ns: Vec<T> = (1..=d_seq.len()).map(|i| cast(i as f64)).collect();
    let slope_d = loglog_slope(&ns, d_seq)
        .ok_or_else(|| Error::InvalidParameter("degenerate d_seq".into()))?;
    let slope_eps = loglog_slope(&ns, eps_seq)
        .ok_or_else(|| Error::InvalidParameter("degenerate eps_seq".into()))?;
    let tol: T = cast(0.15);
    Ok(CarlRateReport {
        slope_d,
        slope_eps,
        alpha,
        slope_tolerance: tol,
        pass: slope_eps <= slope_d + tol,
    })
}

/// Labeled upper bounds on the Kolmogorov width d_n(K): max distance of the
/// cloud to the greedy subspace and to the mean-square-optimal (principal)
/// subspace. The true width is not computed.
#[derive(Debug, Clone, Serialize)]
#[serde(bound = "T: Serialize")]
pub struct WidthUpperBounds<T: Scalar> {
    pub n: usize,
    pub greedy: T,
    pub mean_square: T,
}

pub fn width_upper_bounds<T: Scalar>(
    cloud: &PointCloud<T>,
    n: usize,
) -> Result<WidthUpperBounds<T>> {
    let trace = run_greedy(cloud, n.min(cloud.len()), T::one(), 0)?;
    let greedy = *trace.sigmas.last().expect("nonempty sigma sequence");
    let pca = crate::ortho::principal_subspace(&cloud.space, &cloud.points, n)?;
    let mut ms = T::zero();
    for p in &cloud.points {
        ms = ms.max(crate::distance::dist_to_span(&cloud.space, &pca, p)?);
    }
    Ok(WidthUpperBounds {
        n,
        greedy,
        mean_square: ms,
    })
}

/// Running minimum of the uppers by increasing n (entropy numbers are
/// non-increasing, individual cover heuristics need not be).
pub fn monotone_upper_envelope<T: Scalar>(ests: &[EntropyEstimate<T>]) -> Vec<T> {
    let mut out = Vec::with_capacity(ests.len());
    let mut cur = T::infinity();
    for e in ests {
        cur = cur.min(e.upper);
        out.push(cur);
    }
    out
}
