//! Desk-scale elliptic solvers on (0,1) and (0,1)^2 with Dirichlet zero
//! boundary, random coefficient families, snapshot-manifold generation in a
//! discrete H^1 norm, and the coefficient-perturbation diagnostic.

use crate::error::{Error, Result};
use crate::greedy::PointCloud;
use crate::scalar::{cast, Scalar};
use crate::space::AmbientSpace;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// -(a u')' = f on (0,1), u(0) = u(1) = 0, conservative finite differences.
///
/// `grid_n` interior nodes x_i = i h with h = 1/(grid_n+1). The coefficient
/// is stored at the half nodes x_{i+1/2} (grid_n + 1 values), the right-hand
/// side at the interior nodes.
#[derive(Debug, Clone)]
pub struct EllipticProblem1D<T: Scalar> {
    pub grid_n: usize,
    pub a_half: Vec<T>,
    pub f: Vec<T>,
}

impl<T: Scalar> EllipticProblem1D<T> {
    /// Builds the problem by sampling `a` at the half nodes (midpoint
    /// evaluation) and `f` at the interior nodes.
    pub fn from_fns(grid_n: usize, a: impl Fn(T) -> T, f: impl Fn(T) -> T) -> Result<Self> {
        if grid_n == 0 {
            return Err(Error::InvalidParameter("grid_n must be positive".into()));
        }
        let h = T::one() / cast::<T>((grid_n + 1) as f64);
        let half = cast::<T>(0.5);
        let a_half: Vec<T> = (0..=grid_n)
            .map(|i| a((cast::<T>(i as f64) + half) * h))
            .collect();
        let f: Vec<T> = (1..=grid_n).map(|i| f(cast::<T>(i as f64) * h)).collect();
        let p = Self { grid_n, a_half, f };
        p.check()?;
        Ok(p)
    }

    /// Builds the problem from nodal coefficient samples a(x_0..x_{n+1}),
    /// using the harmonic mean of adjacent nodes at each half node (flux
    /// continuity for rough coefficients).
    pub fn from_nodal(grid_n: usize, a_nodes: &[T], f: Vec<T>) -> Result<Self> {
        if a_nodes.len() != grid_n + 2 {
            return Err(Error::DimensionMismatch {
                expected: grid_n + 2,
                got: a_nodes.len(),
            });
        }
        if f.len() != grid_n {
            return Err(Error::DimensionMismatch {
                expected: grid_n,
                got: f.len(),
            });
        }
        let two = cast::<T>(2.0);
        let a_half = (0..=grid_n)
            .map(|i| two * a_nodes[i] * a_nodes[i + 1] / (a_nodes[i] + a_nodes[i + 1]))
            .collect();
        let p = Self { grid_n, a_half, f };
        p.check()?;
        Ok(p)
    }

    fn check(&self) -> Result<()> {
        // the negated compare also rejects NaN coefficients
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if self.a_half.iter().any(|a| !(*a > T::zero())) {
            return Err(Error::InvalidParameter(
                "coefficient must be positive on the grid".into(),
            ));
        }
        Ok(())
    }

    pub fn h(&self) -> T {
        T::one() / cast::<T>((self.grid_n + 1) as f64)
    }
}

/// Solves the tridiagonal conservative system by the Thomas algorithm.
/// Returns u at the interior nodes.
pub fn solve_1d<T: Scalar>(p: &EllipticProblem1D<T>) -> Result<Vec<T>> {
    p.check()?;
    let n = p.grid_n;
    let h = p.h();
    let h2 = h * h;
    // row i (0-based for node x_{i+1}): (a_{i} + a_{i+1}) u_i - a_i u_{i-1}
    // - a_{i+1} u_{i+1} = h^2 f_i with a_* the half-node values
    let mut diag: Vec<T> = (0..n).map(|i| p.a_half[i] + p.a_half[i + 1]).collect();
    let mut rhs: Vec<T> = p.f.iter().map(|f| *f * h2).collect();
    // forward elimination; positivity of a keeps the pivots positive
    for i in 1..n {
        let w = -p.a_half[i] / diag[i - 1];
        diag[i] = diag[i] + w * p.a_half[i];
        rhs[i] = rhs[i] - w * rhs[i - 1];
    }
    let mut u = vec![T::zero(); n];
    u[n - 1] = rhs[n - 1] / diag[n - 1];
    for i in (0..n - 1).rev() {
        u[i] = (rhs[i] + p.a_half[i + 1] * u[i + 1]) / diag[i];
    }
    Ok(u)
}

/// -div(a grad u) = f on (0,1)^2, u = 0 on the boundary.
///
/// `grid_n` x `grid_n` interior nodes, h = 1/(grid_n+1). The coefficient is
/// piecewise constant on the (grid_n+1)^2 mesh cells; each stencil face uses
/// the harmonic mean of the two cells sharing it.
#[derive(Debug, Clone)]
pub struct EllipticProblem2D<T: Scalar> {
    pub grid_n: usize,
    /// a_cells[ci][cj] on cell [ci h, (ci+1)h] x [cj h, (cj+1)h].
    pub a_cells: Vec<Vec<T>>,
    /// f at interior nodes, row-major: f[(j-1)*grid_n + (i-1)] at (x_i, y_j).
    pub f: Vec<T>,
    pub max_cg_iters: usize,
}

impl<T: Scalar> EllipticProblem2D<T> {
    pub fn from_fns(grid_n: usize, a: impl Fn(T, T) -> T, f: impl Fn(T, T) -> T) -> Result<Self> {
        if grid_n == 0 {
            return Err(Error::InvalidParameter("grid_n must be positive".into()));
        }
        let h = T::one() / cast::<T>((grid_n + 1) as f64);
        let half = cast::<T>(0.5);
        let nc = grid_n + 1;
        let a_cells: Vec<Vec<T>> = (0..nc)
            .map(|ci| {
                (0..nc)
                    .map(|cj| {
                        a(
                            (cast::<T>(ci as f64) + half) * h,
                            (cast::<T>(cj as f64) + half) * h,
                        )
                    })
                    .collect()
            })
            .collect();
        let mut fv = Vec::with_capacity(grid_n * grid_n);
        for j in 1..=grid_n {
            for i in 1..=grid_n {
                fv.push(f(cast::<T>(i as f64) * h, cast::<T>(j as f64) * h));
            }
        }
        let p = Self {
            grid_n,
            a_cells,
            f: fv,
            max_cg_iters: 20_000,
        };
        p.check()?;
        Ok(p)
    }

    fn check(&self) -> Result<()> {
        // the negated compare also rejects NaN coefficients
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if self
            .a_cells
            .iter()
            .any(|row| row.iter().any(|a| !(*a > T::zero())))
        {
            return Err(Error::InvalidParameter(
                "coefficient must be positive on all cells".into(),
            ));
        }
        Ok(())
    }

    pub fn h(&self) -> T {
        T::one() / cast::<T>((self.grid_n + 1) as f64)
    }
}

fn harmonic<T: Scalar>(a: T, b: T) -> T {
    cast::<T>(2.0) * a * b / (a + b)
}

/// Applies the 5-point conservative operator (times h^2) to the interior
/// field u.
fn apply_2d<T: Scalar>(p: &EllipticProblem2D<T>, u: &[T], out: &mut [T]) {
    let n = p.grid_n;
    let at = |i: isize, j: isize| -> T {
        if i < 1 || j < 1 || i > n as isize || j > n as isize {
            T::zero()
        } else {
            u[(j as usize - 1) * n + (i as usize - 1)]
        }
    };
    for j in 1..=n {
        for i in 1..=n {
            // faces around node (i, j); cells indexed from 0
            let ae = harmonic(p.a_cells[i][j - 1], p.a_cells[i][j]);
            let aw = harmonic(p.a_cells[i - 1][j - 1], p.a_cells[i - 1][j]);
            let an = harmonic(p.a_cells[i - 1][j], p.a_cells[i][j]);
            let aso = harmonic(p.a_cells[i - 1][j - 1], p.a_cells[i][j - 1]);
            let uc = at(i as isize, j as isize);
            let v = ae * (uc - at(i as isize + 1, j as isize))
                + aw * (uc - at(i as isize - 1, j as isize))
                + an * (uc - at(i as isize, j as isize + 1))
                + aso * (uc - at(i as isize, j as isize - 1));
            out[(j - 1) * n + (i - 1)] = v;
        }
    }
}

/// Conjugate gradients on the symmetric positive definite 5-point system, to
/// relative residual 1e-10.
pub fn solve_2d<T: Scalar>(p: &EllipticProblem2D<T>) -> Result<Vec<T>> {
    p.check()?;
    let n2 = p.grid_n * p.grid_n;
    let h2 = p.h() * p.h();
    let b: Vec<T> = p.f.iter().map(|f| *f * h2).collect();
    let bnorm = b.iter().map(|x| *x * *x).sum::<T>().sqrt();
    if bnorm == T::zero() {
        return Ok(vec![T::zero(); n2]);
    }
    let tol = cast::<T>(1e-10) * bnorm;
    let mut u = vec![T::zero(); n2];
    let mut r = b.clone();
    let mut d = r.clone();
    let mut rr = r.iter().map(|x| *x * *x).sum::<T>();
    let mut ad = vec![T::zero(); n2];
    for _ in 0..p.max_cg_iters {
        if rr.sqrt() <= tol {
            return Ok(u);
        }
        apply_2d(p, &d, &mut ad);
        let dad = d.iter().zip(&ad).map(|(x, y)| *x * *y).sum::<T>();
        let alpha = rr / dad;
        for i in 0..n2 {
            u[i] = u[i] + alpha * d[i];
            r[i] = r[i] - alpha * ad[i];
        }
        let rr_new = r.iter().map(|x| *x * *x).sum::<T>();
        let beta = rr_new / rr;
        for i in 0..n2 {
            d[i] = r[i] + beta * d[i];
        }
        rr = rr_new;
    }
    if rr.sqrt() <= tol {
        Ok(u)
    } else {
        Err(Error::IterationBudgetExceeded(format!(
            "CG stalled at relative residual {:e}",
            (rr.sqrt() / bnorm).to_f64().unwrap_or(f64::NAN)
        )))
    }
}

/// The weighted space whose norm is the discrete H^1 norm of a 1D interior
/// field under [`embed_h1_1d`]: h-weighted nodal products plus 1/h-weighted
/// forward-difference products.
pub fn h1_space_1d<T: Scalar>(grid_n: usize) -> AmbientSpace<T> {
    let h = T::one() / cast::<T>((grid_n + 1) as f64);
    let mut w = vec![h; grid_n];
    w.extend(vec![T::one() / h; grid_n + 1]);
    AmbientSpace::weighted(w)
}

/// [u_1..u_n, d_0..d_n] with d_i = u_{i+1} - u_i and zero boundary padding.
pub fn embed_h1_1d<T: Scalar>(u: &[T]) -> Vec<T> {
    let n = u.len();
    let mut v = Vec::with_capacity(2 * n + 1);
    v.extend_from_slice(u);
    for i in 0..=n {
        let lo = if i == 0 { T::zero() } else { u[i - 1] };
        let hi = if i == n { T::zero() } else { u[i] };
        v.push(hi - lo);
    }
    v
}

/// Discrete H^1 norm of a 1D interior field.
pub fn h1_norm_1d<T: Scalar>(u: &[T]) -> T {
    h1_space_1d(u.len()).norm(&embed_h1_1d(u))
}

/// Weighted space matching [`embed_h1_2d`]: h^2 on nodal products, 1 on the
/// face differences.
pub fn h1_space_2d<T: Scalar>(grid_n: usize) -> AmbientSpace<T> {
    let h = T::one() / cast::<T>((grid_n + 1) as f64);
    let n = grid_n;
    let mut w = vec![h * h; n * n];
    w.extend(vec![T::one(); 2 * n * (n + 1)]);
    AmbientSpace::weighted(w)
}

/// [nodal values, x-direction forward differences, y-direction forward
/// differences], zero boundary padding, row-major.
pub fn embed_h1_2d<T: Scalar>(u: &[T], grid_n: usize) -> Vec<T> {
    let n = grid_n;
    assert_eq!(u.len(), n * n, "interior field size");
    let at = |i: usize, j: usize| -> T {
        if i < 1 || j < 1 || i > n || j > n {
            T::zero()
        } else {
            u[(j - 1) * n + (i - 1)]
        }
    };
    let mut v = Vec::with_capacity(n * n + 2 * n * (n + 1));
    v.extend_from_slice(u);
    for j in 1..=n {
        for i in 0..=n {
            v.push(at(i + 1, j) - at(i, j));
        }
    }
    for i in 1..=n {
        for j in 0..=n {
            v.push(at(i, j + 1) - at(i, j));
        }
    }
    v
}

pub fn h1_norm_2d<T: Scalar>(u: &[T], grid_n: usize) -> T {
    h1_space_2d(grid_n).norm(&embed_h1_2d(u, grid_n))
}

/// Truncated random Fourier series g(x) = sum_j xi_j j^{-s-1/2} cos(j pi x)
/// with xi_j uniform in [-1, 1]; `bound` dominates sup |g|.
#[derive(Debug, Clone)]
pub struct FourierDraw<T: Scalar> {
    coeffs: Vec<T>,
    pub bound: T,
}

impl<T: Scalar> FourierDraw<T> {
    pub fn draw(smoothness: T, terms: usize, rng: &mut ChaCha8Rng) -> Self {
        let mut coeffs = Vec::with_capacity(terms);
        let mut bound = T::zero();
        let expo = -(smoothness + cast::<T>(0.5));
        for j in 1..=terms {
            let amp = cast::<T>(j as f64).powf(expo);
            let xi: f64 = rng.gen_range(-1.0..=1.0);
            coeffs.push(cast::<T>(xi) * amp);
            bound = bound + amp;
        }
        Self { coeffs, bound }
    }

    pub fn eval(&self, x: T) -> T {
        let pi = cast::<T>(std::f64::consts::PI);
        let mut acc = T::zero();
        for (j, c) in self.coeffs.iter().enumerate() {
            acc = acc + *c * (cast::<T>((j + 1) as f64) * pi * x).cos();
        }
        acc
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(bound = "T: Serialize")]
pub enum FamilyKind<T: Scalar> {
    /// a(x) = m0 + (m1 - m0)(1 + g(x)/G)/2 with g the Fourier draw and G its
    /// sup bound, so a stays inside [m0, m1]. `smoothness` = k + alpha.
    HolderSmooth {
        smoothness: T,
        terms: usize,
        m0: T,
        m1: T,
    },
    /// 2D interface model: a = 2 above the curve y = phi(x), a = 1 below,
    /// phi(x) = clip_[0,1](1/2 + g(x)), assigned per cell by midpoint test.
    Geometric { smoothness: T, terms: usize },
}

#[derive(Debug, Clone, Serialize)]
#[serde(bound = "T: Serialize")]
pub struct CoefficientFamily<T: Scalar> {
    pub kind: FamilyKind<T>,
    pub sample_count: usize,
}

impl<T: Scalar> CoefficientFamily<T> {
    pub fn describe(&self) -> String {
        match &self.kind {
            FamilyKind::HolderSmooth {
                smoothness,
                terms,
                m0,
                m1,
            } => format!(
                "holder_smooth(s={},terms={},m0={},m1={})",
                smoothness, terms, m0, m1
            ),
            FamilyKind::Geometric { smoothness, terms } => {
                format!("geometric(s={},terms={})", smoothness, terms)
            }
        }
    }
}

/// One coefficient drawn from a family.
#[derive(Debug, Clone)]
pub enum CoefficientDraw<T: Scalar> {
    Smooth1D { m0: T, m1: T, g: FourierDraw<T> },
    Interface2D { phi: FourierDraw<T> },
}

impl<T: Scalar> CoefficientDraw<T> {
    pub fn from_family(kind: &FamilyKind<T>, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        match kind {
            FamilyKind::HolderSmooth {
                smoothness,
                terms,
                m0,
                m1,
            } => CoefficientDraw::Smooth1D {
                m0: *m0,
                m1: *m1,
                g: FourierDraw::draw(*smoothness, *terms, &mut rng),
            },
            FamilyKind::Geometric { smoothness, terms } => CoefficientDraw::Interface2D {
                phi: FourierDraw::draw(*smoothness, *terms, &mut rng),
            },
        }
    }

    /// 1D coefficient value; panics for the 2D interface draw.
    pub fn eval_1d(&self, x: T) -> T {
        match self {
            CoefficientDraw::Smooth1D { m0, m1, g } => {
                let half = cast::<T>(0.5);
                *m0 + (*m1 - *m0) * (T::one() + g.eval(x) / g.bound) * half
            }
            CoefficientDraw::Interface2D { .. } => panic!("interface draw is 2D"),
        }
    }

    /// Interface curve phi(x), clipped to [0, 1].
    pub fn eval_phi(&self, x: T) -> T {
        match self {
            CoefficientDraw::Interface2D { phi } => {
                let v = cast::<T>(0.5) + phi.eval(x);
                v.max(T::zero()).min(T::one())
            }
            CoefficientDraw::Smooth1D { .. } => panic!("smooth draw is 1D"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ManifoldConfig {
    pub grid_n: usize,
    pub seed: u64,
}

/// Snapshot manifold: solution fields embedded in the discrete H^1 space,
/// one point per coefficient draw, labels carrying the per-sample seed.
#[derive(Debug, Clone)]
pub struct ManifoldSample<T: Scalar> {
    pub cloud: PointCloud<T>,
    pub seeds: Vec<u64>,
    pub failed: usize,
    pub grid_n: usize,
    pub family_desc: String,
    pub seed: u64,
}

impl<T: Scalar> ManifoldSample<T> {
    /// Self-describing CSV: `#` header lines (grid, norm, family, seed), then
    /// one row per snapshot with its label and embedded coordinates.
    pub fn to_csv(&self) -> String {
        let norm_desc = match &self.cloud.space.norm {
            crate::space::Norm::WeightedEuclidean(_) => "h1_discrete",
            _ => "other",
        };
        let mut out = format!(
            "# grid_n={}\n# norm={}\n# family={}\n# seed={}\n# failed={}\n",
            self.grid_n, norm_desc, self.family_desc, self.seed, self.failed
        );
        out.push_str("label");
        for k in 0..self.cloud.space.dim {
            out.push_str(&format!(",c{k}"));
        }
        out.push('\n');
        for (p, s) in self.cloud.points.iter().zip(&self.seeds) {
            out.push_str(&format!("{s}"));
            for x in p {
                out.push_str(&format!(",{x}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Draws `family.sample_count` coefficients, solves each problem with f = 1,
/// and returns the solutions as points of the discrete H^1 space. Failed
/// solves are excluded and counted.
pub fn sample_manifold<T: Scalar>(
    family: &CoefficientFamily<T>,
    cfg: &ManifoldConfig,
) -> Result<ManifoldSample<T>> {
    if family.sample_count == 0 {
        return Err(Error::EmptySet);
    }
    let mut master = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut points = Vec::new();
    let mut seeds = Vec::new();
    let mut failed = 0usize;
    let is_2d = matches!(family.kind, FamilyKind::Geometric { .. });
    for _ in 0..family.sample_count {
        let sample_seed: u64 = master.gen();
        let draw = CoefficientDraw::from_family(&family.kind, sample_seed);
        let solved: Result<Vec<T>> = if is_2d {
            EllipticProblem2D::from_fns(
                cfg.grid_n,
                |x, y| {
                    if y >= draw.eval_phi(x) {
                        cast::<T>(2.0)
                    } else {
                        T::one()
                    }
                },
                |_, _| T::one(),
            )
            .and_then(|p| solve_2d(&p))
            .map(|u| embed_h1_2d(&u, cfg.grid_n))
        } else {
            EllipticProblem1D::from_fns(cfg.grid_n, |x| draw.eval_1d(x), |_| T::one())
                .and_then(|p| solve_1d(&p))
                .map(|u| embed_h1_1d(&u))
        };
        match solved {
            Ok(v) => {
                points.push(v);
                seeds.push(sample_seed);
            }
            Err(_) => failed += 1,
        }
    }
    if points.is_empty() {
        return Err(Error::SolverFailure("every snapshot solve failed".into()));
    }
    let space = if is_2d {
        h1_space_2d(cfg.grid_n)
    } else {
        h1_space_1d(cfg.grid_n)
    };
    let labels = seeds.iter().map(|s| s.to_string()).collect();
    let cloud = PointCloud::new(space, points)?.with_labels(labels);
    Ok(ManifoldSample {
        cloud,
        seeds,
        failed,
        grid_n: cfg.grid_n,
        family_desc: family.describe(),
        seed: cfg.seed,
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
#[serde(bound = "T: Serialize")]
pub struct PerturbationReport<T: Scalar> {
    /// ||u(a1) - u(a2)|| in the discrete H^1 norm.
    pub lhs: T,
    /// Discrete L_p norm of the gradient of u(a2).
    pub grad_lp: T,
    /// Discrete L_q norm of a1 - a2 with q = 2p/(p-2) (q = infinity at p=2).
    pub coeff_diff_lq: T,
    /// lhs / (grad_lp * coeff_diff_lq); 0 when both sides vanish.
    pub ratio: T,
}

/// Computes both sides of the coefficient-perturbation estimate on the 1D
/// grid: the H^1 distance of the two solutions against
/// ||grad u(a2)||_{L_p} ||a1 - a2||_{L_q}. Only the ratio is reported; the
/// constant is unknown.
pub fn perturbation_check<T: Scalar>(
    a1_half: &[T],
    a2_half: &[T],
    f: &[T],
    p_exp: T,
) -> Result<PerturbationReport<T>> {
    if a1_half.len() != a2_half.len() {
        return Err(Error::DimensionMismatch {
            expected: a1_half.len(),
            got: a2_half.len(),
        });
    }
    if p_exp < cast(2.0) {
        return Err(Error::InvalidParameter("p must be >= 2".into()));
    }
    let grid_n = a1_half.len() - 1;
    if f.len() != grid_n {
        return Err(Error::DimensionMismatch {
            expected: grid_n,
            got: f.len(),
        });
    }
    let p1 = EllipticProblem1D {
        grid_n,
        a_half: a1_half.to_vec(),
        f: f.to_vec(),
    };
    let p2 = EllipticProblem1D {
        grid_n,
        a_half: a2_half.to_vec(),
        f: f.to_vec(),
    };
    let u1 = solve_1d(&p1)?;
    let u2 = solve_1d(&p2)?;
    let diff: Vec<T> = u1.iter().zip(&u2).map(|(a, b)| *a - *b).collect();
    let lhs = h1_norm_1d(&diff);
    let h = p1.h();
    // gradient of u(a2) at the half nodes
    let grads: Vec<T> = (0..=grid_n)
        .map(|i| {
            let lo = if i == 0 { T::zero() } else { u2[i - 1] };
            let hi = if i == grid_n { T::zero() } else { u2[i] };
            (hi - lo) / h
        })
        .collect();
    let grad_lp = discrete_lp_norm(&grads, h, Some(p_exp));
    let q = if p_exp == cast(2.0) {
        None
    } else {
        Some(cast::<T>(2.0) * p_exp / (p_exp - cast::<T>(2.0)))
    };
    let dvec: Vec<T> = a1_half.iter().zip(a2_half).map(|(a, b)| *a - *b).collect();
    let coeff_diff_lq = discrete_lp_norm(&dvec, h, q);
    let denom = grad_lp * coeff_diff_lq;
    let ratio = if lhs == T::zero() {
        T::zero()
    } else {
        lhs / denom
    };
    Ok(PerturbationReport {
        lhs,
        grad_lp,
        coeff_diff_lq,
        ratio,
    })
}

/// (sum h |v_i|^p)^{1/p}; `p = None` means the max norm.
fn discrete_lp_norm<T: Scalar>(v: &[T], h: T, p: Option<T>) -> T {
    match p {
        None => v.iter().fold(T::zero(), |m, x| m.max(x.abs())),
        Some(p) => {
            let s: T = v.iter().map(|x| x.abs().powf(p)).sum();
            (s * h).powf(T::one() / p)
        }
    }
}

/// Summary of perturbation ratios over random coefficient pairs from a
/// smooth family.
#[derive(Debug, Clone, Serialize)]
#[serde(bound = "T: Serialize")]
pub struct PerturbationFamilyReport<T: Scalar> {
    pub ratios: Vec<T>,
    pub max: T,
    pub median: T,
    pub max_over_median: T,
    pub all_finite: bool,
}

pub fn perturbation_family_report<T: Scalar>(
    kind: &FamilyKind<T>,
    grid_n: usize,
    pairs: usize,
    p_exp: T,
    seed: u64,
) -> Result<PerturbationFamilyReport<T>> {
    if pairs == 0 {
        return Err(Error::EmptySet);
    }
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let h = T::one() / cast::<T>((grid_n + 1) as f64);
    let half_x = |i: usize| (cast::<T>(i as f64) + cast::<T>(0.5)) * h;
    let f = vec![T::one(); grid_n];
    let mut ratios = Vec::with_capacity(pairs);
    for _ in 0..pairs {
        let d1 = CoefficientDraw::from_family(kind, master.gen());
        let d2 = CoefficientDraw::from_family(kind, master.gen());
        let a1: Vec<T> = (0..=grid_n).map(|i| d1.eval_1d(half_x(i))).collect();
        let a2: Vec<T> = (0..=grid_n).map(|i| d2.eval_1d(half_x(i))).collect();
        let rep = perturbation_check(&a1, &a2, &f, p_exp)?;
        ratios.push(rep.ratio);
    }
    let mut sorted = ratios.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite ratios"));
    let max = sorted[sorted.len() - 1];
    let median = sorted[sorted.len() / 2];
    let all_finite = ratios.iter().all(|r| r.is_finite());
    let max_over_median = if median > T::zero() {
        max / median
    } else {
        T::infinity()
    };
    Ok(PerturbationFamilyReport {
        ratios,
        max,
        median,
        max_over_median,
        all_finite,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poisson_1d_matches_parabola() {
        let p = EllipticProblem1D::<f64>::from_fns(199, |_| 1.0, |_| 1.0).unwrap();
        let u = solve_1d(&p).unwrap();
        let h = p.h();
        let mut err = 0.0f64;
        for (i, ui) in u.iter().enumerate() {
            let x = (i as f64 + 1.0) * h;
            err = err.max((ui - x * (1.0 - x) / 2.0).abs());
        }
        assert!(err <= 1e-4, "max node error {err}");
    }

    #[test]
    fn coefficient_two_halves_solution() {
        let p = EllipticProblem1D::<f64>::from_fns(99, |_| 2.0, |_| 1.0).unwrap();
        let u = solve_1d(&p).unwrap();
        let h = p.h();
        for (i, ui) in u.iter().enumerate() {
            let x = (i as f64 + 1.0) * h;
            assert!((ui - x * (1.0 - x) / 4.0).abs() < 1e-10);
        }
    }

    #[test]
    fn zero_rhs_zero_solution() {
        let p = EllipticProblem1D::<f64>::from_fns(50, |_| 1.3, |_| 0.0).unwrap();
        let u = solve_1d(&p).unwrap();
        assert!(u.iter().all(|x| x.abs() < 1e-14));
    }

    #[test]
    fn maximum_principle_1d() {
        let p =
            EllipticProblem1D::<f64>::from_fns(80, |x| 1.0 + x, |x| (7.0 * x).sin().abs()).unwrap();
        let u = solve_1d(&p).unwrap();
        assert!(u.iter().all(|x| *x >= -1e-14));
    }

    #[test]
    fn poisson_2d_eigenfunction() {
        let pi = std::f64::consts::PI;
        let p = EllipticProblem2D::<f64>::from_fns(
            31,
            |_, _| 1.0,
            |x, y| 2.0 * pi * pi * (pi * x).sin() * (pi * y).sin(),
        )
        .unwrap();
        let u = solve_2d(&p).unwrap();
        let h = p.h();
        let mut err = 0.0f64;
        for j in 1..=31usize {
            for i in 1..=31usize {
                let exact = (pi * i as f64 * h).sin() * (pi * j as f64 * h).sin();
                err = err.max((u[(j - 1) * 31 + (i - 1)] - exact).abs());
            }
        }
        assert!(err < 2e-3, "max error {err}");
    }

    #[test]
    fn h1_norm_consistency() {
        // analytic H^1 norm of x(1-x)/2 is sqrt(1/120 + 1/12)
        let p = EllipticProblem1D::<f64>::from_fns(399, |_| 1.0, |_| 1.0).unwrap();
        let u = solve_1d(&p).unwrap();
        let num = h1_norm_1d(&u);
        let exact = (11.0f64 / 120.0).sqrt();
        assert!(
            (num - exact).abs() / exact < 0.01,
            "num {num} exact {exact}"
        );
    }

    #[test]
    fn smooth_family_stays_in_band() {
        let kind = FamilyKind::HolderSmooth {
            smoothness: 2.0,
            terms: 24,
            m0: 1.0,
            m1: 3.0,
        };
        let d = CoefficientDraw::<f64>::from_family(&kind, 7);
        for i in 0..=100 {
            let a = d.eval_1d(i as f64 / 100.0);
            assert!((1.0..=3.0).contains(&a));
        }
    }

    #[test]
    fn perturbation_identical_coefficients() {
        let a: Vec<f64> = vec![1.5; 41];
        let f = vec![1.0; 40];
        let rep = perturbation_check(&a, &a, &f, 2.0).unwrap();
        assert_eq!(rep.lhs, 0.0);
        assert_eq!(rep.ratio, 0.0);
    }

    #[test]
    fn manifold_single_sample() {
        let fam = CoefficientFamily {
            kind: FamilyKind::HolderSmooth {
                smoothness: 2.0,
                terms: 8,
                m0: 1.0,
                m1: 2.0,
            },
            sample_count: 1,
        };
        let ms = sample_manifold(
            &fam,
            &ManifoldConfig {
                grid_n: 30,
                seed: 3,
            },
        )
        .unwrap();
        assert_eq!(ms.cloud.len(), 1);
        assert_eq!(ms.failed, 0);
        let norm = ms.cloud.space.norm(&ms.cloud.points[0]);
        assert!(norm > 0.0);
    }
}
