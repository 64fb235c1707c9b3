//! Central numerical tolerances.
//!
//! The underlying theory is stated in exact arithmetic; these constants make
//! the orthogonalization, LP, and iterative-solver paths testable in floating
//! point. They are referenced everywhere instead of scattering literals.

/// Orthonormality slack for Gram-Schmidt bases: pairwise inner products of
/// basis columns must be within this of the identity.
pub const TOL_ORTHO: f64 = 1e-10;

/// Rank tolerance, relative to the norm of the candidate vector: a residual
/// below `TOL_RANK_REL * norm` counts as "already in the span".
pub const TOL_RANK_REL: f64 = 1e-12;

/// Convergence tolerance for iterative convex minimization (general-p
/// distances, K-functional proximal gradient).
pub const TOL_OPT: f64 = 1e-9;

/// LP feasibility tolerance, relative to the norm of the right-hand side.
pub const TOL_LP_REL: f64 = 1e-9;

/// Second Gram-Schmidt pass is triggered when the first pass removes more
/// than this fraction of the vector norm (the classical twice-is-enough rule,
/// threshold 1/sqrt(2)).
pub const REORTH_THRESHOLD: f64 = std::f64::consts::FRAC_1_SQRT_2;
