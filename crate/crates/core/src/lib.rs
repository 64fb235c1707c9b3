//! Greedy reduced-basis approximation, certified entropy-number brackets,
//! orthogonal greedy algorithms over dictionaries, and desk-scale elliptic
//! model problems, generic over the scalar type.
//!
//! The crate verifies inequalities of the form
//! `sigma_n <= factor(n) * epsilon_n-upper`: every entropy upper bound is
//! backed by an explicit covering construction, so a passing check is a
//! genuine certificate, not a heuristic.

// indexed loops are kept where they mirror the matrix/lattice math
#![allow(clippy::needless_range_loop)]

pub mod cover;
pub mod distance;
pub mod entropy;
pub mod error;
pub mod greedy;
pub mod lp;
pub mod oga;
pub mod ortho;
pub mod pde;
pub mod scalar;
pub mod space;
pub mod tol;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Concrete double-precision aliases; the default choice everywhere.
pub mod f64_api {
    pub type AmbientSpace = crate::space::AmbientSpace<f64>;
    pub type Norm = crate::space::Norm<f64>;
    pub type OrthoBasis = crate::ortho::OrthoBasis<f64>;
    pub type PointCloud = crate::greedy::PointCloud<f64>;
    pub type GreedyTrace = crate::greedy::GreedyTrace<f64>;
    pub type EntropyEstimate = crate::entropy::EntropyEstimate<f64>;
    pub type ConvexHullSet = crate::entropy::ConvexHullSet<f64>;
    pub type Dictionary = crate::oga::Dictionary<f64>;
    pub type OgaTrace = crate::oga::OgaTrace<f64>;
    pub type VariationCertificate = crate::oga::VariationCertificate<f64>;
    pub type EllipticProblem1D = crate::pde::EllipticProblem1D<f64>;
    pub type EllipticProblem2D = crate::pde::EllipticProblem2D<f64>;
    pub type CoefficientFamily = crate::pde::CoefficientFamily<f64>;
}

/// Single-precision aliases, for experiments where memory dominates.
pub mod f32_api {
    pub type AmbientSpace = crate::space::AmbientSpace<f32>;
    pub type Norm = crate::space::Norm<f32>;
    pub type OrthoBasis = crate::ortho::OrthoBasis<f32>;
    pub type PointCloud = crate::greedy::PointCloud<f32>;
    pub type GreedyTrace = crate::greedy::GreedyTrace<f32>;
    pub type EntropyEstimate = crate::entropy::EntropyEstimate<f32>;
    pub type ConvexHullSet = crate::entropy::ConvexHullSet<f32>;
    pub type Dictionary = crate::oga::Dictionary<f32>;
    pub type OgaTrace = crate::oga::OgaTrace<f32>;
    pub type VariationCertificate = crate::oga::VariationCertificate<f32>;
    pub type EllipticProblem1D = crate::pde::EllipticProblem1D<f32>;
    pub type EllipticProblem2D = crate::pde::EllipticProblem2D<f32>;
    pub type CoefficientFamily = crate::pde::CoefficientFamily<f32>;
}
