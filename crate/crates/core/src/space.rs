//! Finite-dimensional normed spaces: Euclidean, weighted-Euclidean (discretized
//! L2/H1), and the l_p family including p = infinity.

use crate::error::{Error, Result};
use crate::scalar::{cast, Scalar};
use serde::Serialize;

/// Norm descriptor of an [`AmbientSpace`].
///
/// `Euclidean` and `WeightedEuclidean` admit an inner product; the `Lp`
/// variants do not (except p = 2, which callers should express as
/// `Euclidean`). Operations that need an inner product reject the others.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Serialize")]
pub enum Norm<T: Scalar> {
    Euclidean,
    /// Per-coordinate positive quadrature weights: ||v||^2 = sum w_i v_i^2.
    WeightedEuclidean(Vec<T>),
    /// Finite p >= 1.
    Lp(T),
    LInf,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Serialize")]
pub struct AmbientSpace<T: Scalar> {
    pub dim: usize,
    pub norm: Norm<T>,
}

impl<T: Scalar> AmbientSpace<T> {
    pub fn euclidean(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be at least 1");
        Self {
            dim,
            norm: Norm::Euclidean,
        }
    }

    pub fn weighted(weights: Vec<T>) -> Self {
        assert!(!weights.is_empty(), "dimension must be at least 1");
        assert!(
            weights.iter().all(|w| *w > T::zero() && w.is_finite()),
            "all weights must be positive and finite"
        );
        Self {
            dim: weights.len(),
            norm: Norm::WeightedEuclidean(weights),
        }
    }

    pub fn lp(dim: usize, p: T) -> Self {
        assert!(dim >= 1, "dimension must be at least 1");
        assert!(p >= T::one(), "p must be at least 1");
        if p == cast(2.0) {
            Self::euclidean(dim)
        } else {
            Self {
                dim,
                norm: Norm::Lp(p),
            }
        }
    }

    pub fn linf(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be at least 1");
        Self {
            dim,
            norm: Norm::LInf,
        }
    }

    /// True when the space admits an inner product.
    pub fn is_inner_product(&self) -> bool {
        matches!(self.norm, Norm::Euclidean | Norm::WeightedEuclidean(_))
    }

    /// The exponent p when the norm belongs to the l_p family; `None` encodes
    /// p = infinity. Euclidean and weighted-Euclidean report p = 2.
    pub fn p_exponent(&self) -> Option<T> {
        match &self.norm {
            Norm::Euclidean | Norm::WeightedEuclidean(_) => Some(cast(2.0)),
            Norm::Lp(p) => Some(*p),
            Norm::LInf => None,
        }
    }

    pub fn check_dim(&self, v: &[T]) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        Ok(())
    }

    /// Inner product; errors on non-inner-product norms.
    pub fn dot(&self, a: &[T], b: &[T]) -> Result<T> {
        self.check_dim(a)?;
        self.check_dim(b)?;
        match &self.norm {
            Norm::Euclidean => Ok(a.iter().zip(b).map(|(x, y)| *x * *y).sum()),
            Norm::WeightedEuclidean(w) => Ok(a
                .iter()
                .zip(b)
                .zip(w)
                .map(|((x, y), wi)| *wi * *x * *y)
                .sum()),
            _ => Err(Error::NonEuclidean),
        }
    }

    pub fn norm(&self, v: &[T]) -> T {
        match &self.norm {
            Norm::Euclidean => v.iter().map(|x| *x * *x).sum::<T>().sqrt(),
            Norm::WeightedEuclidean(w) => v
                .iter()
                .zip(w)
                .map(|(x, wi)| *wi * *x * *x)
                .sum::<T>()
                .sqrt(),
            Norm::Lp(p) => {
                if v.is_empty() {
                    return T::zero();
                }
                // Scale out the max to avoid overflow of |v_i|^p.
                let mx = v.iter().fold(T::zero(), |m, x| m.max(x.abs()));
                if mx == T::zero() {
                    return T::zero();
                }
                let s: T = v.iter().map(|x| (x.abs() / mx).powf(*p)).sum();
                mx * s.powf(T::one() / *p)
            }
            Norm::LInf => v.iter().fold(T::zero(), |m, x| m.max(x.abs())),
        }
    }

    pub fn dist(&self, a: &[T], b: &[T]) -> T {
        let d: Vec<T> = a.iter().zip(b).map(|(x, y)| *x - *y).collect();
        self.norm(&d)
    }
}

/// a - b
pub fn sub<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| *x - *y).collect()
}

/// a + s * b
pub fn axpy<T: Scalar>(a: &[T], s: T, b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| *x + s * *y).collect()
}

/// s * a
pub fn scale<T: Scalar>(s: T, a: &[T]) -> Vec<T> {
    a.iter().map(|x| s * *x).collect()
}
