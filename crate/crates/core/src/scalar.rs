//! Scalar abstraction: every numerical routine in this crate is generic over a
//! floating-point scalar so the same code runs at f32 and f64.

use num_traits::{Float, FromPrimitive, ToPrimitive};
use std::fmt::{Debug, Display};
use std::iter::Sum;

/// Floating-point scalar used throughout the crate.
///
/// The bound set is the intersection of what the numerics need: ordinary
/// float arithmetic, conversions to/from f64 for constants and special
/// functions, summation, and printable output.
pub trait Scalar: Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + 'static {}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Shorthand for lifting an f64 constant into the scalar type.
///
/// Panics only if the target type cannot represent any f64, which cannot
/// happen for the provided impls (overflow saturates to infinity instead).
pub fn cast<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("f64 constant must convert into the scalar type")
}

/// Natural log of the Gamma function, computed in f64 and lifted back.
///
/// All factorial/volume arithmetic in the crate goes through this helper so
/// quantities like n! * V_n never overflow even at n = 10^6.
pub fn ln_gamma<T: Scalar>(x: T) -> T {
    cast(libm::lgamma(
        x.to_f64().expect("scalar must convert to f64"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_gamma_matches_factorials() {
        // Gamma(n+1) = n!
        let lg: f64 = ln_gamma(5.0);
        assert!((lg - (24.0f64).ln()).abs() < 1e-12);
        let lg32: f32 = ln_gamma(4.0f32);
        assert!((lg32 - (6.0f32).ln()).abs() < 1e-5);
    }

    #[test]
    fn cast_round_trips_small_constants() {
        let x: f32 = cast(0.5);
        assert_eq!(x, 0.5f32);
        let y: f64 = cast(1e-12);
        assert_eq!(y, 1e-12);
    }
}
