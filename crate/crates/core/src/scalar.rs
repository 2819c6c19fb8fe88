//! Scalar abstractions.
//!
//! Three layers are used throughout the crate:
//!
//! * [`Ring`]: the bare arithmetic needed by [`Matrix`](crate::linalg::Matrix)
//!   and the vector helpers.
//! * [`Field`]: an ordered field that can be compared and converted to `f64`.
//!   The DVB element algebra and the pointwise grid/warp formulas are generic
//!   over it, so they run unchanged over `f32`, `f64` or exact rationals.
//! * [`Analytic`]: types that the expression evaluator understands, i.e. the
//!   floats and the forward-mode [`Jet`](crate::chartcalc::Jet) built on top
//!   of them.
//!
//! [`Real`] is the intersection used by the tangent-bundle models.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

/// Commutative ring with the operations used by the linear algebra helpers.
pub trait Ring:
    Clone
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Ring for T where
    T: Clone
        + Debug
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
{
}

/// Ordered field: `f32`, `f64`, `BigRational`.
pub trait Field:
    Ring + Num + Signed + PartialOrd + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// Lossy conversion used for residuals and pivot selection.
    fn approx(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Conversion from a sampled `f64`. Exact for rationals.
    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).expect("finite sample value")
    }
}

impl<T> Field for T where
    T: Ring + Num + Signed + PartialOrd + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
}

/// Scalars understood by the expression evaluator.
///
/// `primal` returns the underlying real value (the value of the value of ...
/// for nested jets); the evaluator uses it for domain checks.
pub trait Analytic:
    Clone
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    fn constant(c: f64) -> Self;
    fn primal(&self) -> f64;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn powi(&self, n: i32) -> Self;
}

macro_rules! analytic_float {
    ($t:ty) => {
        impl Analytic for $t {
            #[inline]
            fn constant(c: f64) -> Self {
                c as $t
            }
            #[inline]
            fn primal(&self) -> f64 {
                *self as f64
            }
            #[inline]
            fn sin(&self) -> Self {
                <$t>::sin(*self)
            }
            #[inline]
            fn cos(&self) -> Self {
                <$t>::cos(*self)
            }
            #[inline]
            fn exp(&self) -> Self {
                <$t>::exp(*self)
            }
            #[inline]
            fn ln(&self) -> Self {
                <$t>::ln(*self)
            }
            #[inline]
            fn powi(&self, n: i32) -> Self {
                <$t>::powi(*self, n)
            }
        }
    };
}

analytic_float!(f32);
analytic_float!(f64);

/// Real scalars: floats usable both as field elements and by the evaluator.
pub trait Real: Field + Analytic + Copy {}

impl<T> Real for T where T: Field + Analytic + Copy {}

/// `|lhs - rhs| / max(1, |lhs|, |rhs|)`.
///
/// Residuals are absolute for quantities of order one and relative beyond.
pub fn scaled_residual(lhs: f64, rhs: f64) -> f64 {
    let scale = 1f64.max(lhs.abs()).max(rhs.abs());
    (lhs - rhs).abs() / scale
}

/// Componentwise [`scaled_residual`] with a common scale.
pub fn scaled_residual_vec<F: Field>(lhs: &[F], rhs: &[F]) -> f64 {
    if lhs.len() != rhs.len() {
        return f64::INFINITY;
    }
    let scale = lhs
        .iter()
        .chain(rhs)
        .fold(1f64, |acc, x| acc.max(x.approx().abs()));
    lhs.iter()
        .zip(rhs)
        .map(|(l, r)| (l.clone() - r.clone()).approx().abs() / scale)
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn residual_is_absolute_near_unit_scale() {
        assert_eq!(scaled_residual(0.5, 0.25), 0.25);
        assert_eq!(scaled_residual(200.0, 100.0), 0.5);
    }

    #[test]
    fn rationals_are_fields() {
        fn id<F: Field>(x: F) -> F {
            x
        }
        let half = id(BigRational::from_f64_lossy(0.5));
        assert_eq!(half.approx(), 0.5);
        assert_eq!(scaled_residual_vec(&[half.clone()], &[half]), 0.0);
    }
}
