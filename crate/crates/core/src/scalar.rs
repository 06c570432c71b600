use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, Num, Signed, ToPrimitive};

/// Scalar field the dynamics are evaluated over.
///
/// Only field arithmetic and ordering are needed by the update rule, so
/// exact rationals work as well as floats.
pub trait Scalar:
    Num
    + Signed
    + Copy
    + PartialOrd
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Converts a literal tolerance or coefficient into the scalar type.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).unwrap_or_else(|| panic!("literal {v} not representable"))
    }

    /// Smallest power of two `h >= 2^-52` with `1 + h != 1`: the spacing of
    /// the type near one, capped at double precision for exact types.
    fn unit_spacing() -> f64 {
        let mut h = 1.0f64;
        while h > f64::EPSILON && Self::one() + Self::lit(h / 2.0) != Self::one() {
            h /= 2.0;
        }
        h
    }
}

impl<T> Scalar for T where
    T: Num
        + Signed
        + Copy
        + PartialOrd
        + FromPrimitive
        + ToPrimitive
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}

/// Floating-point scalars (`f32`, `f64`), needed wherever roots, logarithms
/// or finite differences appear.
pub trait Real: Scalar + Float {}

impl<T> Real for T where T: Scalar + Float {}

pub(crate) fn max_of<T: Scalar>(a: T, b: T) -> T {
    if b > a {
        b
    } else {
        a
    }
}

pub(crate) fn sum<T: Scalar>(xs: &[T]) -> T {
    xs.iter().fold(T::zero(), |acc, &v| acc + v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spacing_near_one() {
        assert_eq!(f64::unit_spacing(), f64::EPSILON);
        assert_eq!(f32::unit_spacing(), f32::EPSILON as f64);
        assert_eq!(num_rational::Rational64::unit_spacing(), f64::EPSILON);
    }
}
