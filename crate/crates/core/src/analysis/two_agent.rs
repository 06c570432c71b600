//! Two agents, two alternatives.
//!
//! With `x1`, `x2` the agents' weight on the first alternative and biases
//! `r1 = [a1, b1]`, `r2 = [a2, b2]`, the dynamics reduce to
//!
//! ```text
//! x1+ = (x1 + a1 x2) / (1 + b1 + (a1 - b1) x2)
//! x2+ = (x2 + a2 x1) / (1 + b2 + (a2 - b2) x1)
//! ```
//!
//! whose fixed points satisfy `(a1 a2 - b1 b2)(x1^2 - x1) = 0`. The sign of
//! `a1 a2 - b1 b2` decides which corner is attracting.

use crate::error::{Error, Result};
use crate::scalar::{Real, Scalar};

/// `[[a, b], [c, d]]`.
pub type Mat2<T> = [[T; 2]; 2];

/// Residual allowed in the fixed-point equations of a continuum point.
const CONTINUUM_CHECK_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixedPointRegime {
    /// `a1 a2 > b1 b2`: both agents at the first alternative is the stable fixed point.
    StableAllOne,
    /// `a1 a2 < b1 b2`: both agents at the second alternative is the stable fixed point.
    StableAllZero,
    /// `a1 a2 = b1 b2`: a curve of fixed points.
    Continuum,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoAgentClass<T> {
    pub regime: FixedPointRegime,
    /// `a1 * a2`
    pub alpha_product: T,
    /// `b1 * b2`
    pub beta_product: T,
}

fn unpack<T: Scalar>(r1: &[T], r2: &[T]) -> Result<(T, T, T, T)> {
    for r in [r1, r2] {
        if r.len() != 2 {
            return Err(Error::UnsupportedDimension {
                expected: 2,
                got: r.len(),
            });
        }
        if r.iter().any(|&v| v < T::zero()) {
            return Err(Error::Domain("biases must be nonnegative".into()));
        }
    }
    Ok((r1[0], r1[1], r2[0], r2[1]))
}

/// Classification with exact comparison of the two products.
pub fn two_agent_fixed_points<T: Scalar>(r1: &[T], r2: &[T]) -> Result<TwoAgentClass<T>> {
    two_agent_fixed_points_with_tolerance(r1, r2, T::zero())
}

/// Classification treating `|a1 a2 - b1 b2| <= eq_tol` as the continuum case.
pub fn two_agent_fixed_points_with_tolerance<T: Scalar>(
    r1: &[T],
    r2: &[T],
    eq_tol: T,
) -> Result<TwoAgentClass<T>> {
    let (a1, b1, a2, b2) = unpack(r1, r2)?;
    let alpha_product = a1 * a2;
    let beta_product = b1 * b2;
    let gap = alpha_product - beta_product;
    let regime = if gap.abs() <= eq_tol {
        FixedPointRegime::Continuum
    } else if gap > T::zero() {
        FixedPointRegime::StableAllOne
    } else {
        FixedPointRegime::StableAllZero
    };
    Ok(TwoAgentClass {
        regime,
        alpha_product,
        beta_product,
    })
}

/// One step of the reduced two-agent map.
pub fn reduced_two_agent_map<T: Scalar>(r1: &[T], r2: &[T], x: [T; 2]) -> Result<[T; 2]> {
    let (a1, b1, a2, b2) = unpack(r1, r2)?;
    let [x1, x2] = x;
    let one = T::one();
    Ok([
        (x1 + a1 * x2) / (one + b1 + (a1 - b1) * x2),
        (x2 + a2 * x1) / (one + b2 + (a2 - b2) * x1),
    ])
}

/// Fixed-point equations in cross-multiplied form,
/// `x1 (a1 x2 + b1 (1 - x2)) - a1 x2` and the mirror for agent 2.
///
/// Both vanish exactly at the fixed points of the reduced map, including
/// boundary points where the fractional form is `0/0`.
pub fn fixed_point_equation_residuals<T: Scalar>(
    r1: &[T],
    r2: &[T],
    x1: T,
    x2: T,
) -> Result<[T; 2]> {
    let (a1, b1, a2, b2) = unpack(r1, r2)?;
    let one = T::one();
    Ok([
        x1 * (a1 * x2 + b1 * (one - x2)) - a1 * x2,
        x2 * (a2 * x1 + b2 * (one - x1)) - a2 * x1,
    ])
}

/// Agent 1's coordinate on the continuum of fixed points through `x2_star`,
/// `x1* = a1 x2* / (a1 x2* + b1 (1 - x2*))`.
///
/// The pair is checked against both fixed-point equations; biases outside
/// the continuum case fail that check.
pub fn continuum_fixed_point<T: Scalar>(r1: &[T], r2: &[T], x2_star: T) -> Result<T> {
    let (a1, b1, _, _) = unpack(r1, r2)?;
    if x2_star < T::zero() || x2_star > T::one() {
        return Err(Error::Domain(format!("x2* = {x2_star} is outside [0, 1]")));
    }
    let denom = a1 * x2_star + b1 * (T::one() - x2_star);
    if denom.is_zero() {
        return Err(Error::Degenerate(format!(
            "a1 x2* + b1 (1 - x2*) vanishes at x2* = {x2_star}"
        )));
    }
    let x1_star = a1 * x2_star / denom;
    let res = fixed_point_equation_residuals(r1, r2, x1_star, x2_star)?;
    let worst = if res[0].abs() > res[1].abs() {
        res[0].abs()
    } else {
        res[1].abs()
    };
    if worst > T::lit(CONTINUUM_CHECK_TOL) {
        return Err(Error::NotContinuum {
            residual: worst.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(x1_star)
}

/// Schur stability of a nonnegative 2x2 matrix: `a + d < 2` and
/// `a + d + b c < 1 + a d`.
pub fn schur_stable_2x2<T: Scalar>(m: Mat2<T>) -> Result<bool> {
    let [[a, b], [c, d]] = m;
    if [a, b, c, d].iter().any(|&v| v < T::zero()) {
        return Err(Error::Domain(
            "Schur test requires a nonnegative matrix".into(),
        ));
    }
    let two = T::one() + T::one();
    Ok(a + d < two && a + d + b * c < T::one() + a * d)
}

/// Perron root of a nonnegative 2x2 matrix.
pub fn dominant_eigenvalue_2x2<T: Real>(m: Mat2<T>) -> T {
    let [[a, b], [c, d]] = m;
    let half = T::lit(0.5);
    let four = T::lit(4.0);
    half * (a + d + ((a - d) * (a - d) + four * b * c).sqrt())
}

/// Jacobian of the reduced map at `(0, 0)` (both agents at the second alternative).
pub fn jacobian_origin_2agent<T: Scalar>(r1: &[T], r2: &[T]) -> Result<Mat2<T>> {
    let (a1, b1, a2, b2) = unpack(r1, r2)?;
    let one = T::one();
    Ok([
        [one / (one + b1), a1 / (one + b1)],
        [a2 / (one + b2), one / (one + b2)],
    ])
}

/// Jacobian at `(1, 1)` in the mirrored coordinates `1 - x`, obtained by
/// exchanging the roles of the two alternatives.
pub fn jacobian_all_one_2agent<T: Scalar>(r1: &[T], r2: &[T]) -> Result<Mat2<T>> {
    let (a1, b1, a2, b2) = unpack(r1, r2)?;
    jacobian_origin_2agent(&[b1, a1], &[b2, a2])
}
