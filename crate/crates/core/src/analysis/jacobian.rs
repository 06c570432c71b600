use crate::error::{Error, Result};
use crate::scalar::Real;

/// Where the map may be evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FdDomain<T> {
    Unbounded,
    /// Every coordinate must stay in `[lower, upper]`; coordinates within `h`
    /// of a bound use one-sided differences pointing into the box.
    Box {
        lower: T,
        upper: T,
    },
}

/// Numerical Jacobian `J[r][c] = d map_r / d x_c` at `point`.
///
/// Central differences in the interior; second-order one-sided stencils
/// `(-3 f(x) + 4 f(x + h) - f(x + 2h)) / 2h` near a bound. Both are `O(h^2)`.
pub fn finite_difference_jacobian<T, F>(
    map: F,
    point: &[T],
    h: T,
    domain: FdDomain<T>,
) -> Result<Vec<Vec<T>>>
where
    T: Real,
    F: Fn(&[T]) -> Vec<T>,
{
    if h <= T::zero() || !h.is_finite() {
        return Err(Error::Domain(
            "finite-difference step must be positive".into(),
        ));
    }
    let eval = |x: &[T]| -> Result<Vec<T>> {
        let y = map(x);
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numeric(format!(
                "map returned a non-finite value at {x:?}"
            )));
        }
        Ok(y)
    };
    let f0 = eval(point)?;
    let m = f0.len();
    let mut jac = vec![vec![T::zero(); point.len()]; m];
    let two = T::lit(2.0);
    let three = T::lit(3.0);
    let four = T::lit(4.0);

    for c in 0..point.len() {
        let shifted = |delta: T| {
            let mut x = point.to_vec();
            x[c] = x[c] + delta;
            x
        };
        let (near_lower, near_upper) = match domain {
            FdDomain::Unbounded => (false, false),
            FdDomain::Box { lower, upper } => {
                if point[c] < lower || point[c] > upper {
                    return Err(Error::Domain(format!(
                        "coordinate {c} is outside the domain"
                    )));
                }
                (point[c] - lower < h, upper - point[c] < h)
            }
        };
        let column: Vec<T> = match (near_lower, near_upper) {
            (false, false) => {
                let fp = eval(&shifted(h))?;
                let fm = eval(&shifted(-h))?;
                fp.iter()
                    .zip(&fm)
                    .map(|(&a, &b)| (a - b) / (two * h))
                    .collect()
            }
            (true, false) => {
                let f1 = eval(&shifted(h))?;
                let f2 = eval(&shifted(two * h))?;
                (0..m)
                    .map(|r| (-three * f0[r] + four * f1[r] - f2[r]) / (two * h))
                    .collect()
            }
            (false, true) => {
                let f1 = eval(&shifted(-h))?;
                let f2 = eval(&shifted(-two * h))?;
                (0..m)
                    .map(|r| (three * f0[r] - four * f1[r] + f2[r]) / (two * h))
                    .collect()
            }
            (true, true) => {
                return Err(Error::Domain(format!(
                    "domain is narrower than 2h along coordinate {c}"
                )))
            }
        };
        for (r, v) in column.into_iter().enumerate() {
            jac[r][c] = v;
        }
    }
    Ok(jac)
}
