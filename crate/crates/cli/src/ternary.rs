use biasdyn::{Error, OpinionState, Real};

/// Planar coordinates of each agent on the 2-simplex, with corners
/// `e1 -> (0, 0)`, `e2 -> (1, 0)`, `e3 -> (1/2, sqrt(3)/2)`.
pub fn ternary_project<T: Real>(state: &OpinionState<T>) -> Result<Vec<[T; 2]>, Error> {
    if state.k() != 3 {
        return Err(Error::UnsupportedDimension {
            expected: 3,
            got: state.k(),
        });
    }
    let half = T::lit(0.5);
    let height = T::lit(3.0).sqrt() * half;
    Ok(state
        .rows()
        .map(|x| [x[1] + half * x[2], height * x[2]])
        .collect())
}
