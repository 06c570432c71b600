use crate::error::{Error, Result};
use crate::model::{check_shapes, filtered_sum_into, step, BiasSet, OpinionState};
use crate::network::Network;
use crate::scalar::{max_of, sum, Scalar};

/// Default tolerance for treating a filtered neighbour sum as zero.
pub const DEFAULT_ZERO_TOL: f64 = 1e-12;

/// How an agent sits at (or away from) a fixed point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AgentFixedClass<T> {
    /// The agent still moves by this much (sup-norm) per step.
    NotFixed(T),
    /// The bias-filtered neighbour sum vanishes; the agent ignores its
    /// neighbours and any state is self-sustaining.
    Decoupled,
    /// The agent equals its normalized filtered neighbour sum.
    Balanced,
}

pub fn filtered_neighbor_sum<T: Scalar>(
    state: &OpinionState<T>,
    biases: &BiasSet<T>,
    net: &Network,
    agent: usize,
) -> Result<Vec<T>> {
    check_shapes(state, biases, net)?;
    if agent >= state.n() {
        return Err(Error::Range {
            index: agent,
            len: state.n(),
        });
    }
    let mut s = vec![T::zero(); state.k()];
    filtered_sum_into(state, biases, net, agent, &mut s);
    Ok(s)
}

/// Per-agent sup-norm distance between the state and its image under one step.
pub fn fixed_point_residual<T: Scalar>(
    state: &OpinionState<T>,
    biases: &BiasSet<T>,
    net: &Network,
) -> Result<Vec<T>> {
    let next = step(state, biases, net)?;
    Ok(next
        .rows()
        .zip(state.rows())
        .map(|(a, b)| {
            a.iter()
                .zip(b)
                .fold(T::zero(), |m, (&x, &y)| max_of(m, (x - y).abs()))
        })
        .collect())
}

/// Classifies one agent. `tol` bounds both the step residual (fixedness)
/// and the 1-norm of the filtered neighbour sum (decoupling).
pub fn classify_fixed_agent<T: Scalar>(
    state: &OpinionState<T>,
    biases: &BiasSet<T>,
    net: &Network,
    agent: usize,
    tol: T,
) -> Result<AgentFixedClass<T>> {
    let s = filtered_neighbor_sum(state, biases, net, agent)?;
    let residual = fixed_point_residual(state, biases, net)?[agent];
    if residual >= tol {
        return Ok(AgentFixedClass::NotFixed(residual));
    }
    if sum(&s) < tol {
        Ok(AgentFixedClass::Decoupled)
    } else {
        Ok(AgentFixedClass::Balanced)
    }
}

/// Sup-norm gap between `x_i` and `s / ||s||_1`, or `None` when the filtered
/// neighbour sum `s` is exactly zero.
///
/// At a state with step residual `eps` this is bounded by
/// `eps * (1 + ||s||_1) / ||s||_1`.
pub fn balance_error<T: Scalar>(
    state: &OpinionState<T>,
    biases: &BiasSet<T>,
    net: &Network,
    agent: usize,
) -> Result<Option<T>> {
    let s = filtered_neighbor_sum(state, biases, net, agent)?;
    let norm = sum(&s);
    if norm.is_zero() {
        return Ok(None);
    }
    Ok(Some(
        s.iter()
            .zip(state.row(agent))
            .fold(T::zero(), |m, (&sl, &xl)| max_of(m, (sl / norm - xl).abs())),
    ))
}
