//! Fixed points, dominance structure and stability.
//!
//! - [`fixed`]: residuals and the two-way classification of fixed agents.
//! - [`recessive`]: the dominant/recessive split of alternatives and the
//!   Lyapunov function that certifies suppression of recessive options.
//! - [`two_agent`]: closed-form analysis of two agents with two options.
//! - [`jacobian`]: finite-difference Jacobians used to check the analytic ones.

pub mod fixed;
pub mod jacobian;
pub mod recessive;
pub mod two_agent;

pub use fixed::{
    balance_error, classify_fixed_agent, filtered_neighbor_sum, fixed_point_residual,
    AgentFixedClass, DEFAULT_ZERO_TOL,
};
pub use jacobian::{finite_difference_jacobian, FdDomain};
pub use recessive::{lyapunov_value, recessive_set, AltPartition};
pub use two_agent::{
    continuum_fixed_point, dominant_eigenvalue_2x2, fixed_point_equation_residuals,
    jacobian_all_one_2agent, jacobian_origin_2agent, reduced_two_agent_map, schur_stable_2x2,
    two_agent_fixed_points, two_agent_fixed_points_with_tolerance, FixedPointRegime, Mat2,
    TwoAgentClass,
};
