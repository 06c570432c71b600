//! Bias-filtered opinion dynamics on networks.
//!
//! Every agent holds an opinion vector on the probability simplex over `k`
//! alternatives and a fixed nonnegative bias vector. At each synchronous step
//! an agent adds its neighbours' opinions, filtered componentwise through its
//! own bias, to its current opinion and renormalizes:
//!
//! ```text
//! x_i(t+1) = (x_i(t) + sum_{j in N(i)} r_i * x_j(t)) / || x_i(t) + sum_{j in N(i)} r_i * x_j(t) ||_1
//! ```
//!
//! The crate provides the dynamics ([`model`]), fixed-point and Lyapunov
//! analysis including the closed-form two-agent case ([`analysis`]),
//! small-world graph generation and community detection ([`netgen`]), seeded
//! sampling ([`sampling`]) and the named network experiments
//! ([`experiments`]).
//!
//! The model and analysis code is generic over the scalar type (see
//! [`Scalar`] and [`Real`]); the aliases below fix it to `f64` or `f32`.

pub mod analysis;
pub mod error;
pub mod experiments;
pub mod model;
pub mod netgen;
pub mod network;
pub mod sampling;
pub mod scalar;

pub use error::{Error, Result};
pub use model::{degroot_step, run, step, BiasSet, OpinionState, RunOptions, Trajectory};
pub use network::Network;
pub use scalar::{Real, Scalar};

pub type OpinionStateF64 = OpinionState<f64>;
pub type OpinionStateF32 = OpinionState<f32>;
pub type BiasSetF64 = BiasSet<f64>;
pub type BiasSetF32 = BiasSet<f32>;
pub type TrajectoryF64 = Trajectory<f64>;
pub type TrajectoryF32 = Trajectory<f32>;
pub type AltPartition = analysis::AltPartition;
pub type TwoAgentClassF64 = analysis::TwoAgentClass<f64>;
pub type AgentFixedClassF64 = analysis::AgentFixedClass<f64>;
pub type Mat2F64 = analysis::Mat2<f64>;
