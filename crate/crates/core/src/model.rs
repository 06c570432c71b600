//! State types and the synchronous bias-filtered update.

use log::warn;

use crate::error::{Error, Result};
use crate::network::Network;
use crate::scalar::{max_of, sum, Scalar};

/// Row-sum tolerance accepted when constructing an [`OpinionState`]. Types
/// coarser than `f64` get `k` times their spacing near one if that is larger.
pub const SIMPLEX_TOL: f64 = 1e-9;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_STEPS: usize = 10_000;

/// `n` agents by `k` alternatives; every row is a point on the simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct OpinionState<T> {
    n: usize,
    k: usize,
    values: Vec<T>,
}

impl<T: Scalar> OpinionState<T> {
    /// Row-major `n x k` values. Rows must be nonnegative and sum to one
    /// within [`SIMPLEX_TOL`] (widened for coarse types).
    pub fn new(n: usize, k: usize, values: Vec<T>) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(Error::Shape(format!(
                "opinion state must be nonempty, got {n}x{k}"
            )));
        }
        if values.len() != n * k {
            return Err(Error::Shape(format!(
                "expected {} values for {n}x{k}, got {}",
                n * k,
                values.len()
            )));
        }
        let tol = T::lit(SIMPLEX_TOL.max(k as f64 * T::unit_spacing()));
        for (i, row) in values.chunks_exact(k).enumerate() {
            if let Some(l) = row.iter().position(|&v| v < T::zero()) {
                return Err(Error::Domain(format!(
                    "agent {i}: negative opinion {} at alternative {l}",
                    row[l]
                )));
            }
            let s = sum(row);
            if (s - T::one()).abs() > tol {
                return Err(Error::Domain(format!(
                    "agent {i}: opinion sums to {s}, not 1"
                )));
            }
        }
        Ok(Self { n, k, values })
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let k = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != k) {
            return Err(Error::Shape("ragged opinion rows".into()));
        }
        Self::new(rows.len(), k, rows.concat())
    }

    /// Every agent at the same row.
    pub fn repeated(n: usize, row: &[T]) -> Result<Self> {
        Self::new(n, row.len(), row.repeat(n))
    }

    /// Every agent at the corner `e^corner`.
    pub fn corner_consensus(n: usize, k: usize, corner: usize) -> Result<Self> {
        if corner >= k {
            return Err(Error::Range {
                index: corner,
                len: k,
            });
        }
        let mut row = vec![T::zero(); k];
        row[corner] = T::one();
        Self::repeated(n, &row)
    }

    pub(crate) fn from_raw(n: usize, k: usize, values: Vec<T>) -> Self {
        debug_assert_eq!(values.len(), n * k);
        Self { n, k, values }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.values[i * self.k..(i + 1) * self.k]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.values.chunks_exact(self.k)
    }

    pub fn as_slice(&self) -> &[T] {
        &self.values
    }

    /// Largest per-agent 1-norm distance to `other`.
    pub fn max_row_change(&self, other: &Self) -> T {
        self.rows()
            .zip(other.rows())
            .map(|(a, b)| {
                a.iter()
                    .zip(b)
                    .fold(T::zero(), |acc, (&x, &y)| acc + (x - y).abs())
            })
            .fold(T::zero(), max_of)
    }

    /// Applies `perm` to the alternatives: old column `l` becomes `perm[l]`.
    pub fn permute_alternatives(&self, perm: &[usize]) -> Self {
        Self::from_raw(self.n, self.k, permute_columns(&self.values, self.k, perm))
    }

    /// Applies `perm` to the agents: old row `i` becomes row `perm[i]`.
    pub fn permute_agents(&self, perm: &[usize]) -> Self {
        Self::from_raw(self.n, self.k, permute_rows(&self.values, self.k, perm))
    }
}

/// Per-agent nonnegative bias vectors, the diagonals of the bias matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct BiasSet<T> {
    n: usize,
    k: usize,
    values: Vec<T>,
}

impl<T: Scalar> BiasSet<T> {
    pub fn new(n: usize, k: usize, values: Vec<T>) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(Error::Shape(format!(
                "bias set must be nonempty, got {n}x{k}"
            )));
        }
        if values.len() != n * k {
            return Err(Error::Shape(format!(
                "expected {} bias values for {n}x{k}, got {}",
                n * k,
                values.len()
            )));
        }
        if let Some(p) = values.iter().position(|&v| v < T::zero()) {
            return Err(Error::Domain(format!(
                "agent {}: negative bias {} at alternative {}",
                p / k,
                values[p],
                p % k
            )));
        }
        Ok(Self { n, k, values })
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let k = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != k) {
            return Err(Error::Shape("ragged bias rows".into()));
        }
        Self::new(rows.len(), k, rows.concat())
    }

    /// The same bias vector for all `n` agents.
    pub fn repeated(n: usize, row: &[T]) -> Result<Self> {
        Self::new(n, row.len(), row.repeat(n))
    }

    /// All-ones biases: identity bias matrices.
    pub fn identity(n: usize, k: usize) -> Result<Self> {
        Self::repeated(n, &vec![T::one(); k])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.values[i * self.k..(i + 1) * self.k]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.values.chunks_exact(self.k)
    }

    pub fn as_slice(&self) -> &[T] {
        &self.values
    }

    /// Agents whose bias vector is identically zero; such agents never move.
    pub fn zero_rows(&self) -> Vec<usize> {
        self.rows()
            .enumerate()
            .filter(|(_, r)| r.iter().all(|v| v.is_zero()))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn permute_alternatives(&self, perm: &[usize]) -> Self {
        Self {
            n: self.n,
            k: self.k,
            values: permute_columns(&self.values, self.k, perm),
        }
    }

    pub fn permute_agents(&self, perm: &[usize]) -> Self {
        Self {
            n: self.n,
            k: self.k,
            values: permute_rows(&self.values, self.k, perm),
        }
    }
}

fn permute_columns<T: Copy>(values: &[T], k: usize, perm: &[usize]) -> Vec<T> {
    let mut out = values.to_vec();
    for (src, dst) in values.chunks_exact(k).zip(out.chunks_exact_mut(k)) {
        for (l, &p) in perm.iter().enumerate() {
            dst[p] = src[l];
        }
    }
    out
}

fn permute_rows<T: Copy>(values: &[T], k: usize, perm: &[usize]) -> Vec<T> {
    let mut out = values.to_vec();
    for (i, &p) in perm.iter().enumerate() {
        out[p * k..(p + 1) * k].copy_from_slice(&values[i * k..(i + 1) * k]);
    }
    out
}

pub(crate) fn check_shapes<T: Scalar>(
    state: &OpinionState<T>,
    biases: &BiasSet<T>,
    net: &Network,
) -> Result<()> {
    if biases.n() != state.n() || biases.k() != state.k() {
        return Err(Error::Shape(format!(
            "state is {}x{} but biases are {}x{}",
            state.n(),
            state.k(),
            biases.n(),
            biases.k()
        )));
    }
    check_network(state, net)
}

fn check_network<T: Scalar>(state: &OpinionState<T>, net: &Network) -> Result<()> {
    if net.n() != state.n() {
        return Err(Error::Shape(format!(
            "state has {} agents but network has {} nodes",
            state.n(),
            net.n()
        )));
    }
    Ok(())
}

/// Bias-filtered neighbour sum `sum_{j in N(i)} r_i * x_j` for agent `i`.
pub(crate) fn filtered_sum_into<T: Scalar>(
    state: &OpinionState<T>,
    biases: &BiasSet<T>,
    net: &Network,
    i: usize,
    out: &mut [T],
) {
    out.iter_mut().for_each(|v| *v = T::zero());
    let r = biases.row(i);
    for &j in net.neighbors(i) {
        for ((o, &rl), &xl) in out.iter_mut().zip(r).zip(state.row(j)) {
            *o = *o + rl * xl;
        }
    }
}

fn step_into<T: Scalar>(
    state: &OpinionState<T>,
    biases: &BiasSet<T>,
    net: &Network,
    out: &mut Vec<T>,
) {
    let k = state.k();
    out.clear();
    out.resize(state.n() * k, T::zero());
    for (i, row) in out.chunks_exact_mut(k).enumerate() {
        filtered_sum_into(state, biases, net, i, row);
        for (o, &x) in row.iter_mut().zip(state.row(i)) {
            *o = *o + x;
        }
        // The numerator contains x_i itself, so its 1-norm is at least one.
        let total = sum(row);
        row.iter_mut().for_each(|v| *v = *v / total);
    }
}

/// One synchronous application of the update rule to every agent.
pub fn step<T: Scalar>(
    state: &OpinionState<T>,
    biases: &BiasSet<T>,
    net: &Network,
) -> Result<OpinionState<T>> {
    check_shapes(state, biases, net)?;
    let mut out = Vec::with_capacity(state.as_slice().len());
    step_into(state, biases, net, &mut out);
    Ok(OpinionState::from_raw(state.n(), state.k(), out))
}

/// Linear neighbourhood averaging `(x_i + sum_j x_j) / (1 + |N(i)|)`.
pub fn degroot_step<T: Scalar>(state: &OpinionState<T>, net: &Network) -> Result<OpinionState<T>> {
    check_network(state, net)?;
    let k = state.k();
    let mut out = state.as_slice().to_vec();
    for (i, row) in out.chunks_exact_mut(k).enumerate() {
        for &j in net.neighbors(i) {
            for (o, &x) in row.iter_mut().zip(state.row(j)) {
                *o = *o + x;
            }
        }
        let denom = T::from_usize(1 + net.degree(i)).expect("degree fits the scalar type");
        row.iter_mut().for_each(|v| *v = *v / denom);
    }
    Ok(OpinionState::from_raw(state.n(), k, out))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub max_steps: usize,
    /// Stop once the largest per-agent 1-norm change drops below this.
    pub tol: f64,
    /// Keep every `stride`-th state (the initial and final states are
    /// always kept).
    pub stride: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            max_steps: DEFAULT_MAX_STEPS,
            tol: DEFAULT_TOL,
            stride: 1,
        }
    }
}

impl RunOptions {
    pub fn new(max_steps: usize, tol: f64) -> Self {
        Self {
            max_steps,
            tol,
            stride: 1,
        }
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.stride = stride;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_steps == 0 {
            return Err(Error::Config("max_steps must be at least 1".into()));
        }
        if !(self.tol >= 0.0 && self.tol.is_finite()) {
            return Err(Error::Config(format!(
                "tol must be finite and >= 0, got {}",
                self.tol
            )));
        }
        if self.stride == 0 {
            return Err(Error::Config("stride must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    /// Recorded snapshots; `times[s]` is the step index of `states[s]`.
    pub states: Vec<OpinionState<T>>,
    pub times: Vec<usize>,
    pub converged: bool,
    /// Number of updates applied.
    pub steps: usize,
    /// Largest per-agent 1-norm change of the last update (zero if none ran).
    pub final_residual: T,
}

impl<T: Scalar> Trajectory<T> {
    pub fn initial_state(&self) -> &OpinionState<T> {
        &self.states[0]
    }

    pub fn final_state(&self) -> &OpinionState<T> {
        self.states
            .last()
            .expect("trajectory has at least one state")
    }
}

/// Iterates [`step`] until the per-step change drops below `opts.tol` or
/// `opts.max_steps` updates have been applied.
pub fn run<T: Scalar>(
    initial: &OpinionState<T>,
    biases: &BiasSet<T>,
    net: &Network,
    opts: RunOptions,
) -> Result<Trajectory<T>> {
    opts.validate()?;
    check_shapes(initial, biases, net)?;
    let frozen = biases.zero_rows();
    if !frozen.is_empty() {
        warn!(
            "{} agent(s) have all-zero bias and will not move: {:?}",
            frozen.len(),
            frozen
        );
    }

    let tol = T::lit(opts.tol);
    let mut states = vec![initial.clone()];
    let mut times = vec![0];
    let mut current = initial.clone();
    let mut buf = Vec::with_capacity(initial.as_slice().len());
    let mut residual = T::zero();
    let mut converged = false;
    let mut steps = 0;

    while steps < opts.max_steps {
        step_into(&current, biases, net, &mut buf);
        let next = OpinionState::from_raw(current.n(), current.k(), std::mem::take(&mut buf));
        residual = next.max_row_change(&current);
        buf = std::mem::replace(&mut current, next).values;
        steps += 1;
        if residual < tol {
            converged = true;
            break;
        }
        if steps % opts.stride == 0 && steps < opts.max_steps {
            states.push(current.clone());
            times.push(steps);
        }
    }
    if *times.last().unwrap() != steps {
        states.push(current);
        times.push(steps);
    }
    Ok(Trajectory {
        states,
        times,
        converged,
        steps,
        final_residual: residual,
    })
}
