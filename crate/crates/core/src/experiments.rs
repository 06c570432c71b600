//! Named end-to-end scenarios and outcome metrics.
//!
//! Two-agent scenarios (`fig1a`-`fig1c`) pit two agents with different
//! biases against each other on a single edge. The network scenarios
//! (`fig2_correlated`, `fig2_random`) run 500 agents on a Watts-Strogatz
//! graph with a majority bias `[0.8, 0.09, 0.11]` and a contrarian minority
//! bias `[0.11, 0.09, 0.8]`, the minority being either the smallest detected
//! community or a random set of 52 nodes.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::analysis::{
    fixed_point_equation_residuals, fixed_point_residual, lyapunov_value, recessive_set,
    two_agent_fixed_points,
};
use crate::error::{Error, Result};
use crate::model::{run, BiasSet, OpinionState, RunOptions, Trajectory};
use crate::netgen::{self, detect_communities, CommunityPartition};
use crate::network::Network;
use crate::sampling::{
    assign_biases_by_community, assign_biases_random, sample_opinions, SeededRng, StreamLabel,
};
use crate::scalar::{max_of, Scalar};

pub const MAJORITY_BIAS: [f64; 3] = [0.8, 0.09, 0.11];
pub const MINORITY_BIAS: [f64; 3] = [0.11, 0.09, 0.8];
pub const FIG2_N: usize = 500;
pub const FIG2_RANDOM_MINORITY: usize = 52;

/// Mass on recessive alternatives above which a network run is reported as
/// not having suppressed them.
pub const RECESSIVE_MASS_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scenario {
    Fig1a,
    Fig1b,
    Fig1c,
    Fig2Correlated,
    Fig2Random,
}

impl Scenario {
    pub const ALL: [Scenario; 5] = [
        Self::Fig1a,
        Self::Fig1b,
        Self::Fig1c,
        Self::Fig2Correlated,
        Self::Fig2Random,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Fig1a => "fig1a",
            Self::Fig1b => "fig1b",
            Self::Fig1c => "fig1c",
            Self::Fig2Correlated => "fig2_correlated",
            Self::Fig2Random => "fig2_random",
        }
    }

    pub fn is_two_agent(self) -> bool {
        matches!(self, Self::Fig1a | Self::Fig1b | Self::Fig1c)
    }

    /// Bias vectors of the two agents in the two-agent scenarios.
    pub fn two_agent_biases(self) -> Option<([f64; 2], [f64; 2])> {
        match self {
            Self::Fig1a => Some(([1.0, 0.0], [0.0, 1.0])),
            Self::Fig1b => Some(([0.7, 0.3], [0.3, 0.7])),
            Self::Fig1c => Some(([0.7, 0.3], [0.45, 0.55])),
            _ => None,
        }
    }

    /// Default run options. The opposed extreme biases of `fig1a` approach
    /// their corners only like `1/t`, so that scenario runs to a much tighter
    /// tolerance and keeps every 1000th state.
    pub fn default_run_options(self) -> RunOptions {
        match self {
            Self::Fig1a => RunOptions {
                max_steps: 10_000_000,
                tol: 1e-13,
                stride: 1000,
            },
            Self::Fig1b | Self::Fig1c => RunOptions {
                max_steps: 1_000_000,
                tol: 1e-12,
                stride: 1,
            },
            Self::Fig2Correlated | Self::Fig2Random => RunOptions {
                max_steps: 2000,
                tol: 1e-10,
                stride: 10,
            },
        }
    }

    /// Builds the scenario with `overrides` applied.
    pub fn setup(self, overrides: &Overrides) -> Result<Setup> {
        let mut opts = self.default_run_options();
        if let Some(tol) = overrides.tol {
            opts.tol = tol;
        }
        if let Some(max_steps) = overrides.max_steps {
            opts.max_steps = max_steps;
        }
        if let Some(stride) = overrides.stride {
            opts.stride = stride;
        }
        opts.validate()?;

        if let Some((r1, r2)) = self.two_agent_biases() {
            if overrides.n.is_some()
                || overrides.ring_degree.is_some()
                || overrides.rewire_p.is_some()
                || overrides.minority_count.is_some()
            {
                return Err(Error::Config(format!(
                    "{self} takes only tol, max_steps, stride, x1 and x2 overrides"
                )));
            }
            let x1 = overrides.x1.clone().unwrap_or_else(|| vec![0.5, 0.5]);
            let x2 = overrides.x2.clone().unwrap_or_else(|| vec![0.5, 0.5]);
            return Ok(Setup {
                graph: GraphSpec::Given(Network::path(2)?),
                biases: BiasSpec::Given(BiasSet::from_rows(&[r1.to_vec(), r2.to_vec()])?),
                initial: InitialSpec::Given(OpinionState::from_rows(&[x1, x2])?),
                run: opts,
            });
        }

        if overrides.x1.is_some() || overrides.x2.is_some() {
            return Err(Error::Config(format!(
                "{self} does not take x1/x2 overrides"
            )));
        }
        let graph = GraphSpec::WattsStrogatz {
            n: overrides.n.unwrap_or(FIG2_N),
            ring_degree: overrides.ring_degree.unwrap_or(netgen::DEFAULT_RING_DEGREE),
            rewire_p: overrides.rewire_p.unwrap_or(netgen::DEFAULT_REWIRE_P),
        };
        let majority = MAJORITY_BIAS.to_vec();
        let minority = MINORITY_BIAS.to_vec();
        let biases = match self {
            Self::Fig2Correlated => {
                if overrides.minority_count.is_some() {
                    return Err(Error::Config(
                        "fig2_correlated takes its minority from the smallest community".into(),
                    ));
                }
                BiasSpec::ByCommunity {
                    majority,
                    minority,
                    community: MinoritySelector::Smallest,
                }
            }
            _ => BiasSpec::Random {
                majority,
                minority,
                minority_count: overrides.minority_count.unwrap_or(FIG2_RANDOM_MINORITY),
            },
        };
        Ok(Setup {
            graph,
            biases,
            initial: InitialSpec::UniformSimplex,
            run: opts,
        })
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown scenario '{s}'")))
    }
}

/// Documented scenario overrides.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub n: Option<usize>,
    pub ring_degree: Option<usize>,
    pub rewire_p: Option<f64>,
    pub tol: Option<f64>,
    pub max_steps: Option<usize>,
    pub stride: Option<usize>,
    pub minority_count: Option<usize>,
    pub x1: Option<Vec<f64>>,
    pub x2: Option<Vec<f64>>,
}

impl Overrides {
    pub const KEYS: [&'static str; 9] = [
        "n",
        "ring_degree",
        "rewire_p",
        "tol",
        "max_steps",
        "stride",
        "minority_count",
        "x1",
        "x2",
    ];

    /// Parses a string map; unknown keys and unparsable values are config errors.
    pub fn from_map(map: &BTreeMap<String, String>) -> Result<Self> {
        fn num<T: FromStr>(key: &str, v: &str) -> Result<T> {
            v.trim()
                .parse()
                .map_err(|_| Error::Config(format!("override '{key}': cannot parse '{v}'")))
        }
        fn vector(key: &str, v: &str) -> Result<Vec<f64>> {
            v.split(',').map(|p| num(key, p)).collect()
        }
        let mut o = Self::default();
        for (key, v) in map {
            match key.as_str() {
                "n" => o.n = Some(num(key, v)?),
                "ring_degree" => o.ring_degree = Some(num(key, v)?),
                "rewire_p" => o.rewire_p = Some(num(key, v)?),
                "tol" => o.tol = Some(num(key, v)?),
                "max_steps" => o.max_steps = Some(num(key, v)?),
                "stride" => o.stride = Some(num(key, v)?),
                "minority_count" => o.minority_count = Some(num(key, v)?),
                "x1" => o.x1 = Some(vector(key, v)?),
                "x2" => o.x2 = Some(vector(key, v)?),
                other => {
                    return Err(Error::Config(format!(
                        "unknown override '{other}' (expected one of {})",
                        Self::KEYS.join(", ")
                    )))
                }
            }
        }
        Ok(o)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GraphSpec {
    WattsStrogatz {
        n: usize,
        ring_degree: usize,
        rewire_p: f64,
    },
    Given(Network),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinoritySelector {
    Smallest,
    Id(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub enum BiasSpec {
    Given(BiasSet<f64>),
    /// Same vector for everyone.
    Uniform(Vec<f64>),
    ByCommunity {
        majority: Vec<f64>,
        minority: Vec<f64>,
        community: MinoritySelector,
    },
    Random {
        majority: Vec<f64>,
        minority: Vec<f64>,
        minority_count: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialSpec {
    /// Independent uniform draws on the simplex, `k` taken from the biases.
    UniformSimplex,
    Given(OpinionState<f64>),
}

/// Everything needed to run one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct Setup {
    pub graph: GraphSpec,
    pub biases: BiasSpec,
    pub initial: InitialSpec,
    pub run: RunOptions,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub scenario: String,
    pub seed: u64,
    pub network: Network,
    pub biases: BiasSet<f64>,
    /// Agents carrying the minority bias (empty when not applicable).
    pub minority: Vec<usize>,
    pub trajectory: Trajectory<f64>,
    pub metrics: BTreeMap<String, f64>,
    /// Agents per alternative by argmax of the final state.
    pub cluster_histogram: Vec<usize>,
    pub partition_used: Option<CommunityPartition>,
}

impl ExperimentResult {
    pub fn final_state(&self) -> &OpinionState<f64> {
        self.trajectory.final_state()
    }

    pub fn metric(&self, name: &str) -> f64 {
        self.metrics.get(name).copied().unwrap_or(f64::NAN)
    }
}

pub fn run_scenario(
    scenario: Scenario,
    seed: u64,
    overrides: &Overrides,
) -> Result<ExperimentResult> {
    let setup = scenario.setup(overrides)?;
    execute(scenario.name(), &setup, seed)
}

/// Builds graph, biases and initial state from `setup`, runs the dynamics
/// and computes the outcome metrics.
pub fn execute(label: &str, setup: &Setup, seed: u64) -> Result<ExperimentResult> {
    let network = match &setup.graph {
        GraphSpec::WattsStrogatz {
            n,
            ring_degree,
            rewire_p,
        } => netgen::watts_strogatz(*n, *ring_degree, *rewire_p, seed)?,
        GraphSpec::Given(net) => net.clone(),
    };
    let n = network.n();
    let mut partition_used = None;
    let mut minority = Vec::new();
    let biases = match &setup.biases {
        BiasSpec::Given(b) => b.clone(),
        BiasSpec::Uniform(r) => BiasSet::repeated(n, r)?,
        BiasSpec::ByCommunity {
            majority,
            minority: minor,
            community,
        } => {
            let partition = detect_communities(&network)?;
            let id = match community {
                MinoritySelector::Smallest => partition.smallest(),
                MinoritySelector::Id(id) => *id,
            };
            let b = assign_biases_by_community(&partition, majority, minor, id)?;
            if id < partition.count() {
                minority = partition.members(id);
            }
            partition_used = Some(partition);
            b
        }
        BiasSpec::Random {
            majority,
            minority: minor,
            minority_count,
        } => {
            let mut rng = SeededRng::new(seed, StreamLabel::BiasAssignment);
            let (b, members) = assign_biases_random(n, majority, minor, *minority_count, &mut rng)?;
            minority = members;
            b
        }
    };
    let initial = match &setup.initial {
        InitialSpec::UniformSimplex => {
            let mut rng = SeededRng::new(seed, StreamLabel::Opinions);
            sample_opinions(n, biases.k(), &mut rng)?
        }
        InitialSpec::Given(s) => s.clone(),
    };

    let trajectory = run(&initial, &biases, &network, setup.run)?;
    let final_state = trajectory.final_state();
    let cluster_histogram = argmax_clusters(final_state);

    let mut metrics = BTreeMap::new();
    let partition = recessive_set(&biases);
    let recessive_mass: f64 = final_state
        .rows()
        .map(|r| partition.recessive.iter().map(|&l| r[l]).sum::<f64>())
        .sum();
    metrics.insert("initial_dispersion".into(), dispersion(&initial));
    metrics.insert("dispersion".into(), dispersion(final_state));
    metrics.insert("final_residual".into(), trajectory.final_residual);
    metrics.insert("steps".into(), trajectory.steps as f64);
    metrics.insert(
        "converged".into(),
        if trajectory.converged { 1.0 } else { 0.0 },
    );
    metrics.insert("lyapunov".into(), lyapunov_value(final_state, &partition));
    metrics.insert("recessive_mass".into(), recessive_mass);
    metrics.insert(
        "clusters".into(),
        cluster_histogram.iter().filter(|&&c| c > 0).count() as f64,
    );
    metrics.insert(
        "largest_cluster_fraction".into(),
        *cluster_histogram.iter().max().unwrap_or(&0) as f64 / n as f64,
    );
    let residuals = fixed_point_residual(final_state, &biases, &network)?;
    metrics.insert(
        "max_fixed_point_residual".into(),
        residuals.iter().copied().fold(0.0, f64::max),
    );

    if !minority.is_empty() {
        let top = argmax(biases.row(minority[0]));
        let aligned = minority
            .iter()
            .filter(|&&i| argmax(final_state.row(i)) == top)
            .count();
        metrics.insert("minority_size".into(), minority.len() as f64);
        metrics.insert(
            "minority_aligned_fraction".into(),
            aligned as f64 / minority.len() as f64,
        );
    }

    if n == 2 && biases.k() == 2 {
        let class = two_agent_fixed_points(biases.row(0), biases.row(1))?;
        metrics.insert("alpha_product".into(), class.alpha_product);
        metrics.insert("beta_product".into(), class.beta_product);
        let res = fixed_point_equation_residuals(
            biases.row(0),
            biases.row(1),
            final_state.row(0)[0],
            final_state.row(1)[0],
        )?;
        metrics.insert(
            "fixed_point_equation_residual".into(),
            res[0].abs().max(res[1].abs()),
        );
    }

    if !partition.recessive.is_empty() && recessive_mass >= RECESSIVE_MASS_TOL {
        log::warn!(
            "{label}: recessive alternatives still carry mass {recessive_mass:e} after {} steps",
            trajectory.steps
        );
    }

    Ok(ExperimentResult {
        scenario: label.to_string(),
        seed,
        network,
        biases,
        minority,
        trajectory,
        metrics,
        cluster_histogram,
        partition_used,
    })
}

fn argmax<T: Scalar>(row: &[T]) -> usize {
    let mut best = 0;
    for (l, &v) in row.iter().enumerate() {
        if v > row[best] {
            best = l;
        }
    }
    best
}

/// Number of agents whose largest opinion component is each alternative;
/// ties go to the lowest index.
pub fn argmax_clusters<T: Scalar>(state: &OpinionState<T>) -> Vec<usize> {
    let mut counts = vec![0; state.k()];
    for row in state.rows() {
        counts[argmax(row)] += 1;
    }
    counts
}

/// Mean pairwise 1-norm distance between agents (zero for a single agent).
pub fn dispersion<T: Scalar>(state: &OpinionState<T>) -> T {
    let n = state.n();
    if n < 2 {
        return T::zero();
    }
    let mut total = T::zero();
    for i in 0..n {
        for j in i + 1..n {
            total = total
                + state
                    .row(i)
                    .iter()
                    .zip(state.row(j))
                    .fold(T::zero(), |acc, (&a, &b)| acc + (a - b).abs());
        }
    }
    let pairs = T::from_usize(n * (n - 1) / 2).expect("pair count fits the scalar type");
    total / pairs
}

/// Largest opinion weight any agent places on alternative `l`.
pub fn max_weight_on<T: Scalar>(state: &OpinionState<T>, l: usize) -> T {
    state.rows().map(|r| r[l]).fold(T::zero(), max_of)
}
