use std::collections::BTreeMap;
use std::path::Path;

use biasdyn::experiments::ExperimentResult;
use biasdyn::RunOptions;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Run metadata written next to the trajectory as `summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub scenario: String,
    pub seed: u64,
    pub n: usize,
    pub k: usize,
    pub converged: bool,
    pub steps: usize,
    pub final_residual: f64,
    pub tol: f64,
    pub max_steps: usize,
    pub stride: usize,
    pub metrics: BTreeMap<String, f64>,
    /// Agents per argmax alternative in the final state.
    pub cluster_histogram: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub community_sizes: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub modularity: Option<f64>,
    /// Agents carrying the minority bias, if the scenario has one.
    pub minority: Vec<usize>,
}

impl Summary {
    pub fn new(result: &ExperimentResult, opts: &RunOptions) -> Self {
        let fin = result.final_state();
        Self {
            scenario: result.scenario.clone(),
            seed: result.seed,
            n: fin.n(),
            k: fin.k(),
            converged: result.trajectory.converged,
            steps: result.trajectory.steps,
            final_residual: result.trajectory.final_residual,
            tol: opts.tol,
            max_steps: opts.max_steps,
            stride: opts.stride,
            metrics: result.metrics.clone(),
            cluster_histogram: result.cluster_histogram.clone(),
            community_sizes: result.partition_used.as_ref().map(|p| p.sizes.clone()),
            modularity: result.partition_used.as_ref().map(|p| p.modularity),
            minority: result.minority.clone(),
        }
    }
}

pub fn write_summary(result: &ExperimentResult, opts: &RunOptions, path: &Path) -> CliResult<()> {
    let text =
        serde_json::to_string_pretty(&Summary::new(result, opts)).expect("summary serializes");
    std::fs::write(path, text + "\n").map_err(|e| CliError::io(path, e))
}

pub fn read_summary(path: &Path) -> CliResult<Summary> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::input(path.display().to_string(), Some(e.line()), e.to_string()))
}
