//! Subcommand bodies. Each writes its report to `out` so it can be tested
//! without spawning the binary.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use biasdyn::analysis::{
    classify_fixed_agent, dominant_eigenvalue_2x2, fixed_point_residual, jacobian_all_one_2agent,
    jacobian_origin_2agent, lyapunov_value, recessive_set, schur_stable_2x2,
    two_agent_fixed_points, AgentFixedClass, FixedPointRegime, Mat2,
};
use biasdyn::experiments::{execute, run_scenario, ExperimentResult, Overrides, Scenario};
use biasdyn::RunOptions;
use log::info;

use crate::config::parse_config;
use crate::error::{CliError, CliResult};
use crate::io::{self, format_real};
use crate::summary::write_summary;
use crate::ternary::ternary_project;

fn report(out: &mut dyn Write, text: std::fmt::Arguments) -> CliResult<()> {
    out.write_fmt(text).map_err(|e| CliError::io("<stdout>", e))
}

macro_rules! say {
    ($out:expr, $($arg:tt)*) => { report($out, format_args!("{}\n", format_args!($($arg)*))) };
}

/// Writes every artifact of a finished run into `dir`:
/// `summary.json`, `trajectory.csv`, `final_state.csv`, `biases.csv`,
/// `graph.edgelist`, `agents.csv` and, for three alternatives, `ternary.csv`.
pub fn write_outputs(result: &ExperimentResult, opts: &RunOptions, dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    write_summary(result, opts, &dir.join("summary.json"))?;
    io::write_trajectory_file(&result.trajectory, &dir.join("trajectory.csv"))?;
    io::write_state_file(result.final_state(), &dir.join("final_state.csv"))?;
    io::write_bias_file(&result.biases, &dir.join("biases.csv"))?;
    io::write_edge_list_file(&result.network, &dir.join("graph.edgelist"))?;
    write_agents(result, &dir.join("agents.csv"))?;
    if result.final_state().k() == 3 {
        write_ternary(result, &dir.join("ternary.csv"))?;
    }
    Ok(())
}

fn csv_file(path: &Path) -> CliResult<csv::Writer<std::fs::File>> {
    csv::Writer::from_path(path).map_err(|e| CliError::io(path, e.into()))
}

/// `agent,bias_group,community`: bias group 1 marks the minority; the
/// community column is empty when no partition was computed.
fn write_agents(result: &ExperimentResult, path: &Path) -> CliResult<()> {
    let mut w = csv_file(path)?;
    let wrap = |e: csv::Error| CliError::io(path, e.into());
    w.write_record(["agent", "bias_group", "community"])
        .map_err(wrap)?;
    let mut minority = vec![false; result.final_state().n()];
    result.minority.iter().for_each(|&i| minority[i] = true);
    for (i, &m) in minority.iter().enumerate() {
        let community = result
            .partition_used
            .as_ref()
            .map_or(String::new(), |p| p.assignment[i].to_string());
        w.write_record([i.to_string(), u8::from(m).to_string(), community])
            .map_err(wrap)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

/// `t,agent,u,v`: planar coordinates of the initial and final snapshots.
fn write_ternary(result: &ExperimentResult, path: &Path) -> CliResult<()> {
    let traj = &result.trajectory;
    let mut w = csv_file(path)?;
    let wrap = |e: csv::Error| CliError::io(path, e.into());
    w.write_record(["t", "agent", "u", "v"]).map_err(wrap)?;
    let last = traj.states.len() - 1;
    for s in [0, last] {
        for (i, [u, v]) in ternary_project(&traj.states[s])?.into_iter().enumerate() {
            let t = traj.times[s].to_string();
            w.write_record([t, i.to_string(), format_real(u), format_real(v)])
                .map_err(wrap)?;
        }
        if last == 0 {
            break;
        }
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

fn outcome_line(out: &mut dyn Write, r: &ExperimentResult) -> CliResult<()> {
    say!(
        out,
        "{}: seed {}, {} after {} steps (residual {:.3e}), clusters {:?}",
        r.scenario,
        r.seed,
        if r.trajectory.converged {
            "converged"
        } else {
            "not converged"
        },
        r.trajectory.steps,
        r.trajectory.final_residual,
        r.cluster_histogram
    )
}

pub fn simulate(config: &Path, out_dir: Option<&Path>, out: &mut dyn Write) -> CliResult<()> {
    let cfg = parse_config(config)?;
    let dir = out_dir
        .map(Path::to_path_buf)
        .or_else(|| cfg.output_dir.clone())
        .ok_or_else(|| {
            CliError::Usage("no output directory: pass --out or set [output] dir".into())
        })?;
    let setup = cfg.setup()?;
    info!("simulating {} with seed {}", cfg.label(), cfg.seed);
    let result = execute(&cfg.label(), &setup, cfg.seed)?;
    write_outputs(&result, &setup.run, &dir)?;
    outcome_line(out, &result)?;
    say!(out, "wrote {}", dir.display())
}

/// Parses `key=value` pairs into scenario overrides.
pub fn parse_overrides(pairs: &[String]) -> CliResult<Overrides> {
    let mut map = BTreeMap::new();
    for p in pairs {
        let (k, v) = p
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--set expects key=value, got '{p}'")))?;
        if map
            .insert(k.trim().to_string(), v.trim().to_string())
            .is_some()
        {
            return Err(CliError::Usage(format!(
                "override '{}' given twice",
                k.trim()
            )));
        }
    }
    Ok(Overrides::from_map(&map)?)
}

pub fn experiment(
    name: &str,
    seed: u64,
    sets: &[String],
    dir: &Path,
    out: &mut dyn Write,
) -> CliResult<()> {
    let scenario: Scenario = name.parse()?;
    let overrides = parse_overrides(sets)?;
    let opts = scenario.setup(&overrides)?.run;
    let result = run_scenario(scenario, seed, &overrides)?;
    write_outputs(&result, &opts, dir)?;
    outcome_line(out, &result)?;
    say!(out, "wrote {}", dir.display())
}

fn class_name(c: &AgentFixedClass<f64>) -> &'static str {
    match c {
        AgentFixedClass::NotFixed(_) => "not_fixed",
        AgentFixedClass::Decoupled => "decoupled",
        AgentFixedClass::Balanced => "balanced",
    }
}

pub fn analyze(
    state: &Path,
    biases: &Path,
    graph: &Path,
    tol: f64,
    out: &mut dyn Write,
) -> CliResult<()> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(CliError::Usage(format!(
            "--tol must be positive, got {tol}"
        )));
    }
    let x = io::read_state_csv(state)?;
    let b = io::read_bias_csv(biases)?;
    let net = io::read_edge_list(graph)?;
    if x.n() != b.n() || x.k() != b.k() || x.n() != net.n() {
        return Err(CliError::Usage(format!(
            "shape mismatch: state {}x{}, biases {}x{}, graph with {} nodes",
            x.n(),
            x.k(),
            b.n(),
            b.k(),
            net.n()
        )));
    }
    let residuals = fixed_point_residual(&x, &b, &net)?;
    say!(out, "agents {} alternatives {}", x.n(), x.k())?;
    say!(out, "agent,residual,class")?;
    for (i, r) in residuals.iter().enumerate() {
        let class = classify_fixed_agent(&x, &b, &net, i, tol)?;
        say!(out, "{i},{r:.3e},{}", class_name(&class))?;
    }
    say!(
        out,
        "max residual {:.3e}",
        residuals.iter().copied().fold(0.0, f64::max)
    )?;
    let part = recessive_set(&b);
    let one_based: Vec<String> = part.recessive.iter().map(|l| (l + 1).to_string()).collect();
    say!(out, "recessive set {{{}}}", one_based.join(", "))?;
    say!(out, "lyapunov {:.6e}", lyapunov_value(&x, &part))
}

fn regime_name(r: FixedPointRegime) -> &'static str {
    match r {
        FixedPointRegime::StableAllOne => "stable_all_one",
        FixedPointRegime::StableAllZero => "stable_all_zero",
        FixedPointRegime::Continuum => "continuum",
    }
}

fn matrix(m: &Mat2<f64>) -> String {
    format!(
        "[[{:.6}, {:.6}], [{:.6}, {:.6}]]",
        m[0][0], m[0][1], m[1][0], m[1][1]
    )
}

pub fn twoagent(r1: &[f64], r2: &[f64], out: &mut dyn Write) -> CliResult<()> {
    for (name, r) in [("--r1", r1), ("--r2", r2)] {
        if r.len() != 2 || r.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(CliError::Usage(format!(
                "{name} needs two nonnegative numbers, got {r:?}"
            )));
        }
    }
    let class = two_agent_fixed_points(r1, r2)?;
    say!(out, "regime {}", regime_name(class.regime))?;
    say!(out, "alpha_product {}", class.alpha_product)?;
    say!(out, "beta_product {}", class.beta_product)?;
    for (label, j) in [
        ("J(0,0)", jacobian_origin_2agent(r1, r2)?),
        ("J(1,1)", jacobian_all_one_2agent(r1, r2)?),
    ] {
        say!(out, "{label} {}", matrix(&j))?;
        say!(
            out,
            "{label} schur_stable {} lambda_max {:.6}",
            schur_stable_2x2(j)?,
            dominant_eigenvalue_2x2(j)
        )?;
    }
    Ok(())
}
