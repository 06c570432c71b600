use std::path::PathBuf;
use std::process::ExitCode;

use biasdyn::analysis::DEFAULT_ZERO_TOL;
use biasdyn_cli::commands;
use biasdyn_cli::CliResult;
use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

/// Bias-filtered opinion dynamics on networks.
///
/// Log verbosity is read from BIASDYN_LOG (e.g. `info`, `debug`); the
/// default shows warnings only.
#[derive(Debug, Parser)]
#[command(name = "biasdyn", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the configuration in a TOML file.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; overrides `[output] dir` in the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fixed-point diagnostics for a stored state.
    Analyze {
        /// Opinion CSV (`agent,x1,...,xk`).
        #[arg(long)]
        state: PathBuf,
        /// Bias CSV (`agent,r1,...,rk`).
        #[arg(long)]
        biases: PathBuf,
        /// Edge list (`u v` per line).
        #[arg(long)]
        graph: PathBuf,
        /// Threshold for fixedness and for a vanishing filtered sum.
        #[arg(long, default_value_t = DEFAULT_ZERO_TOL)]
        tol: f64,
    },
    /// Run a named scenario: fig1a, fig1b, fig1c, fig2_correlated, fig2_random.
    Experiment {
        name: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Scenario override `key=value` (n, ring_degree, rewire_p, tol,
        /// max_steps, stride, minority_count, x1, x2); repeatable.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        sets: Vec<String>,
    },
    /// Classify a two-agent, two-alternative system.
    Twoagent {
        #[arg(long, value_delimiter = ',', num_args = 1, allow_hyphen_values = true)]
        r1: Vec<f64>,
        #[arg(long, value_delimiter = ',', num_args = 1, allow_hyphen_values = true)]
        r2: Vec<f64>,
    },
}

fn dispatch(cmd: Command) -> CliResult<()> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match cmd {
        Command::Simulate { config, out: dir } => {
            commands::simulate(&config, dir.as_deref(), &mut out)
        }
        Command::Analyze {
            state,
            biases,
            graph,
            tol,
        } => commands::analyze(&state, &biases, &graph, tol, &mut out),
        Command::Experiment {
            name,
            seed,
            out: dir,
            sets,
        } => commands::experiment(&name, seed, &sets, &dir, &mut out),
        Command::Twoagent { r1, r2 } => commands::twoagent(&r1, &r2, &mut out),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("BIASDYN_LOG", "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
