//! TOML run configuration.
//!
//! ```toml
//! scenario = "fig2_correlated"   # optional preset; sections below override it
//! seed = 7
//!
//! [run]
//! tol = 1e-10
//! max_steps = 2000
//! stride = 10
//!
//! [output]
//! dir = "out/fig2"
//!
//! [graph]
//! kind = "watts_strogatz"        # or "edge_list" with `path`
//! n = 500
//! ring_degree = 10
//! rewire_p = 0.1
//!
//! [biases]
//! kind = "community"             # "uniform", "inline", "community", "random" or "csv"
//! majority = [0.8, 0.09, 0.11]
//! minority = [0.11, 0.09, 0.8]
//!
//! [initial]
//! kind = "uniform_simplex"       # or "csv" with `path`
//! ```
//!
//! Relative paths are resolved against the directory holding the config file.

use std::path::{Path, PathBuf};

use biasdyn::experiments::{BiasSpec, GraphSpec, InitialSpec, MinoritySelector, Scenario, Setup};
use biasdyn::netgen::{DEFAULT_REWIRE_P, DEFAULT_RING_DEGREE};
use biasdyn::{BiasSet, RunOptions};
use serde::Deserialize;

use crate::error::{CliResult, ConfigError};
use crate::io;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    scenario: Option<String>,
    seed: Option<u64>,
    run: Option<RawRun>,
    output: Option<RawOutput>,
    graph: Option<RawGraph>,
    biases: Option<RawBiases>,
    initial: Option<RawInitial>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRun {
    tol: Option<f64>,
    max_steps: Option<usize>,
    stride: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    dir: PathBuf,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawGraph {
    WattsStrogatz {
        n: usize,
        ring_degree: Option<usize>,
        rewire_p: Option<f64>,
    },
    EdgeList {
        path: PathBuf,
    },
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawBiases {
    Uniform {
        bias: Vec<f64>,
    },
    Inline {
        rows: Vec<Vec<f64>>,
    },
    Community {
        majority: Vec<f64>,
        minority: Vec<f64>,
        community: Option<usize>,
    },
    Random {
        majority: Vec<f64>,
        minority: Vec<f64>,
        minority_count: usize,
    },
    Csv {
        path: PathBuf,
    },
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawInitial {
    UniformSimplex,
    Csv { path: PathBuf },
}

#[derive(Debug, Clone, PartialEq)]
pub enum GraphSource {
    WattsStrogatz {
        n: usize,
        ring_degree: usize,
        rewire_p: f64,
    },
    EdgeList(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub enum BiasSource {
    /// Same vector for every agent.
    Uniform(Vec<f64>),
    Inline(Vec<Vec<f64>>),
    /// Minority bias on one detected community (the smallest when `None`).
    Community {
        majority: Vec<f64>,
        minority: Vec<f64>,
        community: Option<usize>,
    },
    Random {
        majority: Vec<f64>,
        minority: Vec<f64>,
        minority_count: usize,
    },
    Csv(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialSource {
    UniformSimplex,
    Csv(PathBuf),
}

/// Validated configuration. Sources left `None` come from the scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: Option<Scenario>,
    pub seed: u64,
    pub graph: Option<GraphSource>,
    pub biases: Option<BiasSource>,
    pub initial: Option<InitialSource>,
    pub run: RunOptions,
    pub output_dir: Option<PathBuf>,
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.len() - before.rfind('\n').map_or(0, |p| p + 1) + 1;
    (line, column)
}

fn invalid(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        field: field.into(),
        message: message.into(),
    }
}

fn check_vector(field: &str, v: &[f64]) -> Result<(), ConfigError> {
    if v.is_empty() {
        return Err(invalid(field, "must not be empty"));
    }
    if let Some(x) = v.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
        return Err(invalid(
            field,
            format!("entries must be finite and >= 0, found {x}"),
        ));
    }
    Ok(())
}

fn check_pair(section: &str, majority: &[f64], minority: &[f64]) -> Result<(), ConfigError> {
    check_vector(&format!("{section}.majority"), majority)?;
    check_vector(&format!("{section}.minority"), minority)?;
    if majority.len() != minority.len() {
        return Err(invalid(
            &format!("{section}.minority"),
            format!(
                "has {} entries but majority has {}",
                minority.len(),
                majority.len()
            ),
        ));
    }
    Ok(())
}

fn existing(base: &Path, field: &str, p: PathBuf) -> Result<PathBuf, ConfigError> {
    let full = if p.is_relative() { base.join(p) } else { p };
    if !full.is_file() {
        return Err(invalid(
            field,
            format!("file {} does not exist", full.display()),
        ));
    }
    Ok(full)
}

/// Parses configuration text. `base` anchors relative paths.
pub fn parse_config_str(text: &str, base: &Path) -> Result<RunConfig, ConfigError> {
    if let Err(e) = text.parse::<toml::Table>() {
        let (line, column) = e.span().map_or((0, 0), |s| line_col(text, s.start));
        return Err(ConfigError::Syntax {
            line,
            column,
            message: e.message().to_string(),
        });
    }
    let raw: RawConfig = toml::from_str(text).map_err(|e| {
        let line = e.span().map_or(0, |s| line_col(text, s.start).0);
        ConfigError::Schema {
            line,
            message: e.message().to_string(),
        }
    })?;

    let scenario = raw
        .scenario
        .map(|s| {
            s.parse::<Scenario>()
                .map_err(|e| invalid("scenario", e.to_string()))
        })
        .transpose()?;

    let mut run = scenario.map_or_else(RunOptions::default, Scenario::default_run_options);
    if let Some(r) = raw.run {
        if let Some(tol) = r.tol {
            if !(tol.is_finite() && tol >= 0.0) {
                return Err(invalid(
                    "run.tol",
                    format!("must be finite and >= 0, got {tol}"),
                ));
            }
            run.tol = tol;
        }
        if let Some(m) = r.max_steps {
            if m == 0 {
                return Err(invalid("run.max_steps", "must be at least 1"));
            }
            run.max_steps = m;
        }
        if let Some(s) = r.stride {
            if s == 0 {
                return Err(invalid("run.stride", "must be at least 1"));
            }
            run.stride = s;
        }
    }

    let graph = match raw.graph {
        None => None,
        Some(RawGraph::WattsStrogatz {
            n,
            ring_degree,
            rewire_p,
        }) => {
            let ring_degree = ring_degree.unwrap_or(DEFAULT_RING_DEGREE);
            let rewire_p = rewire_p.unwrap_or(DEFAULT_REWIRE_P);
            if ring_degree < 2 || !ring_degree.is_multiple_of(2) {
                return Err(invalid(
                    "graph.ring_degree",
                    format!("must be even and >= 2, got {ring_degree}"),
                ));
            }
            if n <= ring_degree {
                return Err(invalid(
                    "graph.n",
                    format!("must exceed ring_degree = {ring_degree}, got {n}"),
                ));
            }
            if !(0.0..=1.0).contains(&rewire_p) {
                return Err(invalid(
                    "graph.rewire_p",
                    format!("must lie in [0, 1], got {rewire_p}"),
                ));
            }
            Some(GraphSource::WattsStrogatz {
                n,
                ring_degree,
                rewire_p,
            })
        }
        Some(RawGraph::EdgeList { path }) => {
            Some(GraphSource::EdgeList(existing(base, "graph.path", path)?))
        }
    };

    let biases = match raw.biases {
        None => None,
        Some(RawBiases::Uniform { bias }) => {
            check_vector("biases.bias", &bias)?;
            Some(BiasSource::Uniform(bias))
        }
        Some(RawBiases::Inline { rows }) => {
            BiasSet::from_rows(&rows).map_err(|e| invalid("biases.rows", e.to_string()))?;
            Some(BiasSource::Inline(rows))
        }
        Some(RawBiases::Community {
            majority,
            minority,
            community,
        }) => {
            check_pair("biases", &majority, &minority)?;
            Some(BiasSource::Community {
                majority,
                minority,
                community,
            })
        }
        Some(RawBiases::Random {
            majority,
            minority,
            minority_count,
        }) => {
            check_pair("biases", &majority, &minority)?;
            if let Some(GraphSource::WattsStrogatz { n, .. }) = graph {
                if minority_count > n {
                    return Err(invalid("biases.minority_count", format!("exceeds n = {n}")));
                }
            }
            Some(BiasSource::Random {
                majority,
                minority,
                minority_count,
            })
        }
        Some(RawBiases::Csv { path }) => {
            Some(BiasSource::Csv(existing(base, "biases.path", path)?))
        }
    };

    let initial = match raw.initial {
        None => None,
        Some(RawInitial::UniformSimplex) => Some(InitialSource::UniformSimplex),
        Some(RawInitial::Csv { path }) => {
            Some(InitialSource::Csv(existing(base, "initial.path", path)?))
        }
    };

    if scenario.is_none() {
        if graph.is_none() {
            return Err(invalid("graph", "required when no scenario is given"));
        }
        if biases.is_none() {
            return Err(invalid("biases", "required when no scenario is given"));
        }
    }

    let output_dir = raw.output.map(|o| {
        if o.dir.is_relative() {
            base.join(o.dir)
        } else {
            o.dir
        }
    });
    Ok(RunConfig {
        scenario,
        seed: raw.seed.unwrap_or(0),
        graph,
        biases,
        initial,
        run,
        output_dir,
    })
}

/// Reads and validates a configuration file.
pub fn parse_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => ConfigError::Missing {
            path: path.to_path_buf(),
        },
        _ => ConfigError::Unreadable {
            path: path.to_path_buf(),
            source: e,
        },
    })?;
    let base = path.parent().unwrap_or(Path::new("."));
    parse_config_str(&text, base)
}

impl RunConfig {
    /// Label used in summaries: the scenario name, or `custom`.
    pub fn label(&self) -> String {
        self.scenario
            .map_or_else(|| "custom".to_string(), |s| s.name().to_string())
    }

    /// Loads referenced files and assembles the experiment setup.
    pub fn setup(&self) -> CliResult<Setup> {
        let mut setup = match self.scenario {
            Some(sc) => sc.setup(&Default::default())?,
            None => Setup {
                graph: GraphSpec::Given(biasdyn::Network::path(1)?),
                biases: BiasSpec::Uniform(Vec::new()),
                initial: InitialSpec::UniformSimplex,
                run: self.run,
            },
        };
        setup.run = self.run;
        if let Some(g) = &self.graph {
            setup.graph = match g {
                GraphSource::WattsStrogatz {
                    n,
                    ring_degree,
                    rewire_p,
                } => GraphSpec::WattsStrogatz {
                    n: *n,
                    ring_degree: *ring_degree,
                    rewire_p: *rewire_p,
                },
                GraphSource::EdgeList(p) => GraphSpec::Given(io::read_edge_list(p)?),
            };
        }
        if let Some(b) = &self.biases {
            setup.biases = match b.clone() {
                BiasSource::Uniform(r) => BiasSpec::Uniform(r),
                BiasSource::Inline(rows) => BiasSpec::Given(BiasSet::from_rows(&rows)?),
                BiasSource::Community {
                    majority,
                    minority,
                    community,
                } => BiasSpec::ByCommunity {
                    majority,
                    minority,
                    community: community.map_or(MinoritySelector::Smallest, MinoritySelector::Id),
                },
                BiasSource::Random {
                    majority,
                    minority,
                    minority_count,
                } => BiasSpec::Random {
                    majority,
                    minority,
                    minority_count,
                },
                BiasSource::Csv(p) => BiasSpec::Given(io::read_bias_csv(&p)?),
            };
        }
        if let Some(i) = &self.initial {
            setup.initial = match i {
                InitialSource::UniformSimplex => InitialSpec::UniformSimplex,
                InitialSource::Csv(p) => InitialSpec::Given(io::read_state_csv(p)?),
            };
        }
        Ok(setup)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<RunConfig, ConfigError> {
        parse_config_str(text, Path::new("."))
    }

    #[test]
    fn scenario_only_takes_scenario_defaults() {
        let c = parse("scenario = \"fig2_correlated\"").unwrap();
        assert_eq!(c.scenario, Some(Scenario::Fig2Correlated));
        assert_eq!(c.run.tol, 1e-10);
        assert_eq!(c.run.max_steps, 2000);
        assert_eq!(c.seed, 0);
        assert!(c.graph.is_none() && c.biases.is_none() && c.initial.is_none());
        let c = parse("scenario = \"fig1c\"").unwrap();
        assert_eq!(c.run.max_steps, 1_000_000);
    }

    #[test]
    fn negative_tol_names_the_field() {
        let e = parse("scenario = \"fig1b\"\n[run]\ntol = -1e-3\n").unwrap_err();
        match e {
            ConfigError::Invalid { field, .. } => assert_eq!(field, "run.tol"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn error_categories_are_distinct() {
        match parse("seed = 3\n[run\n").unwrap_err() {
            ConfigError::Syntax { line, .. } => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        match parse("scenario = \"fig1a\"\n\n[run]\ntols = 1.0\n").unwrap_err() {
            ConfigError::Schema { line, message } => {
                assert_eq!(line, 4);
                assert!(message.contains("tols"), "{message}");
            }
            other => panic!("{other:?}"),
        }
        match parse("scenario = \"fig9\"").unwrap_err() {
            ConfigError::Invalid { field, .. } => assert_eq!(field, "scenario"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_config(Path::new("/nonexistent/run.toml")),
            Err(ConfigError::Missing { .. })
        ));
    }

    #[test]
    fn custom_configuration() {
        let text = r#"
            seed = 4
            [graph]
            kind = "watts_strogatz"
            n = 40
            ring_degree = 4
            [biases]
            kind = "random"
            majority = [0.8, 0.2]
            minority = [0.2, 0.8]
            minority_count = 5
            [run]
            max_steps = 300
        "#;
        let c = parse(text).unwrap();
        assert_eq!(
            c.graph,
            Some(GraphSource::WattsStrogatz {
                n: 40,
                ring_degree: 4,
                rewire_p: 0.1
            })
        );
        assert_eq!(
            c.run,
            RunOptions {
                max_steps: 300,
                tol: 1e-10,
                stride: 1
            }
        );
        assert_eq!(c.label(), "custom");
        let setup = c.setup().unwrap();
        assert!(matches!(setup.initial, InitialSpec::UniformSimplex));
        assert!(matches!(
            setup.biases,
            BiasSpec::Random {
                minority_count: 5,
                ..
            }
        ));
    }

    #[test]
    fn field_validation() {
        let field_of = |text: &str| match parse(text) {
            Err(ConfigError::Invalid { field, .. }) => field,
            other => panic!("{other:?}"),
        };
        assert_eq!(
            field_of("[graph]\nkind = \"watts_strogatz\"\nn = 10\nring_degree = 3\n"),
            "graph.ring_degree"
        );
        assert_eq!(
            field_of(
                "[graph]\nkind = \"watts_strogatz\"\nn = 10\nring_degree = 4\nrewire_p = 2.0\n"
            ),
            "graph.rewire_p"
        );
        assert_eq!(
            field_of("[graph]\nkind = \"edge_list\"\npath = \"missing.txt\"\n"),
            "graph.path"
        );
        assert_eq!(
            field_of("[graph]\nkind = \"watts_strogatz\"\nn = 10\nring_degree = 2\n[biases]\nkind = \"uniform\"\nbias = [1.0, -0.5]\n"),
            "biases.bias"
        );
        assert_eq!(
            field_of("[graph]\nkind = \"watts_strogatz\"\nn = 10\nring_degree = 2\n"),
            "biases"
        );
        assert_eq!(
            field_of("scenario = \"fig1a\"\n[run]\nstride = 0\n"),
            "run.stride"
        );
    }
}
