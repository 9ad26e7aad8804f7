//! Command-line front end: argument parsing, the subcommands and their
//! output formats. `main.rs` only maps [`run`]'s result to an exit code.

pub mod config;
pub mod error;
pub mod svg;
pub mod sweep;
pub mod tables;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use hawkdove::abm;
use hawkdove::equilibria::{self, find_stationary_states, ROOT_TOL};
use hawkdove::flow::{self, IntegratorConfig};
use serde_json::json;

pub use config::Config;
pub use error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "hawkdove", version, about = "Sampling dynamics in two-population hawk-dove games")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stationary states, their stability and the pure-state verdict.
    Analyze,
    /// One trajectory of the mean dynamics from the configured start.
    Trajectory,
    /// Monte Carlo basin fractions of the stationary states.
    Basins,
    /// Finite-population runs.
    Abm,
    /// The standard-game grid over gains, sample-size distributions and dynamics.
    Sweep {
        /// Basin samples per cell.
        #[arg(long, default_value_t = sweep::DEFAULT_SAMPLES)]
        samples: usize,
    },
    /// Fixed points and slopes of the limiting payoff-sampling polynomials.
    Tables,
    /// SVG phase portrait.
    Plot,
}

impl Cli {
    fn load_config(&self) -> Result<Config, CliError> {
        let path = self
            .config
            .as_deref()
            .ok_or_else(|| CliError::Config("this command needs --config".into()))?;
        let mut cfg = Config::load(path)?;
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        Ok(cfg)
    }
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: PathBuf::from("<stdout>"),
                source,
            }),
    }
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable value");
    s.push('\n');
    s
}

/// Stationary-state report as JSON.
pub fn analyze_json(cfg: &Config) -> Result<serde_json::Value, CliError> {
    let env = cfg.environment()?;
    let f = env.response();
    let report = find_stationary_states(&f, ROOT_TOL);
    let product = equilibria::pure_state_product(&env.game, &env.theta, env.kind, env.tie);
    Ok(json!({
        "environment": {
            "game": cfg.game,
            "theta": env.theta.literal(),
            "dynamics": env.kind,
            "tie": env.tie,
        },
        "continuum": report.continuum,
        "states": report.to_json(),
        "warnings": report.warnings,
        "symmetric_fixed_point": equilibria::symmetric_fixed_point(&f),
        "pure_state_product": product,
        "pure_stability": equilibria::pure_state_stability(&env.game, &env.theta, env.kind, env.tie),
        "global_verdict": equilibria::global_verdict(&env.game, &env.theta, env.kind, env.tie),
    }))
}

fn analyze(cli: &Cli) -> Result<String, CliError> {
    let cfg = cli.load_config()?;
    match cli.format.unwrap_or(Format::Json) {
        Format::Json => Ok(pretty(&analyze_json(&cfg)?)),
        Format::Csv => {
            let f = cfg.environment()?.response();
            let report = find_stationary_states(&f, ROOT_TOL);
            let mut s = String::from("p1,p2,slope_product,label\n");
            for st in &report.states {
                s.push_str(&format!(
                    "{},{},{},{:?}\n",
                    st.location.p1, st.location.p2, st.slope_product, st.label
                ));
            }
            Ok(s)
        }
    }
}

fn trajectory(cli: &Cli) -> Result<String, CliError> {
    let cfg = cli.load_config()?;
    let f = cfg.environment()?.response();
    let report = find_stationary_states(&f, ROOT_TOL);
    let r = flow::integrate_attributed(&f, cfg.start_state()?, &cfg.integrator(), &report);
    match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => Ok(r.to_csv()),
        Format::Json => Ok(pretty(&serde_json::to_value(&r).expect("serializable"))),
    }
}

fn basins(cli: &Cli) -> Result<String, CliError> {
    let cfg = cli.load_config()?;
    let f = cfg.environment()?.response();
    let report = find_stationary_states(&f, ROOT_TOL);
    let integ = IntegratorConfig {
        record_every: usize::MAX,
        ..cfg.integrator()
    };
    let est = flow::estimate_basins_with(&f, &report, cfg.basin_samples, cfg.seed, &integ);
    match cli.format.unwrap_or(Format::Json) {
        Format::Json => Ok(pretty(&serde_json::to_value(&est).expect("serializable"))),
        Format::Csv => {
            let mut s = String::from("p1,p2,label,count,fraction,half_width\n");
            for b in &est.shares {
                s.push_str(&format!(
                    "{},{},{:?},{},{},{}\n",
                    b.state.p1, b.state.p2, b.label, b.count, b.fraction, b.half_width
                ));
            }
            s.push_str(&format!(",,Unattributed,{},{},\n", est.unattributed, est.unattributed_fraction));
            Ok(s)
        }
    }
}

fn run_abm(cli: &Cli) -> Result<String, CliError> {
    let cfg = cli.load_config()?;
    let sim = cfg.sim_config()?;
    let series = abm::run_replicates(&sim, cfg.abm.replicates)?;
    match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => Ok(abm::series_to_csv(&series)),
        Format::Json => {
            let f = cfg.environment()?.response();
            let integ = IntegratorConfig {
                t_max: cfg.abm.horizon as f64,
                tol: 0.0,
                ..cfg.integrator()
            };
            let traj = flow::integrate(&f, cfg.start_state()?, &integ);
            // one block is one unit of time at δ = 1
            let dev = abm::compare_to_mean_field(&series, &traj, 1.0);
            Ok(pretty(&json!({ "series": series, "mean_field_deviation": dev })))
        }
    }
}

fn run_sweep(cli: &Cli, samples: usize) -> Result<String, CliError> {
    let mut opts = sweep::SweepOptions {
        samples,
        ..Default::default()
    };
    if cli.config.is_some() {
        let cfg = cli.load_config()?;
        opts.seed = cfg.seed;
        opts.integrator = IntegratorConfig {
            record_every: usize::MAX,
            ..cfg.integrator()
        };
    } else if let Some(seed) = cli.seed {
        opts.seed = seed;
    }
    let rows = sweep::run_sweep(&sweep::Grid::default(), &opts);
    match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => Ok(sweep::to_csv(&rows)),
        Format::Json => Ok(pretty(&serde_json::to_value(&rows).expect("serializable"))),
    }
}

fn plot(cli: &Cli) -> Result<String, CliError> {
    let cfg = cli.load_config()?;
    let env = cfg.environment()?;
    let f = env.response();
    let report = find_stationary_states(&f, ROOT_TOL);
    let title = format!(
        "g={} l={} theta={} {}",
        env.game.g(),
        env.game.l(),
        env.theta.literal(),
        env.kind
    );
    Ok(svg::render(&f, &report, &title))
}

/// Runs one command. Golden mismatches in `tables` are reported after the
/// table has been written.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let out = cli.out.as_deref();
    let text = match &cli.command {
        Command::Analyze => analyze(cli)?,
        Command::Trajectory => trajectory(cli)?,
        Command::Basins => basins(cli)?,
        Command::Abm => run_abm(cli)?,
        Command::Sweep { samples } => run_sweep(cli, *samples)?,
        Command::Plot => plot(cli)?,
        Command::Tables => {
            let t = tables::Tables::compute();
            let text = match cli.format {
                None => t.to_text(),
                Some(Format::Csv) => t.to_csv(),
                Some(Format::Json) => pretty(&serde_json::to_value(&t).expect("serializable")),
            };
            write_output(out, &text)?;
            let bad = t.mismatches();
            if bad.is_empty() {
                return Ok(());
            }
            return Err(CliError::Golden(format!(
                "{} entries off by more than {}: {}",
                bad.len(),
                tables::TOLERANCE,
                bad.join("; ")
            )));
        }
    };
    write_output(out, &text)
}
