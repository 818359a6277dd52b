//! Command-line front end: `klim simulate | transform | oa | verify | version`.
//!
//! Exit codes: 0 on success, 1 when a verification fails or a run breaks
//! down numerically, 2 on usage, configuration or input errors.

pub mod config;
pub mod csv;
pub mod simulate;
pub mod transform;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use kuramoto_limits::lab::{self, VerificationReport, SUITES};
use kuramoto_limits::{DriftRule, InteractionKernel, LabelGrid, OAPoint};

use crate::config::{load_config, ConfigError};
use crate::simulate::with_writer;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Output(String),
    #[error(transparent)]
    Numeric(#[from] kuramoto_limits::Error),
    #[error("{0}")]
    VerificationFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Input(_) => 2,
            CliError::Numeric(e) => match e {
                kuramoto_limits::Error::InvalidArgument(_)
                | kuramoto_limits::Error::InvalidBeta(_)
                | kuramoto_limits::Error::DomainError { .. }
                | kuramoto_limits::Error::InvalidDensity { .. }
                | kuramoto_limits::Error::NonNormalized { .. }
                | kuramoto_limits::Error::InvalidMeasure(_)
                | kuramoto_limits::Error::EmptyMeasure => 2,
                _ => 1,
            },
            CliError::Output(_) | CliError::VerificationFailed(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "klim",
    version,
    about = "Kuramoto particle, continuum and mean-field simulations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a simulation described by a TOML config.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `output` from the config; standard output when neither is set.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Transform stored trajectories between descriptions.
    #[command(subcommand)]
    Transform(TransformCommand),
    /// Closed forms on the Ott-Antonsen family.
    #[command(subcommand)]
    Oa(OaCommand),
    /// Run verification suites and write JSON reports.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Print the version.
    Version,
}

#[derive(Debug, Subcommand)]
enum TransformCommand {
    /// Quantile transform of an mfl-grid density trajectory (`t,theta,f`).
    MflToCl {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 256)]
        n_labels: usize,
        #[command(flatten)]
        kernel: KernelArgs,
        #[arg(long, value_enum, default_value_t = DriftArg::SchemeFlux)]
        drift: DriftArg,
    },
    /// Empirical measure of a ds/cl trajectory (`t,x_0,…`).
    ClToMeasure {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct KernelArgs {
    /// Take the kernel from a run config instead of `--coupling`.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Kuramoto coupling strength.
    #[arg(long, default_value_t = 1.0)]
    coupling: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DriftArg {
    SchemeFlux,
    Pointwise,
}

#[derive(Debug, Subcommand)]
enum OaCommand {
    /// Density, CDF and quantile on a label grid.
    Eval {
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 257)]
        n: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Explicit reduced flow sampled on `[0, t]`.
    Flow {
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Lemma,
    Invariance,
    Spectrum,
    Closure,
    Bridge,
    Gamma,
    All,
    /// Perturbed configurations; succeeds when every one of them fails.
    Controls,
}

/// Parses `argv` (program name first), runs the command and returns the exit code.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("klim: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Simulate { config, output } => {
            simulate::run(&load_config(&config)?, output.as_deref())
        }
        Command::Transform(TransformCommand::MflToCl {
            input,
            output,
            n_labels,
            kernel,
            drift,
        }) => {
            let kernel = match &kernel.config {
                Some(path) => load_config(path)?.kernel,
                None => InteractionKernel::kuramoto(kernel.coupling),
            };
            let rule = match drift {
                DriftArg::SchemeFlux => DriftRule::SchemeFlux,
                DriftArg::Pointwise => DriftRule::Pointwise,
            };
            transform::mfl_to_cl(&input, output.as_deref(), n_labels, &kernel, rule)
        }
        Command::Transform(TransformCommand::ClToMeasure { input, output }) => {
            transform::cl_to_measure_file(&input, output.as_deref())
        }
        Command::Oa(OaCommand::Eval {
            alpha,
            beta,
            n,
            output,
        }) => oa_eval(alpha, beta, n, output.as_deref()),
        Command::Oa(OaCommand::Flow {
            alpha,
            beta,
            t,
            steps,
            output,
        }) => oa_flow(alpha, beta, t, steps, output.as_deref()),
        Command::Verify { suite, output } => verify(suite, output.as_deref()),
        Command::Version => {
            println!("klim {}", env!("CARGO_PKG_VERSION"));
            Ok(())
        }
    }
}

fn oa_eval(alpha: f64, beta: f64, n: usize, output: Option<&Path>) -> Result<(), CliError> {
    let p = OAPoint::new(alpha, beta)?;
    let grid = LabelGrid::new(n)?;
    let rows = grid
        .points()
        .into_iter()
        .map(|xi| {
            let theta = std::f64::consts::TAU * xi;
            Ok([xi, p.quantile(xi)?, theta, p.density(theta), p.cdf(theta)])
        })
        .collect::<Result<Vec<_>, kuramoto_limits::Error>>()?;
    with_writer(output, |w| {
        w.header(&["xi", "quantile", "theta", "density", "cdf"])?;
        rows.iter().try_for_each(|r| w.row(r))
    })
}

fn oa_flow(
    alpha: f64,
    beta: f64,
    t_end: f64,
    steps: usize,
    output: Option<&Path>,
) -> Result<(), CliError> {
    if !t_end.is_finite() || steps == 0 {
        return Err(CliError::Input(
            "--t must be finite and --steps positive".into(),
        ));
    }
    let p = OAPoint::new(alpha, beta)?;
    with_writer(output, |w| {
        w.header(&["t", "alpha", "beta"])?;
        for k in 0..=steps {
            let t = t_end * k as f64 / steps as f64;
            let q = p.flow(t);
            w.row(&[t, q.alpha(), q.beta()])?;
        }
        Ok(())
    })
}

fn verify(suite: Suite, output: Option<&Path>) -> Result<(), CliError> {
    let results = match suite {
        Suite::All => lab::run_all(),
        Suite::Controls => lab::run_all_negative_controls(),
        single => {
            let name = SUITES[single as usize];
            vec![lab::run_suite(name)]
        }
    };
    let reports = results
        .into_iter()
        .collect::<Result<Vec<VerificationReport>, _>>()?;
    let json = if reports.len() == 1 && !matches!(suite, Suite::All | Suite::Controls) {
        serde_json::to_string_pretty(&reports[0])
    } else {
        serde_json::to_string_pretty(&reports)
    }
    .expect("reports serialize")
        + "\n";
    match output {
        Some(path) => std::fs::write(path, json)
            .map_err(|e| CliError::Output(format!("{}: {e}", path.display())))?,
        None => {
            let _ = std::io::stdout().lock().write_all(json.as_bytes());
        }
    }
    let failed: Vec<&str> = match suite {
        Suite::Controls => reports
            .iter()
            .filter(|r| r.pass)
            .map(|r| r.test.as_str())
            .collect(),
        _ => reports
            .iter()
            .filter(|r| !r.pass)
            .map(|r| r.test.as_str())
            .collect(),
    };
    if failed.is_empty() {
        Ok(())
    } else if suite == Suite::Controls {
        Err(CliError::VerificationFailed(format!(
            "negative controls passed: {}",
            failed.join(", ")
        )))
    } else {
        Err(CliError::VerificationFailed(format!(
            "failed: {}",
            failed.join(", ")
        )))
    }
}
