//! `stabcomm` command-line front end.
//!
//! Exit codes: 0 success, 1 verification failed or not Clifford, 2 invalid
//! input, 3 indeterminate.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use config::{FlagValues, Format};

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn invalid(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<stabcomm::Error> for Failure {
    fn from(e: stabcomm::Error) -> Self {
        let code = match e {
            stabcomm::Error::IllConditioned(_) => 3,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "stabcomm", version, about = "Stabilizer communication and random access code tools")]
struct Cli {
    /// Seed for sampled runs.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Validation and verdict tolerance (env STABCOMM_TOL).
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// JSON file with defaults for the global flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Candidate budget for exhaustive searches (env STABCOMM_BUDGET).
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// MUB projectors and the stabilizer-state overlap table.
    Mub {
        #[arg(long)]
        dim: u32,
        #[arg(long)]
        overlaps: bool,
    },
    /// Check that the classical protocol reproduces the stabilizer correlation.
    GkVerify {
        #[arg(long)]
        dim: u32,
        /// Partition JSON; maximal partitions when omitted.
        #[arg(long)]
        partitions: Option<PathBuf>,
        /// Also run a sampled simulation with this many rounds.
        #[arg(long)]
        samples: Option<u64>,
    },
    /// Random access code pipelines.
    Rac {
        #[command(subcommand)]
        command: RacCommand,
    },
    /// Clifford membership.
    Clifford {
        #[command(subcommand)]
        command: CliffordCommand,
    },
    /// Stabilizer-polytope membership and magic of a state.
    Magic {
        /// Density matrix JSON or `{"bloch": [x, y, z]}`.
        #[arg(long)]
        state: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OptimizeMethod {
    Unrestricted,
    OneMagic,
    Stabilizer,
    Classical,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum RegionTaskArg {
    Rac2,
    Rac3,
}

#[derive(Subcommand, Debug)]
enum RacCommand {
    /// Evaluate a named strategy or a strategy JSON file.
    Eval {
        #[arg(long)]
        n: u32,
        /// meid, onmq, enmq, case-i, case-ii, case-iii, rac2-magic, rac2-epsilon, or a JSON path.
        #[arg(long)]
        strategy: String,
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// Optimize encodings for fixed decodings, or search stabilizer and classical strategies.
    Optimize {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value = "unrestricted")]
        method: OptimizeMethod,
        /// Decoding bases as letters, e.g. `zxy`; `all` searches every assignment.
        #[arg(long)]
        decoding: Option<String>,
    },
    /// Replace one encoding of the majority-quantum strategy by a rotated state.
    Uplift {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        /// Rotation angle; the optimal angle when omitted.
        #[arg(long)]
        theta: Option<f64>,
    },
    /// Classify single magic encodings in the XZ plane.
    Region {
        #[arg(long, value_enum)]
        task: RegionTaskArg,
        #[arg(long, default_value_t = stabcomm::rac::DEFAULT_STEP)]
        step: f64,
    },
}

#[derive(Subcommand, Debug)]
enum CliffordCommand {
    Check {
        /// Unitary JSON `{"dim": d, "re": [[..]], "im": [[..]]}`.
        #[arg(long)]
        matrix: PathBuf,
    },
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let settings = config::resolve(
        FlagValues {
            seed: cli.seed,
            tol: cli.tol,
            budget: cli.budget,
            format: cli.format,
            output: cli.output,
            config: cli.config,
        },
        &|k| std::env::var(k).ok(),
    )?;
    let outcome = match cli.command {
        Command::Mub { dim, overlaps } => commands::mub(dim, overlaps)?,
        Command::GkVerify {
            dim,
            partitions,
            samples,
        } => commands::gk_verify(dim, partitions.as_deref(), samples, &settings)?,
        Command::Rac { command } => match command {
            RacCommand::Eval {
                n,
                strategy,
                epsilon,
            } => commands::rac_eval(n, &strategy, epsilon, &settings)?,
            RacCommand::Optimize {
                n,
                method,
                decoding,
            } => commands::rac_optimize(n, method, decoding.as_deref(), &settings)?,
            RacCommand::Uplift { n, k, theta } => commands::rac_uplift(n, k, theta)?,
            RacCommand::Region { task, step } => commands::rac_region(task, step)?,
        },
        Command::Clifford {
            command: CliffordCommand::Check { matrix },
        } => commands::clifford_check(&matrix, &settings)?,
        Command::Magic { state } => commands::magic(&state, &settings)?,
    };
    output::emit(&outcome.report, settings.format, settings.output.as_deref())?;
    Ok(outcome.code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
