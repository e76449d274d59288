//! `ehrhart`: command-line front end to `ehrhart-core`.
//!
//! Exit codes: 0 success, 1 a `verify` claim failed, 2 not IDP, 3 undecided
//! (resource limit), 64 malformed input or usage, 70 internal error.

mod commands;
mod input;

use std::process::ExitCode;
use std::sync::mpsc;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub const EXIT_FAIL: u8 = 1;
pub const EXIT_NOT_IDP: u8 = 2;
pub const EXIT_UNDECIDED: u8 = 3;
pub const EXIT_USAGE: u8 = 64;
pub const EXIT_INTERNAL: u8 = 70;

/// An error with the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }

    pub fn undecided(message: impl Into<String>) -> Self {
        Failure { code: EXIT_UNDECIDED, message: message.into() }
    }
}

impl From<ehrhart_core::Error> for Failure {
    fn from(e: ehrhart_core::Error) -> Self {
        use ehrhart_core::Error::*;
        let code = match e {
            InvalidInput(_) | Dimension(_) | Empty(_) | NotFullDimensional { .. } => EXIT_USAGE,
            ConfigTooLarge { .. } | Budget(_) | Overflow(_) => EXIT_UNDECIDED,
            Integrity(_) => EXIT_INTERNAL,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: EXIT_INTERNAL, message: e.to_string() }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure { code: EXIT_INTERNAL, message: e.to_string() }
    }
}

#[derive(Parser, Debug)]
#[command(name = "ehrhart", version, about = "Exact Ehrhart theory for lattice polytopes")]
pub struct Cli {
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true, env = "EHRHART_THREADS")]
    pub threads: Option<usize>,

    /// Give up with exit code 3 after this many seconds.
    #[arg(long, global = true, value_name = "SECS")]
    pub time_limit: Option<f64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check every stated property of a bundled example.
    Verify(VerifyArgs),
    /// h*-vector, Ehrhart polynomial and predicates.
    Hstar(HstarArgs),
    /// Decide the integer decomposition property.
    Idp(IdpArgs),
    /// List the lattice points of kP.
    Points(PointsArgs),
    /// Count the lattice points of kP.
    Count(CountArgs),
    /// Arc polytope of a directed graph.
    ArcPolytope(ArcArgs),
    /// All triangulations using the lattice points (at most d + 3 of them).
    Triangulations(PolyArg),
    /// Affine unimodular equivalence of two polytopes.
    Equiv(EquivArgs),
    /// Simulated annealing for IDP polytopes with non-log-concave h*.
    Search(SearchArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum VerifyTarget {
    Theorem1,
    Theorem2,
    Proposition,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    pub target: VerifyTarget,
    /// Print the report as JSON instead of one line per claim.
    #[arg(long)]
    pub json: bool,
}

/// Polytope JSON file, `-` for stdin, or `@theorem1`, `@theorem2`, `@figure1`.
#[derive(Args, Debug)]
pub struct PolyArg {
    pub input: String,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
pub enum HstarMethod {
    Counting,
    HalfOpen,
    Both,
}

#[derive(Args, Debug)]
pub struct HstarArgs {
    pub input: String,
    #[arg(long, value_enum, default_value = "counting")]
    pub method: HstarMethod,
}

#[derive(Args, Debug)]
pub struct IdpArgs {
    pub input: String,
    /// Check levels 1..=K for a K above the default d - 2.
    #[arg(long, value_name = "K")]
    pub paranoid: Option<usize>,
    /// Largest dilation to materialize, in lattice points.
    #[arg(long, default_value_t = ehrhart_core::idp::DEFAULT_POINT_BUDGET)]
    pub budget: u128,
}

#[derive(Args, Debug)]
pub struct PointsArgs {
    pub input: String,
    #[arg(short, long, default_value_t = 1)]
    pub k: u64,
}

#[derive(Args, Debug)]
pub struct CountArgs {
    pub input: String,
    /// Dilation factors; repeat for several.
    #[arg(short, long, default_values_t = [1u64])]
    pub k: Vec<u64>,
}

#[derive(Args, Debug)]
pub struct ArcArgs {
    /// Digraph JSON file, `-` for stdin, or `@figure1`.
    pub input: String,
    /// Output the image in its own lattice instead of `Z^n`.
    #[arg(long)]
    pub normalize: bool,
}

#[derive(Args, Debug)]
pub struct EquivArgs {
    pub first: String,
    pub second: String,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum IdpLevelArg {
    Off,
    Necessary,
    Full,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 200)]
    pub steps: u64,
    /// Largest vertex count (default dim + 3).
    #[arg(long)]
    pub vertex_budget: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub coord_range: i64,
    #[arg(long, value_enum, default_value = "full")]
    pub idp_level: IdpLevelArg,
    #[arg(long, default_value_t = 0.05)]
    pub temperature: f64,
    #[arg(long, default_value_t = 0.995)]
    pub cooling: f64,
    /// Start from this polytope (same input forms as elsewhere).
    #[arg(long)]
    pub init: Option<String>,
    /// Directory for candidates.jsonl and runlog.jsonl.
    #[arg(long, default_value = "search-results")]
    pub out: std::path::PathBuf,
}

/// Output of a command: text for stdout and the exit code.
pub struct Outcome {
    pub stdout: String,
    pub code: u8,
}

fn run_limited(cli: Cli) -> Result<Outcome, Failure> {
    let Some(limit) = cli.time_limit else {
        return commands::run(cli.command);
    };
    if !(limit > 0.0) {
        return Err(Failure::input("--time-limit must be positive"));
    }
    let (tx, rx) = mpsc::channel();
    std::thread::spawn(move || {
        let _ = tx.send(commands::run(cli.command));
    });
    match rx.recv_timeout(Duration::from_secs_f64(limit)) {
        Ok(r) => r,
        Err(_) => Err(Failure::undecided(format!("undecided: time limit of {limit}s exceeded"))),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(EXIT_USAGE);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INTERNAL);
        }
    }
    match run_limited(cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.code)
        }
        Err(f) => {
            if f.code == EXIT_UNDECIDED {
                println!("{}", serde_json::json!({ "status": "undecided", "reason": f.message }));
            }
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
