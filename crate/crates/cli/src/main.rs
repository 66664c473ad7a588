use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use lambda_tree::format::round_g;
use lambda_tree::Error as ModelError;

mod commands;

#[derive(Parser)]
#[command(
    name = "lambda-tree",
    version,
    about = "Ground states, Gibbs measures and phase diagrams of the three-state lambda-model on the binary Cayley tree"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report which ball-energy regions attain the minimum.
    Classify {
        #[command(flatten)]
        params: Couplings,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[command(flatten)]
        out: Output,
    },
    /// List level-periodic ground states and verify them on a finite truncation.
    Ground(commands::GroundArgs),
    /// Translation-invariant and two-periodic fixed points of the recursion.
    Solve {
        #[command(flatten)]
        params: AnyParams,
        #[command(flatten)]
        out: Output,
    },
    /// Evaluate the solver on every point of a parameter grid.
    Sweep {
        /// JSON grid description.
        #[arg(long)]
        config: PathBuf,
        /// Worker threads; defaults to all cores.
        #[arg(long, env = "LAMBDA_TREE_THREADS")]
        threads: Option<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// Check the compatibility condition between the measures on V_{n-1} and V_n.
    Consistency(commands::FieldArgs),
    /// Print the finite-volume Gibbs distribution on V_n.
    Measure(commands::FieldArgs),
}

#[derive(Args, Clone)]
pub struct Couplings {
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub c: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    /// JSON file with a, b, c and optionally beta.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Clone)]
pub struct AnyParams {
    #[command(flatten)]
    pub couplings: Couplings,
    #[arg(long, conflicts_with_all = ["a", "b", "c", "beta"])]
    pub xw: Option<f64>,
    #[arg(long, conflicts_with_all = ["a", "b", "c", "beta"])]
    pub yw: Option<f64>,
    #[arg(long, conflicts_with_all = ["a", "b", "c", "beta"])]
    pub zw: Option<f64>,
}

#[derive(Args, Clone)]
pub struct Output {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Output {
    pub fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    pub fn emit(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
            None => {
                let mut stdout = io::stdout().lock();
                stdout.write_all(text.as_bytes())?;
                stdout.flush()?;
                Ok(())
            }
        }
    }
}

/// Rounds every float in a JSON tree to 15 significant digits.
pub fn rounded(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => n.as_f64().map(|x| json!(round_g(x))).unwrap_or(Value::Null),
        Value::Array(a) => Value::Array(a.into_iter().map(rounded).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, rounded(v))).collect()),
        other => other,
    }
}

pub fn json_text(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&rounded(v)).expect("serializable");
    s.push('\n');
    s
}

pub fn read_json(path: &PathBuf) -> Result<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<ModelError>() {
        Some(ModelError::Capacity(_)) => 3,
        Some(ModelError::Internal(_) | ModelError::NotDivisible(_)) => 4,
        _ => 2,
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Classify { params, tol, out } => commands::classify(&params, tol, &out),
        Command::Ground(args) => commands::ground(&args),
        Command::Solve { params, out } => commands::solve(&params, &out),
        Command::Sweep { config, threads, out } => {
            if threads == Some(0) {
                bail!("thread count must be positive");
            }
            commands::sweep(&config, threads, &out)
        }
        Command::Consistency(args) => commands::consistency(&args),
        Command::Measure(args) => commands::measure(&args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
