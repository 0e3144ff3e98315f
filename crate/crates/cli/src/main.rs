mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "holant", version, about = "Exact classification and evaluation of Holant(f | =3) instances")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Edge cap for brute-force evaluation.
    #[arg(long, global = true)]
    max_edges: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
pub enum Command {
    /// Complexity of Holant(f | =3) for a nonnegative ternary f.
    Classify {
        #[arg(long)]
        signature: String,
    },
    /// Brute-force Holant value of a closed grid.
    Eval {
        #[arg(long)]
        input: PathBuf,
        /// Put this f on every left vertex.
        #[arg(long)]
        signature: Option<String>,
    },
    /// Polynomial-time value for tractable f, refusal otherwise.
    Solve {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        signature: Option<String>,
        /// Re-check against brute force.
        #[arg(long)]
        oracle: bool,
        /// Evaluate #P-hard instances by brute force instead of refusing.
        #[arg(long)]
        brute_force: bool,
    },
    /// Weighted perfect matchings of an embedded planar graph.
    PmCount {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        oracle: bool,
    },
    /// Subsets of hyperedges covering every vertex once or twice, for a
    /// planar hypergraph; a grid file with rotations is also accepted.
    SolvePlanarCover {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        oracle: bool,
    },
    /// Signature of a gadget over its dangling ports.
    Contract {
        #[arg(long)]
        input: PathBuf,
    },
    /// Smallest gadget realizing a target signature up to a positive scale.
    SearchGadget {
        #[arg(long)]
        signature: String,
        /// Symmetric or dense target weights.
        #[arg(long)]
        target: String,
        /// Polarity of each dangling port, e.g. "LLL" or "LR".
        #[arg(long)]
        polarity: Option<String>,
        #[arg(long, default_value_t = 4)]
        max_f: usize,
        #[arg(long, default_value_t = 3)]
        max_eq: usize,
    },
    /// Recovers a grid value with projector placeholders by interpolation.
    InterpDemo {
        #[arg(long)]
        signature: String,
        /// Grid whose [L,R] mixed vertices are the placeholders; defaults to
        /// a triple edge with two of its edges subdivided.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Exact checks of the algebraic identities behind the classification.
    VerifyIdentities {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
    /// Exact covers of a 3-regular 3-uniform set system.
    X3cCount {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        oracle: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli.command, cli.max_edges) {
        Ok(report) => {
            report.print(cli.format);
            ExitCode::from(report.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
