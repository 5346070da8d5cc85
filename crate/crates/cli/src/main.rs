//! `plaurent`: classify and invert matrix pencils around a singularity, and
//! analyze/simulate I(1)/I(2) autoregressive models.
//!
//! Exit codes: 0 success/PASS, 1 verification FAIL, 2 invalid input,
//! 3 unsupported pole order or no singularity, 4 assumption violated.

mod commands;
mod docs;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use commands::{CmdError, CmdResult, EXIT_BAD_INPUT};
use docs::ErrorReport;

#[derive(Parser)]
#[command(name = "plaurent", version, about = "Laurent inversion of matrix pencils and Granger-Johansen analysis of AR models")]
struct Cli {
    #[command(subcommand)]
    command: TopCommand,
}

#[derive(Subcommand)]
enum TopCommand {
    /// Analyze a pencil document around its center.
    #[command(subcommand)]
    Pencil(PencilCommand),
    /// Analyze and simulate an autoregressive model document.
    #[command(subcommand)]
    Ar(ArCommand),
}

#[derive(Args)]
struct AnalysisFlags {
    /// Relative rank tolerance (default: max(rows, cols) * machine epsilon).
    #[arg(long)]
    rank_tol: Option<f64>,
    /// Complement choice: orthogonal | random.
    #[arg(long, default_value = "orthogonal")]
    complements: String,
    /// Seed for random complements (and any other seeded choice).
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum PencilCommand {
    /// Pole-order classification: order, dim K, dim K1, range defect.
    Classify {
        /// Pencil JSON document.
        input: PathBuf,
        #[command(flatten)]
        flags: AnalysisFlags,
    },
    /// Laurent coefficients N_{-m} ... N_J of the inverse at the center.
    Laurent {
        input: PathBuf,
        /// Truncation index J.
        #[arg(long, default_value_t = 3)]
        max_order: usize,
        #[command(flatten)]
        flags: AnalysisFlags,
    },
    /// Cross-check the recursive coefficients against contour integration
    /// and the identity expansion; exit 0 PASS / 1 FAIL.
    Verify {
        input: PathBuf,
        /// Contour radius (default: half the distance to the next root).
        #[arg(long)]
        radius: Option<f64>,
        /// Contour nodes.
        #[arg(long, default_value_t = 256)]
        nodes: usize,
        /// Truncation index J.
        #[arg(long, default_value_t = 3)]
        max_order: usize,
        /// Relative rank tolerance.
        #[arg(long)]
        rank_tol: Option<f64>,
    },
}

#[derive(Subcommand)]
enum ArCommand {
    /// Integration order d and principal Laurent coefficients at one.
    Classify {
        /// Model JSON document.
        input: PathBuf,
        #[command(flatten)]
        flags: AnalysisFlags,
    },
    /// Representation operators: N_{-1}, N_{-2} and the MA coefficients.
    Represent {
        input: PathBuf,
        /// Emit at most this many MA coefficients.
        #[arg(long)]
        max_ma: Option<usize>,
        #[arg(long)]
        rank_tol: Option<f64>,
    },
    /// Simulate the AR recursion; write the path JSON to --output.
    Simulate {
        input: PathBuf,
        /// Path length T (values run t = 0..=T).
        #[arg(long, default_value_t = 100)]
        t: usize,
        /// Pre-sample steps simulated before t = 0.
        #[arg(long, default_value_t = 0)]
        burnin: usize,
        /// Override the document's innovation seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Output file for the path JSON.
        #[arg(long)]
        output: PathBuf,
    },
    /// Simulate both the AR recursion and the representation with shared
    /// innovations and report the residual; exit 0 PASS / 1 FAIL.
    Crossval {
        input: PathBuf,
        #[arg(long, default_value_t = 300)]
        t: usize,
        /// Pre-sample steps (default 10 * MA truncation).
        #[arg(long)]
        burnin: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        rank_tol: Option<f64>,
    },
}

fn dispatch(cli: Cli) -> CmdResult {
    match cli.command {
        TopCommand::Pencil(cmd) => match cmd {
            PencilCommand::Classify { input, flags } => {
                commands::pencil_classify(&input, flags.rank_tol, &flags.complements, flags.seed)
            }
            PencilCommand::Laurent {
                input,
                max_order,
                flags,
            } => commands::pencil_laurent(
                &input,
                max_order,
                flags.rank_tol,
                &flags.complements,
                flags.seed,
            ),
            PencilCommand::Verify {
                input,
                radius,
                nodes,
                max_order,
                rank_tol,
            } => commands::pencil_verify(&input, radius, nodes, max_order, rank_tol),
        },
        TopCommand::Ar(cmd) => match cmd {
            ArCommand::Classify { input, flags } => {
                commands::ar_classify(&input, flags.rank_tol, &flags.complements, flags.seed)
            }
            ArCommand::Represent {
                input,
                max_ma,
                rank_tol,
            } => commands::ar_represent(&input, max_ma, rank_tol),
            ArCommand::Simulate {
                input,
                t,
                burnin,
                seed,
                output,
            } => commands::ar_simulate(&input, t, burnin, seed, &output),
            ArCommand::Crossval {
                input,
                t,
                burnin,
                seed,
                rank_tol,
            } => commands::ar_crossval(&input, t, burnin, seed, rank_tol),
        },
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version with code 0; usage errors exit 2,
            // matching the invalid-input convention.
            let code = if e.use_stderr() { EXIT_BAD_INPUT } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let code = match dispatch(cli) {
        Ok(code) => code,
        Err(CmdError {
            code,
            message,
            as_report,
        }) => {
            if as_report {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&ErrorReport { error: message })
                        .expect("error report serializes")
                );
            } else {
                eprintln!("error: {message}");
            }
            code
        }
    };
    std::process::exit(code);
}
