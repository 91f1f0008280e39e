//! `quadreg`: regulators, Pell solutions, cycles, h(x) and simulated Fourier
//! distributions for real quadratic fields, printed as JSON.
//!
//! Exit codes: 0 success, 2 invalid input, 3 quantum trials exhausted,
//! 4 resource cap hit, 1 anything else.

mod commands;
mod output;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "quadreg", version, about = "Regulators and Pell solutions of real quadratic fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Cycle,
    Quantum,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Regulator of Q(√d) for square-free d.
    Regulator {
        d: u64,
        #[arg(long, default_value_t = 10)]
        digits: u32,
        #[arg(long, value_enum, default_value_t = Method::Cycle)]
        method: Method,
        /// Grid size N for the quantum method (default: finest needed for weak periodicity).
        #[arg(long)]
        grid: Option<u64>,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Fundamental solution of x² − dy² = 1 and its first powers.
    Pell {
        d: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// Principal cycle: reduced ideals and their distances.
    Cycle {
        d: u64,
        #[arg(long, default_value_t = 16)]
        digits: u32,
    },
    /// h(x): the last cycle member at distance ≤ x and the gap.
    H {
        d: u64,
        /// Non-negative decimal, read exactly.
        #[arg(allow_hyphen_values = true)]
        x: String,
        /// Decimal digits of the reported distances.
        digits: u32,
    },
    /// Fourier output distribution of the simulated period finder.
    Qdist {
        d: u64,
        /// Grid size N.
        n: u64,
        /// Full mixture over all measured values instead of sampling.
        #[arg(long)]
        exhaustive: bool,
        /// Measurements to draw when sampling.
        #[arg(long, default_value_t = 16)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Override q = 2^e (must still satisfy q ≥ 3S²).
        #[arg(long)]
        q_exponent: Option<u32>,
        /// Smallest probability listed in the distribution.
        #[arg(long, default_value_t = 1e-9)]
        min_prob: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let (echo, outcome) = match &cli.command {
        Command::Regulator { d, digits, method, grid, trials, seed } => (
            json!({ "name": "regulator", "d": d, "digits": digits, "method": format!("{method:?}").to_lowercase(),
                    "grid": grid, "trials": trials, "seed": seed }),
            commands::regulator(*d, *digits, *method, *grid, *trials, *seed),
        ),
        Command::Pell { d, count } => {
            (json!({ "name": "pell", "d": d, "count": count }), commands::pell(*d, *count))
        }
        Command::Cycle { d, digits } => {
            (json!({ "name": "cycle", "d": d, "digits": digits }), commands::cycle(*d, *digits))
        }
        Command::H { d, x, digits } => {
            (json!({ "name": "h", "d": d, "x": x, "digits": digits }), commands::h(*d, x, *digits))
        }
        Command::Qdist { d, n, exhaustive, count, seed, q_exponent, min_prob } => (
            json!({ "name": "qdist", "d": d, "N": n, "exhaustive": exhaustive, "count": count, "seed": seed,
                    "q_exponent": q_exponent, "min_prob": format!("{min_prob:e}") }),
            commands::qdist(*d, *n, *exhaustive, *count, *seed, *q_exponent, *min_prob),
        ),
    };
    let elapsed_ms = start.elapsed().as_millis() as u64;
    match outcome {
        Ok((field, result)) => {
            let record = json!({ "command": echo, "field": field, "result": result, "elapsed_ms": elapsed_ms });
            println!("{}", serde_json::to_string_pretty(&record).expect("serializable"));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("quadreg: {e}");
            let record = json!({ "command": echo, "error": e.to_json(), "elapsed_ms": elapsed_ms });
            println!("{}", serde_json::to_string_pretty(&record).expect("serializable"));
            ExitCode::from(e.code as u8)
        }
    }
}
