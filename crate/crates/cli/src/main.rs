//! `wallcross`: command-line front end for the exact wallcrossing engine.
//!
//! Every subcommand prints one JSON report on stdout. Diagnostics go to
//! stderr. Exit codes: 0 pass, 1 failed check, 2 usage or input error.

mod commands;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "wallcross", version, about = "Exact wallcrossing computations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Structural validation plus consistency warnings for a theory file.
    Validate {
        #[arg(long)]
        theory: String,
    },
    /// Walls of a charge with their decompositions.
    Walls {
        #[arg(long)]
        theory: String,
        /// Charge as "r,e".
        #[arg(long, allow_hyphen_values = true)]
        charge: String,
        /// Upper end of the window (defaults to the theory's delta_max).
        #[arg(long)]
        delta_max: Option<String>,
    },
    /// A(α) in one chamber.
    Invariant {
        #[arg(long)]
        theory: String,
        #[arg(long, allow_hyphen_values = true)]
        charge: String,
        /// "delta=p/q[+|-]", "0-", "0+", "inf" or "-inf".
        #[arg(long, allow_hyphen_values = true)]
        chamber: String,
    },
    /// Jump of A(α) across a wall ("0" for the origin), checked against the chamber values.
    Cross {
        #[arg(long)]
        theory: String,
        #[arg(long, allow_hyphen_values = true)]
        charge: String,
        #[arg(long)]
        wall: String,
    },
    /// Generating function Z(q)_r as a rational function.
    Zfun {
        #[arg(long)]
        theory: String,
        #[arg(long)]
        rank: i64,
        #[arg(long, allow_hyphen_values = true)]
        chamber: String,
        /// Also print the Laurent expansion up to this exponent (down to its negative for -inf).
        #[arg(long)]
        expand: Option<i64>,
    },
    /// Product identity in the truncated Lie algebra along one wall.
    KsCheck {
        #[arg(long)]
        theory: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        #[arg(long)]
        wall: String,
        /// Truncation order Q.
        #[arg(long = "order", visible_alias = "Q", default_value_t = 3)]
        order: i64,
    },
    /// Commutator identities in the free algebra for every charge and wall in range.
    HallCheck {
        #[arg(long)]
        rank_cap: i64,
        #[arg(long, default_value_t = 6)]
        degree_bound: i64,
        #[arg(long, default_value = "12")]
        delta_max: String,
    },
    /// Alternating Bell identity for 1..=n.
    Bell {
        #[arg(long)]
        n: u32,
    },
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    match commands::run(cli.command, &args) {
        Ok(report) => {
            // a closed pipe is not an error worth reporting
            let _ = writeln!(std::io::stdout().lock(), "{}", report.render());
            if report.pass == Some(false) {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
