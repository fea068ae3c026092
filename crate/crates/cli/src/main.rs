//! `qsc`: compose state-based input/output system models (classical
//! linear or quantum stochastic), check the algebraic residuals, and run
//! the product-formula convergence experiments.

use clap::{Parser, Subcommand};
use qsc_cli::commands::{self, CommonArgs};

#[derive(Parser)]
#[command(
    name = "qsc",
    version,
    about = "Composition algebra and simulation of input/output system models",
    after_help = "Exit codes: 0 success, 1 threshold or validation failure, 2 parse or I/O error."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the file's composition expression and write the composite model
    Compose {
        #[command(flatten)]
        args: CommonArgs,
        /// Fail (exit 1) unless the composite is a unitary generator
        #[arg(long)]
        require_unitary: bool,
    },
    /// Report unitarity, group-inverse and homomorphism residuals
    Check {
        #[command(flatten)]
        args: CommonArgs,
    },
    /// Exponential map: turn a Lie-algebra system into a group element
    Exp {
        #[command(flatten)]
        args: CommonArgs,
        /// System name (defaults to the file's only system)
        #[arg(long)]
        system: Option<String>,
    },
    /// Principal-branch logarithm: turn a group element into a Lie-algebra system
    Log {
        #[command(flatten)]
        args: CommonArgs,
        /// System name (defaults to the file's only system)
        #[arg(long)]
        system: Option<String>,
    },
    /// Interval-wise product convergence experiment against the series-product oracle
    Trotter {
        #[command(flatten)]
        args: CommonArgs,
        /// Reverse the factor order (and the oracle accordingly)
        #[arg(long)]
        swap: bool,
        /// Keep the factor order but target the reversed composition's oracle
        #[arg(long)]
        control: bool,
    },
    /// Time-ordered exponential convergence experiment
    Holevo {
        #[command(flatten)]
        args: CommonArgs,
        /// System name (defaults to the file's only system)
        #[arg(long)]
        system: Option<String>,
    },
    /// Integrate a classical model over a grid and emit the output samples
    ClassicalResponse {
        #[command(flatten)]
        args: CommonArgs,
        /// System name (defaults to the file's only system)
        #[arg(long)]
        system: Option<String>,
    },
    /// Weyl commutation-relation residual sweep over cutoffs and norm caps
    WeylCheck {
        #[command(flatten)]
        args: CommonArgs,
    },
}

fn main() {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Compose {
            args,
            require_unitary,
        } => commands::compose(args, *require_unitary),
        Command::Check { args } => commands::check(args),
        Command::Exp { args, system } => commands::exp_command(args, system.as_deref()),
        Command::Log { args, system } => commands::log_command(args, system.as_deref()),
        Command::Trotter {
            args,
            swap,
            control,
        } => commands::trotter(args, *swap, *control),
        Command::Holevo { args, system } => commands::holevo(args, system.as_deref()),
        Command::ClassicalResponse { args, system } => {
            commands::classical_response(args, system.as_deref())
        }
        Command::WeylCheck { args } => commands::weyl_check(args),
    };
    if let Err(failure) = result {
        eprintln!("error: {:#}", failure.error);
        std::process::exit(failure.code);
    }
}
