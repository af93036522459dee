//! Batch front end for the texture descriptor: extract features from a
//! class-per-subdirectory dataset into CSV, evaluate them with k-NN under a
//! holdout or k-fold protocol, and check transform invariance on single
//! images.
//!
//! Exit codes: 0 success, 1 invariance violation, 2 usage or input error.

mod eval;
mod extract;
mod invariance;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "bitdesc",
    version,
    about = "Bio-inspired texture descriptor toolkit",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract feature vectors for every image under a dataset directory.
    Extract(extract::ExtractArgs),
    /// Evaluate a feature CSV with k-NN under a holdout or k-fold protocol.
    Eval(eval::EvalArgs),
    /// Re-extract features after image transforms and report the differences.
    Invariance(invariance::InvarianceArgs),
}

fn main() -> ExitCode {
    // Rust starts with SIGPIPE ignored, which turns `bitdesc ... | head`
    // into a broken-pipe panic; restore the conventional silent exit.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }

    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Extract(args) => extract::run(args),
        Command::Eval(args) => eval::run(args),
        Command::Invariance(args) => invariance::run(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
