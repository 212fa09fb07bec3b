//! Command-line front end for the eigenvalue fluctuation toolkit.

mod args;
mod commands;
mod svg;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use commands::{execute, exit, write_artifacts};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cmd = &cli.command;

    if let Some(threads) = cmd.output().threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads as usize)
            .build_global()
        {
            eprintln!("error: cannot configure {threads} threads: {e}");
            return ExitCode::from(exit::USAGE);
        }
    }

    let artifacts = match execute(cmd).and_then(|a| write_artifacts(cmd, &a).map(|()| a)) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.code());
        }
    };
    if artifacts.check_failed {
        eprintln!("check failed: one or more criteria are outside their thresholds");
        return ExitCode::from(exit::CHECK_FAILED);
    }
    ExitCode::from(exit::OK)
}
