// `!(x > y)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{config_flags, find_config, with_config, Cli};
use commands::Outcome;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let argv = match find_config(&argv) {
        Some((_, path)) => match std::fs::read_to_string(&path)
            .map_err(|e| e.to_string())
            .and_then(|t| config_flags(&t))
        {
            Ok(flags) => with_config(&argv, flags),
            Err(e) => {
                eprintln!("error: config file {}: {e}", path.display());
                return ExitCode::from(2);
            }
        },
        None => argv,
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if let Some(w) = cli
        .command
        .common()
        .workers
        .or_else(symdunkl::summability::sweep::workers_from_env)
    {
        // Only fails if a pool already exists.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(w).build_global();
    }
    match commands::run(&cli.command) {
        Ok(Outcome::Passed) => ExitCode::SUCCESS,
        Ok(Outcome::Failed(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
