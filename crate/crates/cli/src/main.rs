//! `helix-otto` command-line front end.
//!
//! Exit status: 0 on success, 1 when a solver or file operation fails,
//! 2 for usage errors.

mod args;
mod commands;
mod config;
mod format;
mod output;
mod plot;

use std::ffi::OsString;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::Failure;

/// Caps the worker threads used for sweeps and spectrum solves.
const THREADS_ENV: &str = "HELIX_OTTO_THREADS";

fn thread_pool() -> Result<Option<rayon::ThreadPool>, Failure> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(None);
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| Failure::Usage(format!("{THREADS_ENV} must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map(Some)
        .map_err(|e| Failure::Io(format!("cannot start thread pool: {e}")))
}

fn run(cli: Cli) -> Result<(), Failure> {
    let (text, out) = {
        let pool = thread_pool()?;
        let work = || match &cli.command {
            Command::Geometry(a) => commands::geometry(a).map(|t| (t, a.output.clone())),
            Command::Spectrum(a) => commands::spectrum(a).map(|t| (t, a.output.clone())),
            Command::Cycle(a) => commands::cycle(a).map(|t| (t, a.output.clone())),
            Command::Sweep(a) => commands::sweep(a).map(|t| (t, a.output.clone())),
        };
        match pool {
            Some(p) => p.install(work)?,
            None => work()?,
        }
    };
    output::emit(out.as_deref(), &text).map_err(|e| {
        let target = out.as_deref().unwrap_or(Path::new("<stdout>"));
        Failure::Io(format!("cannot write {}: {e}", target.display()))
    })
}

fn args_with_config() -> Result<Vec<OsString>, Failure> {
    let mut args: Vec<OsString> = std::env::args_os().collect();
    if let Some(path) = config::take_config_path(&mut args).map_err(Failure::Usage)? {
        let extra = config::load(Path::new(&path)).map_err(Failure::Usage)?;
        config::splice_after_subcommand(&mut args, extra);
    }
    Ok(args)
}

fn main() -> ExitCode {
    let result = args_with_config().and_then(|args| {
        // clap prints help/version itself and exits 0, usage errors exit 2
        let cli = Cli::try_parse_from(args).unwrap_or_else(|e| e.exit());
        run(cli)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(msg) | Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
