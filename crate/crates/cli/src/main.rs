//! `mindist` command-line tool.

mod args;
mod commands;
mod error;
mod format;
mod manifest;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::parser::ValueSource;
use clap::{CommandFactory, FromArgMatches};

use args::{Cli, Command, Global};
use error::CliError;
use manifest::{RunManifest, TOOL, VERSION};

fn main() -> ExitCode {
    let matches = Cli::command().get_matches();
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    let from_cli = |id: &str| matches.value_source(id) == Some(ValueSource::CommandLine);
    let result = match &cli.command {
        Command::Replay(r) => RunManifest::load(&r.file).and_then(|m| {
            // flags given on this command line override the recorded ones
            let mut g = m.global();
            if from_cli("workers") {
                g.workers = cli.global.workers;
            }
            if from_cli("format") {
                g.format = cli.global.format;
            }
            g.manifest = cli.global.manifest.clone();
            execute(&m.parameters, &g)
        }),
        cmd => execute(cmd, &cli.global),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(cmd: &Command, g: &Global) -> Result<(), CliError> {
    let start = Instant::now();
    let out = commands::run(cmd, g)?;
    let manifest = RunManifest {
        tool: TOOL.into(),
        version: VERSION.into(),
        command: cmd.name().into(),
        parameters: cmd.clone(),
        format: g.format.unwrap_or_else(|| commands::default_format(cmd)),
        digits: g.digits,
        budget: g.budget,
        master_seed: out.seed,
        workers: g.workers(),
        wall_time_s: start.elapsed().as_secs_f64(),
        regime: out.regime,
    };
    std::io::stdout().write_all(out.body.as_bytes())?;
    let mut err = std::io::stderr().lock();
    for w in &out.warnings {
        writeln!(err, "warning: {w}")?;
    }
    writeln!(err, "{}", serde_json::to_string(&manifest)?)?;
    if let Some(path) = &g.manifest {
        std::fs::write(path, serde_json::to_string_pretty(&manifest)? + "\n")?;
    }
    Ok(())
}
