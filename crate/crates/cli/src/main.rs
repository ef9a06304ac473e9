//! `fractal-fdm`: command-line front end for the `minkowski-fdm` library.

mod args;
mod manifest;
mod run;

use std::process::ExitCode;

use anyhow::Result;
use clap::Parser;

use args::{Cli, Command};
use manifest::Manifest;
use run::UsageError;

fn execute(command: Command) -> Result<()> {
    let rendered = match &command {
        Command::Curve(a) => run::curve(a)?,
        Command::Laplacian(a) => run::laplacian(a)?,
        Command::Heat(a) => run::heat(a)?,
        Command::Wave(a) => run::wave(a)?,
        Command::DirichletError(a) => run::dirichlet(a)?,
        Command::Bound(a) => run::bound(a)?,
        Command::Replay(a) => {
            let manifest = Manifest::read(&a.manifest)?;
            let mut cmd = manifest.command()?;
            if let Some(out) = cmd.output_mut() {
                out.out = Some(a.out.clone().unwrap_or(manifest.output_path));
                out.format = manifest.format;
            }
            return execute(cmd);
        }
    };
    let mut command = command;
    let output = command.output_mut().cloned().unwrap_or_default();
    run::emit(&rendered, output.out.as_deref())?;
    if let Some(path) = &output.out {
        Manifest::new(&command, path, output.format)?.write()?;
    }
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    use minkowski_fdm::Error as E;
    if err.downcast_ref::<UsageError>().is_some() {
        return 2;
    }
    match err.downcast_ref::<E>() {
        Some(E::Diverged { .. }) => 3,
        Some(E::LevelCap { .. }) => 4,
        Some(E::InvalidArgument(_) | E::DimensionMismatch { .. }) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
