#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod table;

use std::process::ExitCode;

use clap::Parser;
use parity_metrology::Error as LibError;

use args::{Cli, Command, InputError, SweepSpec};
use commands::CheckFailed;

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Signal(a) => {
            commands::signal(&SweepSpec::resolve(&a, commands::signal_defaults())?)
        }
        Command::SensitivitySurface(a) => {
            commands::sensitivity_surface(&SweepSpec::resolve(&a, commands::surface_defaults())?)
        }
        Command::Tmsn(a) => commands::tmsn(&a),
        Command::OracleCheck(a) => commands::oracle_check(&a),
        Command::Figure(a) => commands::figure(&a),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.is::<InputError>() {
        return 2;
    }
    match err.downcast_ref::<LibError>() {
        Some(LibError::InvalidParameter { .. } | LibError::Domain { .. }) => 2,
        _ if err.is::<CheckFailed>() => 1,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
