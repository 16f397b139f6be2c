//! Library half of the `cdw` command-line tool.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod state;
pub mod validate;

use args::{Cli, Command};
use error::CliResult;

pub fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Spectrum(a) => commands::spectrum(a),
        Command::Dynamics(a) => commands::dynamics(a),
        Command::Sweep(a) => commands::sweep_cmd(a),
        Command::Field(a) => commands::field(a),
        Command::Validate(a) => validate::validate(a),
    }
}
