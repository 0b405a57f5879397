//! `freeprice`: spectrum, traveling waves, simulation, sweeps and a
//! self-verification suite for the moving-frame price model.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod output;
mod settings;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Command;

use settings::{keys_for, with_key_flags, ConfigError, Settings};

const EXIT_CONFIG: u8 = 2;
const EXIT_RUNTIME: u8 = 1;

fn cli() -> Command {
    let sub = |name: &'static str, about: &'static str| with_key_flags(Command::new(name).about(about), &keys_for(name));
    Command::new("freeprice")
        .about("Free-boundary price model: linear spectrum, traveling waves, Crank-Nicolson runs")
        .version(env!("CARGO_PKG_VERSION"))
        .subcommand_required(true)
        .arg_required_else_help(true)
        .subcommand(sub("spectrum", "Imaginary-axis crossings of the linearization and the crossing curves"))
        .subcommand(sub("waves", "Closed-form traveling wave profile and its existence map"))
        .subcommand(sub("simulate", "Integrate the moving-frame equation and analyse the trace"))
        .subcommand(sub("sweep", "Simulate and classify a list of couplings R"))
        .subcommand(sub("verify", "Run the cross-module invariant suite"))
}

fn run(name: &str, matches: &clap::ArgMatches) -> anyhow::Result<u8> {
    let settings = Settings::load(&keys_for(name), matches)?;
    match name {
        "spectrum" => commands::spectrum(&settings),
        "waves" => commands::waves(&settings),
        "simulate" => commands::simulate_cmd(&settings),
        "sweep" => commands::sweep(&settings),
        "verify" => commands::verify(&settings),
        other => unreachable!("unregistered subcommand {other}"),
    }
}

fn main() -> ExitCode {
    let matches = match cli().try_get_matches() {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_CONFIG),
            };
        }
    };
    let (name, sub) = matches.subcommand().expect("subcommand is required");
    match run(name, sub) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<ConfigError>().is_some() {
                ExitCode::from(EXIT_CONFIG)
            } else {
                ExitCode::from(EXIT_RUNTIME)
            }
        }
    }
}
