//! Command-line front end for the `qfi_gme` criteria.

pub mod args;
pub mod commands;
pub mod criterion;
pub mod error;
pub mod family;
pub mod scan;
pub mod state;

use std::io::Write;

pub use args::{Cli, Command, Format};
pub use error::{CliError, Result};

use commands::{EnsembleArgs, GridArgs, Output, ScanArgs};

/// Exit code for any error.
pub const EXIT_ERROR: i32 = 2;

pub fn execute(cli: &Cli) -> Result<Output> {
    let g = &cli.global;
    match &cli.command {
        Command::Eval {
            state,
            criterion,
            bounds,
        } => commands::eval(state, criterion, bounds, g.format),
        Command::Scan {
            family,
            criterion,
            lo,
            hi,
            samples,
            bounds,
        } => commands::scan_command(
            &ScanArgs {
                family,
                criterion,
                lo: *lo,
                hi: *hi,
                samples: *samples,
                tol: g.tol,
                bounds,
            },
            g.format,
        ),
        Command::Grid {
            resolution,
            x_min,
            x_max,
            y_min,
            y_max,
        } => commands::grid_command(
            &GridArgs {
                resolution: *resolution,
                x: (*x_min, *x_max),
                y: (*y_min, *y_max),
            },
            g.format,
        ),
        Command::Bounds { d } => commands::bounds(d, g.format),
        Command::Compare { family, samples } => {
            commands::compare_command(family, *samples, g.tol, g.format)
        }
        Command::Ensemble {
            kind,
            dims,
            count,
            criterion,
            rank,
            terms,
            bounds,
        } => commands::ensemble_command(
            &EnsembleArgs {
                kind: *kind,
                dims,
                count: *count,
                criterion,
                rank: *rank,
                terms: *terms,
                seed: g.seed,
                bounds,
            },
            g.format,
        ),
    }
}

/// Runs the command, writes its output and returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let output = match execute(cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_ERROR;
        }
    };
    for note in &output.notes {
        eprintln!("note: {note}");
    }
    let written = match &cli.global.out {
        Some(path) => std::fs::write(path, &output.body).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => std::io::stdout()
            .write_all(output.body.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
    };
    match written {
        Ok(()) => output.status.code(),
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}
