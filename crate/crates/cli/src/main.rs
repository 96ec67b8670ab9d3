//! Command-line front end: scenario configuration, figure presets, CSV and
//! SVG emission, and the acceptance regression runner.

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use pillarpl_cli::runner::{build_scenario, run_check, run_preset, run_spectrum, run_sweep};
use pillarpl_cli::RunArgs;

#[derive(Parser)]
#[command(
    name = "pillarpl",
    version,
    about = "CW photoluminescence simulator for quantum-dot ensembles in high-Purcell microcavities",
    after_help = "Exit codes: 0 success, 1 configuration error, 2 I/O error."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Synthesize two-channel PL spectra and write them as CSV
    Spectrum(RunArgs),
    /// Sweep pump power and extract the measured Q at each point
    Sweep(RunArgs),
    /// Emit the full data bundle for a named preset (fig1, fig2-loQ,
    /// fig2-hiQ, fig3, fig4, fig5)
    Preset {
        name: String,
        #[command(flatten)]
        args: RunArgs,
    },
    /// Run the acceptance suite and print one pass/fail line per criterion
    Check,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            // Usage problems are configuration errors: exit code 1.
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    let result = match &cli.cmd {
        Cmd::Spectrum(args) => {
            build_scenario(args, None).and_then(|s| run_spectrum(&s, &args.out, args.plot))
        }
        Cmd::Sweep(args) => {
            build_scenario(args, None).and_then(|s| run_sweep(&s, &args.out, args.plot))
        }
        Cmd::Preset { name, args } => run_preset(name, args),
        Cmd::Check => return ExitCode::from(run_check() as u8),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
