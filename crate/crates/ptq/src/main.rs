use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ptq::report::fmt_f64;
use ptq::{run_scenario, sweep, Axis, ExperimentError, RunArgs};
use ptq_core::PtSystem;

#[derive(Debug, Parser)]
#[command(
    name = "ptq",
    version,
    about = "No-signaling checks for bipartite PT-symmetric systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evolve one subsystem over a time grid and track the other's entropy.
    Run(RunArgs),
    /// Repeat a run over values of one Hamiltonian parameter.
    Sweep {
        #[arg(long, value_enum)]
        axis: Axis,
        /// Comma-separated parameter values.
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        values: Vec<f64>,
        #[command(flatten)]
        args: RunArgs,
    },
    /// Classify (γ, ζ) and print the spectrum of H.
    Validate {
        #[arg(long, allow_hyphen_values = true)]
        gamma: f64,
        #[arg(long, allow_hyphen_values = true)]
        zeta: f64,
    },
}

fn write_out(out: Option<PathBuf>, bytes: &[u8]) -> Result<(), ExperimentError> {
    match out {
        Some(path) => std::fs::write(path, bytes)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn verdict(pass: bool) -> u8 {
    if pass {
        0
    } else {
        1
    }
}

fn execute(cli: Cli) -> Result<u8, ExperimentError> {
    match cli.command {
        Command::Run(args) => {
            let out = args.out.clone();
            let config = args.resolve()?;
            let report = run_scenario(&config)?;
            write_out(out, &report.emit(config.format)?)?;
            Ok(verdict(report.pass))
        }
        Command::Sweep { axis, values, args } => {
            let out = args.out.clone();
            let config = args.resolve()?;
            let report = sweep(&config, axis, &values)?;
            write_out(out, &report.emit(config.format)?)?;
            Ok(verdict(report.pass))
        }
        Command::Validate { gamma, zeta } => {
            let system = PtSystem::from_gamma_zeta(gamma, zeta)?;
            let spectrum = system.spectrum();
            let [l0, l1] = spectrum.eigenvalues;
            let residual = match system.pseudo_hermiticity_residual() {
                Ok(r) => fmt_f64(r),
                Err(_) => "n/a".to_owned(),
            };
            let text = format!(
                "phase={}\neigenvalues={}{:+.16e}i,{}{:+.16e}i\nresidual={}\n",
                system.phase(),
                fmt_f64(l0.re),
                l0.im,
                fmt_f64(l1.re),
                l1.im,
                residual
            );
            write_out(None, text.as_bytes())?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("ptq: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
