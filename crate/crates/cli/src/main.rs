//! `vvlab`: model Navier–Stokes flows, their inviscid limits, and the
//! boundary-layer diagnostics between them, from the command line.
//!
//! Four subcommands: `sweep` drives a viscosity grid and fits the decay
//! exponent of the sup-in-time energy distance; `diagnose` evaluates
//! named boundary-layer diagnostics on the same grid; `selftest` re-runs
//! the library's closed-form identities; `zeros` dumps the Bessel zero
//! table (with spectral coefficients when given a disk profile).
//!
//! Experiments come from a JSON config file, flat flags mirroring its
//! fields (flags win), or both. Runs write `<stem>.csv` and
//! `<stem>.json` and echo one of the two to stdout. Identical configs
//! produce byte-identical CSV: floats are fixed at 17 significant
//! digits, row order is fixed, and one writer emits each artifact after
//! all aggregation. `VVLAB_THREADS` caps the worker pool.

mod config;
mod output;
mod run;
mod selftest;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{ConfigOverrides, ExperimentConfig, Flow, OutputFormat};
use output::{fmt17, Artifacts};

/// Anything that stops a run, with enough context to act on the message.
#[derive(Debug)]
pub enum CliError {
    /// The config file itself could not be read.
    ConfigIo {
        path: PathBuf,
        source: std::io::Error,
    },
    /// The config was malformed (syntax) or invalid (itemized semantics).
    Config(config::ConfigError),
    /// A flag value that does not parse, or an unusable combination.
    Usage(String),
    /// A library computation refused; `context` names the operation and
    /// the viscosity it was working on.
    Core {
        context: String,
        source: vvlab_core::Error,
    },
    /// An artifact could not be written.
    OutputIo {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::ConfigIo { path, source } => {
                write!(f, "cannot read config {path:?}: {source}")
            }
            CliError::Config(e) => write!(f, "{e}"),
            CliError::Usage(detail) => write!(f, "{detail}"),
            CliError::Core { context, source } => write!(f, "{context}: {source}"),
            CliError::OutputIo { path, source } => {
                write!(f, "cannot write {path:?}: {source}")
            }
        }
    }
}

impl std::error::Error for CliError {}

#[derive(Parser)]
#[command(
    name = "vvlab",
    version,
    about = "Viscous model flows, their inviscid limits, and the diagnostics between them",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep a viscosity grid and fit sup_error ~ C nu^alpha.
    #[command(long_about = "Sweep a viscosity grid and fit sup_error ~ C nu^alpha.\n\n\
        Writes <stem>.csv and <stem>.json, echoing one of them to stdout \
        (output.format / --format picks which).\n\n\
        CSV columns:\n  \
        nu             viscosity of the row (rows sorted descending)\n  \
        sup_error      sup over the time grid of the L2 distance to the inviscid flow\n  \
        alpha_running  cumulative log-log slope over the rows so far (NaN until two rows)\n\n\
        The JSON summary carries {config_echo, rows, fit, versions}; the echo alone \
        reproduces the run. Of the config's diagnostics list, sweep honors \
        weak_pairing (per-row weak velocity gaps in the JSON); the rest belong to \
        the diagnose subcommand.")]
    Sweep(ConfigOverrides),

    /// Evaluate named diagnostics at every viscosity of the grid.
    #[command(long_about = "Evaluate named diagnostics at every viscosity of the grid.\n\n\
        Writes <stem>.csv and <stem>.json, echoing one of them to stdout.\n\n\
        CSV columns:\n  \
        diagnostic      name, with a sub-label where one value is not enough, e.g. \
        sheet_pairing[f=r^2], lp_norm[p=inf], mass_budget[outside]\n  \
        nu              viscosity of the row\n  \
        t_or_T          the time the value refers to: the horizon T for time-integrated \
        diagnostics (kato_layer, l1_mass, boundary_flux), the evaluation time t \
        (--t, default T) for time-point diagnostics\n  \
        value           the diagnostic value\n  \
        error_estimate  the numerical-error bound the diagnostic certified internally \
        (0 when the value is exact by construction or carries no separately tracked bound)\n\n\
        Diagnostics: kato_layer, l1_mass, boundary_flux, sheet_pairing, weak_pairing, \
        mass_budget, lp_norms. The last four expand into one row per test function, \
        budget component, or exponent.")]
    Diagnose(ConfigOverrides),

    /// Re-derive the closed-form identities the library is built on.
    #[command(long_about = "Re-derive the closed-form identities the library is built on: \
        special-function values, quadrature exactness, spectral coefficients of rigid \
        rotation, wall conditions, the cross-product algebra, config validation. \
        Prints one line per check; exits nonzero if any fails.")]
    Selftest,

    /// Dump the Bessel zero table, or a disk profile's coefficient table.
    #[command(long_about = "Dump the first --count positive zeros of J1 as CSV \
        (k, j1k, j0_at_j1k, sign). With --profile, dump the disk spectral expansion \
        of that profile instead (k, j1k, a_k, sign); the coefficients do not depend \
        on the viscosity.")]
    Zeros(ZerosArgs),
}

#[derive(clap::Args)]
struct ZerosArgs {
    /// How many zeros (table rows).
    #[arg(long, default_value_t = 100, value_name = "N")]
    count: usize,

    /// Disk profile whose spectral coefficients to tabulate
    /// (constant:2 | poly_r2:... | table:path).
    #[arg(long, value_name = "SPEC")]
    profile: Option<String>,

    /// Write the table to this file (used literally) instead of stdout.
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    if let Err(message) = apply_thread_cap() {
        eprintln!("error: {message}");
        return ExitCode::FAILURE;
    }
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

/// Pins the worker pool when VVLAB_THREADS is set, before any parallel
/// work can start.
fn apply_thread_cap() -> Result<(), String> {
    match std::env::var("VVLAB_THREADS") {
        Err(_) => Ok(()),
        Ok(raw) => match raw.parse::<usize>() {
            Ok(n) if n >= 1 => {
                vvlab_core::set_thread_cap(n);
                Ok(())
            }
            _ => Err(format!(
                "VVLAB_THREADS must be a positive integer, got {raw:?}"
            )),
        },
    }
}

fn execute(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Sweep(overrides) => {
            let cfg = config::load(&overrides)?;
            let artifacts = run::sweep(&cfg)?;
            emit(&cfg, &artifacts)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Diagnose(overrides) => {
            let cfg = config::load(&overrides)?;
            let artifacts = run::diagnose(&cfg)?;
            emit(&cfg, &artifacts)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Selftest => Ok(selftest::run()),
        Command::Zeros(args) => {
            let table = zeros_csv(&args)?;
            match &args.output {
                Some(path) => {
                    std::fs::write(path, table).map_err(|source| CliError::OutputIo {
                        path: path.clone(),
                        source,
                    })?;
                    eprintln!("wrote {}", path.display());
                }
                None => print!("{table}"),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// Writes both artifacts and echoes the configured one to stdout.
fn emit(cfg: &ExperimentConfig, artifacts: &Artifacts) -> Result<(), CliError> {
    let write = |path: PathBuf, contents: &str| -> Result<PathBuf, CliError> {
        std::fs::write(&path, contents)
            .map_err(|source| CliError::OutputIo {
                path: path.clone(),
                source,
            })
            .map(|_| path)
    };
    let csv_path = write(PathBuf::from(format!("{}.csv", cfg.output.path)), &artifacts.csv)?;
    let json_path = write(PathBuf::from(format!("{}.json", cfg.output.path)), &artifacts.json)?;
    match cfg.output.format {
        OutputFormat::Csv => print!("{}", artifacts.csv),
        OutputFormat::Json => print!("{}", artifacts.json),
    }
    eprintln!("wrote {} and {}", csv_path.display(), json_path.display());
    Ok(())
}

/// The zero table (or a profile's coefficient table) as CSV.
fn zeros_csv(args: &ZerosArgs) -> Result<String, CliError> {
    if args.count < 1 || args.count > 100_000 {
        return Err(CliError::Usage(format!(
            "--count must be between 1 and 100000, got {}",
            args.count
        )));
    }
    match &args.profile {
        None => {
            let table = vvlab_core::specfun::j1_zeros(args.count).map_err(|source| {
                CliError::Core {
                    context: "zeros".into(),
                    source,
                }
            })?;
            let mut csv = String::from("k,j1k,j0_at_j1k,sign\n");
            for k in 0..table.count {
                csv.push_str(&format!(
                    "{},{},{},{}\n",
                    k + 1,
                    fmt17(table.zeros[k]),
                    fmt17(table.j0_at_zeros[k]),
                    table.signs[k] as i64
                ));
            }
            Ok(csv)
        }
        Some(spec) => {
            let profile = config::profile_from_spec(spec, Flow::Disk, std::path::Path::new("."))?
                .build_disk()
                .map_err(|source| CliError::Core {
                    context: "profile".into(),
                    source,
                })?;
            // Coefficients depend on the profile alone; the viscosity of
            // the backing solution is irrelevant to the table.
            let sol = vvlab_core::disk::DiskSpectralSolution::new(profile, 1.0, args.count)
                .map_err(|source| CliError::Core {
                    context: "disk solution".into(),
                    source,
                })?;
            let mut csv = String::from("k,j1k,a_k,sign\n");
            for k in 0..sol.modes() {
                csv.push_str(&format!(
                    "{},{},{},{}\n",
                    k + 1,
                    fmt17(sol.table.zeros[k]),
                    fmt17(sol.coeffs[k]),
                    sol.table.signs[k] as i64
                ));
            }
            Ok(csv)
        }
    }
}
