//! `abssep` command-line front end. Exit status: 0 success, 2 negative
//! verdict, 3 input error, 1 numerical failure.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use abssep::par::Execution;
use abssep::posmaps::MapSpec;
use clap::{Args, Parser, Subcommand};

pub use commands::*;
pub use config::{Overrides, RunConfig};
pub use error::{CliError, EXIT_INPUT, EXIT_INTERNAL, EXIT_NEGATIVE};
pub use output::{fmt_g, Format, Report, Table};

#[derive(Debug, Parser)]
#[command(name = "abssep", version, about = "Absolute separability / absolute PPT toolkit")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// RNG seed for sampling commands.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Primary sample count of the command (orbit samples, grid side, curve points or sweep length).
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Named tolerance override, e.g. `--tol scan=1e-6` (names: lmi, cert, scan).
    #[arg(long = "tol", global = true, value_parser = config::parse_tol)]
    pub tol: Vec<(String, f64)>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// TOML file with `seed`, `out`, `format`, `[tol]` and `[samples]`.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Absolute-PPT verdict for a spectrum file `{"m", "n", "values"}`.
    CheckSpectrum { file: PathBuf },
    /// Eigenvalue test of a unit-trace witness (matrix JSON or a named map at |psi+>).
    WitnessAnalyze {
        #[arg(required_unless_present = "map")]
        file: Option<PathBuf>,
        /// Rescale the file's witness to unit trace first.
        #[arg(long)]
        normalize: bool,
        /// `choi`, `gen_choi:b,c`, `breuer_hall:n` or `reduction:n`.
        #[arg(long, conflicts_with = "file", value_parser = parse_map)]
        map: Option<MapSpec>,
    },
    /// Check every analytic dual certificate against its closed-form value.
    VerifyCertificates {
        /// Breuer-Hall dimensions (even, >= 4).
        #[arg(long = "n", value_delimiter = ',', default_values_t = vec![4usize, 6])]
        dims: Vec<usize>,
        /// Break the Choi certificates on purpose.
        #[arg(long)]
        perturb: bool,
    },
    /// Figure data as CSV (or JSON rows).
    FigData {
        #[arg(value_enum)]
        figure: Figure,
    },
    /// Evaluate a criterion on Haar-random unitary conjugates of a spectrum.
    OrbitScan {
        file: PathBuf,
        #[arg(long, default_value = "realignment")]
        criterion: CriterionArg,
        /// Run on one thread.
        #[arg(long)]
        sequential: bool,
    },
    /// Classify a member of a state family, or sweep its parameter.
    Family {
        #[command(subcommand)]
        family: FamilyCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum FamilyCommand {
    Werner {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
    },
    Isotropic {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
    },
    Upb {
        #[arg(long)]
        p: Option<f64>,
    },
}

fn parse_map(s: &str) -> Result<MapSpec, String> {
    let (name, arg) = s.split_once(':').unwrap_or((s, ""));
    let dim = || arg.trim().parse::<usize>().map_err(|e| format!("bad dimension in '{s}': {e}"));
    let r = match name {
        "choi" => Ok(MapSpec::choi()),
        "gen_choi" => {
            let (b, c) = arg.split_once(',').ok_or_else(|| format!("expected gen_choi:b,c, got '{s}'"))?;
            let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("bad number '{x}': {e}"));
            MapSpec::generalized_choi(num(b)?, num(c)?)
        }
        "breuer_hall" => MapSpec::breuer_hall(dim()?),
        "reduction" => MapSpec::reduction(dim()?),
        _ => return Err(format!("unknown map '{name}' (choi, gen_choi:b,c, breuer_hall:n, reduction:n)")),
    };
    r.map_err(|e| e.to_string())
}

fn primary_count(cmd: &Command) -> Option<&'static str> {
    match cmd {
        Command::OrbitScan { .. } => Some("orbit"),
        Command::VerifyCertificates { .. } => Some("grid"),
        Command::FigData { figure: Figure::FCurve } => Some("curve"),
        Command::FigData { figure: Figure::UpbInterval } => Some("sweep"),
        Command::FigData { .. } => Some("grid"),
        Command::Family { .. } => Some("sweep"),
        Command::CheckSpectrum { .. } | Command::WitnessAnalyze { .. } => None,
    }
}

/// Runs a parsed command and returns the rendered report with its outcome.
pub fn execute(cli: Cli) -> Result<(Outcome, RunConfig), CliError> {
    let flags = Overrides {
        seed: cli.common.seed,
        tolerances: cli.common.tol.clone(),
        out: cli.common.out.clone(),
        format: cli.common.format,
    };
    let mut cfg = RunConfig::load(cli.common.config.as_deref(), flags)?;
    if let Some(n) = cli.common.samples {
        let key = primary_count(&cli.command)
            .ok_or_else(|| CliError::Input("--samples does not apply to this command".into()))?;
        cfg.set_count(key, n)?;
    }
    let outcome = match cli.command {
        Command::CheckSpectrum { file } => cmd_check_spectrum(&file, &cfg)?,
        Command::WitnessAnalyze { file, normalize, map } => match (file, map) {
            (_, Some(phi)) => cmd_witness_analyze(WitnessSource::Map(phi))?,
            (Some(path), None) => cmd_witness_analyze(WitnessSource::File { path: &path, normalize })?,
            (None, None) => return Err(CliError::Input("give a witness file or --map".into())),
        },
        Command::VerifyCertificates { dims, perturb } => {
            cmd_verify_certificates(&VerifyOptions { breuer_hall_dims: dims, perturb }, &cfg)?
        }
        Command::FigData { figure } => cmd_fig_data(figure, &cfg)?,
        Command::OrbitScan { file, criterion, sequential } => {
            let exec = if sequential { Execution::Sequential } else { Execution::Parallel };
            cmd_orbit_scan(&file, &criterion.0, cfg.count("orbit"), exec, &cfg)?
        }
        Command::Family { family } => {
            let q = match family {
                FamilyCommand::Werner { n, alpha } => FamilyQuery::Werner { n, alpha },
                FamilyCommand::Isotropic { n, alpha } => FamilyQuery::Isotropic { n, alpha },
                FamilyCommand::Upb { p } => FamilyQuery::Upb { p },
            };
            cmd_family(q, &cfg)?
        }
    };
    Ok((outcome, cfg))
}

fn default_format(cmd: &Command) -> Format {
    match cmd {
        Command::FigData { .. } => Format::Csv,
        _ => Format::Json,
    }
}

/// Full CLI entry point; returns the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let fallback = default_format(&cli.command);
    match execute(cli) {
        Ok((outcome, cfg)) => {
            let text = outcome.report.render(cfg.format.unwrap_or(fallback));
            let written = match &cfg.output_path {
                Some(p) => std::fs::write(p, &text).map_err(|e| format!("cannot write {}: {e}", p.display())),
                None => match std::io::stdout().write_all(text.as_bytes()) {
                    // a closed pipe (`| head`) is not an error
                    Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                    r => r.map_err(|e| e.to_string()),
                },
            };
            if let Err(msg) = written {
                eprintln!("error: {msg}");
                return EXIT_INPUT;
            }
            if outcome.negative {
                EXIT_NEGATIVE
            } else {
                0
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
