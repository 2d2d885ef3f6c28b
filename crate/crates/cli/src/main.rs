use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use pwlrec_cli::commands::{self, CompareOptions, Outcome, ProbeOptions};
use pwlrec_cli::CliError;

/// Sampled-data models and continuous surrogates of switching systems.
#[derive(Parser)]
#[command(name = "pwlrec", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Period map, its fixed point and the duty injection direction.
    Map {
        spec: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Continuous surrogate of the sampled-data model.
    Reconstruct {
        spec: PathBuf,
        #[arg(long, default_value = "auto")]
        method: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Frequency-response table of the baseline and the chosen surrogates.
    Compare {
        spec: PathBuf,
        /// Comma-separated; an empty string gives a baseline-only table.
        #[arg(long, default_value = "auto")]
        methods: String,
        #[arg(long)]
        fmin: Option<f64>,
        #[arg(long)]
        fmax: Option<f64>,
        #[arg(long, default_value_t = 200)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Log-log slope of the truncated generator's error against Ts.
    Probe {
        spec: PathBuf,
        #[arg(long, default_value_t = 1)]
        order: u8,
        #[arg(long, default_value_t = 4)]
        ts_points: usize,
        #[arg(long, default_value_t = 3.0)]
        ts_span: f64,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (outcome, out_dir, quiet_with_out) = match cli.command {
        Command::Map { spec, out } => (commands::map(&commands::load_model(&spec)?)?, out, false),
        Command::Reconstruct { spec, method, out } => {
            let request = commands::parse_request(&method)?;
            (
                commands::reconstruct(&commands::load_model(&spec)?, request)?,
                out,
                false,
            )
        }
        Command::Compare {
            spec,
            methods,
            fmin,
            fmax,
            points,
            out,
        } => {
            let opts = CompareOptions {
                methods,
                fmin_hz: fmin,
                fmax_hz: fmax,
                points,
            };
            (
                commands::compare(&commands::load_model(&spec)?, &opts)?,
                out,
                true,
            )
        }
        Command::Probe {
            spec,
            order,
            ts_points,
            ts_span,
        } => {
            let opts = ProbeOptions {
                order,
                ts_points,
                ts_span_octaves: ts_span,
            };
            (
                commands::probe(&commands::load_model(&spec)?, &opts)?,
                None,
                false,
            )
        }
    };
    emit(&outcome, out_dir, quiet_with_out)
}

fn emit(outcome: &Outcome, out_dir: Option<PathBuf>, quiet_with_out: bool) -> Result<(), CliError> {
    let mut stdout = std::io::stdout().lock();
    let io = |e: std::io::Error| CliError::Io(e.to_string());
    match out_dir {
        Some(dir) => {
            outcome.write_files(&dir)?;
            if !quiet_with_out {
                stdout.write_all(outcome.stdout.as_bytes()).map_err(io)?;
            }
            for (name, _) in &outcome.files {
                writeln!(stdout, "wrote {}", dir.join(name).display()).map_err(io)?;
            }
        }
        None => stdout.write_all(outcome.stdout.as_bytes()).map_err(io)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            e.exit()
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            eprintln!("ArgumentError: {}", first.trim_start_matches("error: "));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_string().replace('\n', " "));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
