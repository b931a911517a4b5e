//! `dismo`: run the random-matrix and zeta experiments and emit tables.
//!
//! Exit codes: 0 success, 1 invalid configuration or failed verification,
//! 2 numeric domain error.

mod commands;
mod range;
mod table;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, ValueEnum};

use commands::{Command, ExperimentConfig, Mode};
use dismo::verify::{Fault, DEFAULT_SEED};
use range::Range;
use table::Format;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CommandArg {
    RmtExact,
    RmtMc,
    ZetaZeros,
    ZetaMoment,
    Verify,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Joint,
    Displaced,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FaultArg {
    FkSeriesSign,
}

/// Moments of characteristic polynomials near eigenangles, and of zeta
/// near its zeros. Grids take `min:step:max` or a single value.
#[derive(Debug, Parser)]
#[command(name = "dismo", version)]
struct Cli {
    #[arg(long, value_enum)]
    command: CommandArg,

    /// Moment tabulated by rmt-exact and rmt-mc.
    #[arg(long, value_enum, default_value = "joint")]
    mode: ModeArg,

    /// Matrix sizes.
    #[arg(long, default_value = "2")]
    n: Range,

    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    k: Range,

    /// Angular displacement beta (the displaced mode uses theta_1 + beta).
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    beta: Range,

    /// Zeta displacement in units of the mean zero spacing.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    alpha: Range,

    /// Monte Carlo samples per matrix size.
    #[arg(long, default_value_t = 10_000)]
    samples: usize,

    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,

    #[arg(long, default_value_t = 10.0)]
    t_min: f64,

    #[arg(long, default_value_t = 5000.0)]
    t_max: f64,

    /// Zero table to import instead of searching (one ordinate per line).
    #[arg(long)]
    zeros_file: Option<PathBuf>,

    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,

    /// Deliberately break a component to check that verify notices.
    #[arg(long, value_enum, hide = true)]
    inject_fault: Option<FaultArg>,
}

impl Cli {
    fn config(&self) -> ExperimentConfig {
        ExperimentConfig {
            command: match self.command {
                CommandArg::RmtExact => Command::RmtExact,
                CommandArg::RmtMc => Command::RmtMc,
                CommandArg::ZetaZeros => Command::ZetaZeros,
                CommandArg::ZetaMoment => Command::ZetaMoment,
                CommandArg::Verify => Command::Verify,
            },
            mode: match self.mode {
                ModeArg::Joint => Mode::Joint,
                ModeArg::Displaced => Mode::Displaced,
            },
            n: self.n.clone(),
            k: self.k.clone(),
            beta: self.beta.clone(),
            alpha: self.alpha.clone(),
            samples: self.samples,
            seed: self.seed,
            t_min: self.t_min,
            t_max: self.t_max,
            zeros_file: self.zeros_file.clone(),
            format: match self.format {
                FormatArg::Csv => Format::Csv,
                FormatArg::Json => Format::Json,
            },
            fault: self.inject_fault.map(|f| match f {
                FaultArg::FkSeriesSign => Fault::FkSeriesSign,
            }),
        }
    }
}

/// Writes through a sibling temporary file and renames, so a failed run
/// never leaves a partial table behind.
fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".partial");
    let tmp = PathBuf::from(tmp);
    let res = std::fs::File::create(&tmp)
        .and_then(|mut f| f.write_all(bytes).and_then(|_| f.sync_all()))
        .and_then(|_| std::fs::rename(&tmp, path));
    if res.is_err() {
        let _ = std::fs::remove_file(&tmp);
    }
    res
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let cfg = cli.config();
    let start = Instant::now();
    let result = commands::run(&cfg);
    eprintln!("wall time: {:.2} s", start.elapsed().as_secs_f64());
    let outcome = match result {
        Ok(o) => o,
        Err(f) => {
            eprintln!("dismo: {f}");
            return ExitCode::from(f.exit_code() as u8);
        }
    };
    let written = match &cli.out {
        Some(p) => write_atomic(p, &outcome.bytes),
        None if cfg.command == Command::Verify => Ok(()),
        None => std::io::stdout().write_all(&outcome.bytes),
    };
    if let Err(e) = written {
        eprintln!("dismo: cannot write output: {e}");
        return ExitCode::from(1);
    }
    match outcome.failure {
        None => ExitCode::SUCCESS,
        Some(f) => {
            eprintln!("dismo: {f}");
            ExitCode::from(f.exit_code() as u8)
        }
    }
}
