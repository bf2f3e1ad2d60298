//! `qcorr` command-line front end: sweeps, verification runs and
//! collapse-revival analysis, all emitting CSV.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 verification
//! failure, 3 I/O failure.

pub mod csv_format;
pub mod verify;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qcorr_core::evolution::EvolutionMode;
use qcorr_core::measures::DiscordMethod;
use qcorr_core::sweep::{
    concurrence_series, detect_collapse_revival, discord_series, envelope, time_series, SweepConfig,
    DEFAULT_MIN_DURATION, DEFAULT_THRESHOLD, DEFAULT_WINDOW,
};
use qcorr_core::xstate::WernerParam;
use thiserror::Error;

use crate::csv_format::{format_event, format_record, EVENT_HEADER, RECORD_HEADER};
use crate::verify::{run_verify, VerifyConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("verification failed")]
    Verification,
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Verification => 2,
            CliError::Io(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "qcorr", version, about = "Two-atom micromaser correlation dynamics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Time series of concurrence and discord over a Rabi-angle grid.
    Evolve(EvolveArgs),
    /// Seeded oracle and brute-force cross-checks.
    Verify(VerifyArgs),
    /// Collapse and revival events of a correlation envelope.
    Envelope(EnvelopeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DiscordArg {
    Closed,
    Brute,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Corrected,
    Paper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeasureArg {
    Discord,
    Concurrence,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Fock photon number of the cavity field.
    #[arg(long)]
    pub n: u32,
    /// Werner mixing parameter in [0, 1].
    #[arg(long)]
    pub r: f64,
    /// Largest Rabi angle gt of the grid.
    #[arg(long = "gt-max")]
    pub gt_max: f64,
    /// Grid intervals; the output has steps + 1 rows.
    #[arg(long)]
    pub steps: usize,
    /// Discord evaluation: closed form or brute-force measurement scan.
    #[arg(long, value_enum, default_value = "closed")]
    pub discord: DiscordArg,
    /// Evolution coefficients; `paper` fails on states it cannot represent.
    #[arg(long, value_enum, default_value = "corrected")]
    pub mode: ModeArg,
    /// Output path; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub sweep: SweepArgs,
}

#[derive(Debug, Clone, Args)]
pub struct EnvelopeArgs {
    #[command(flatten)]
    pub sweep: SweepArgs,
    /// Correlation whose envelope is analysed.
    #[arg(long, value_enum)]
    pub measure: MeasureArg,
    /// Full width in gt of the sliding-maximum window.
    #[arg(long, default_value_t = DEFAULT_WINDOW)]
    pub window: f64,
    /// Envelope level below which the correlation counts as collapsed.
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    pub threshold: f64,
    /// Shortest sub-threshold stretch, in gt, reported as a collapse.
    #[arg(long = "min-duration", default_value_t = DEFAULT_MIN_DURATION)]
    pub min_duration: f64,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Number of random (state, n, gt) samples.
    #[arg(long)]
    pub samples: usize,
    /// Seed of the ChaCha8 sample generator.
    #[arg(long)]
    pub seed: u64,
    /// Photon numbers are drawn from 0..=n-max.
    #[arg(long = "n-max", default_value_t = 12)]
    pub n_max: u32,
    /// Rabi angles are drawn from [0, gt-max].
    #[arg(long = "gt-max", default_value_t = 20.0)]
    pub gt_max: f64,
    /// Allowed closed-form vs oracle deviation per element.
    #[arg(long = "tol-evolve", default_value_t = 1e-10)]
    pub tol_evolve: f64,
    /// Allowed closed-form vs brute-force discord deviation.
    #[arg(long = "tol-discord", default_value_t = 0.0026)]
    pub tol_discord: f64,
}

impl SweepArgs {
    fn config(&self) -> Result<SweepConfig, CliError> {
        let r = WernerParam::new(self.r).map_err(|e| CliError::Usage(e.to_string()))?;
        let mut cfg = SweepConfig::new(self.n, r, self.gt_max, self.steps);
        cfg.discord_method = match self.discord {
            DiscordArg::Closed => DiscordMethod::ClosedForm,
            DiscordArg::Brute => DiscordMethod::BruteForce,
        };
        cfg.mode = match self.mode {
            ModeArg::Corrected => EvolutionMode::Corrected,
            ModeArg::Paper => EvolutionMode::PaperLiteral,
        };
        cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(cfg)
    }
}

fn open_output<'a>(path: &Option<PathBuf>, stdout: &'a mut dyn Write) -> Result<Box<dyn Write + 'a>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(stdout),
    })
}

fn write_lines<'a>(out: &mut dyn Write, header: &str, rows: impl Iterator<Item = String> + 'a) -> io::Result<()> {
    writeln!(out, "{header}")?;
    for row in rows {
        writeln!(out, "{row}")?;
    }
    out.flush()
}

pub fn cmd_evolve(args: &EvolveArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let cfg = args.sweep.config()?;
    let records = time_series(&cfg).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut out = open_output(&args.sweep.out, stdout)?;
    let r = cfg.r.value();
    write_lines(
        &mut *out,
        RECORD_HEADER,
        records.iter().map(|rec| format_record(rec, cfg.n, r)),
    )?;
    Ok(())
}

pub fn cmd_envelope(args: &EnvelopeArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let cfg = args.sweep.config()?;
    let records = time_series(&cfg).map_err(|e| CliError::Usage(e.to_string()))?;
    let series = match args.measure {
        MeasureArg::Discord => discord_series(&records),
        MeasureArg::Concurrence => concurrence_series(&records),
    };
    let env = envelope(&series, args.window).map_err(|e| CliError::Usage(e.to_string()))?;
    let events =
        detect_collapse_revival(&env, args.threshold, args.min_duration).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut out = open_output(&args.sweep.out, stdout)?;
    write_lines(&mut *out, EVENT_HEADER, events.iter().map(format_event))?;
    Ok(())
}

pub fn cmd_verify(args: &VerifyArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    if args.samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    if !args.gt_max.is_finite() || args.gt_max < 0.0 {
        return Err(CliError::Usage(format!(
            "--gt-max {} must be finite and non-negative",
            args.gt_max
        )));
    }
    for (name, tol) in [("--tol-evolve", args.tol_evolve), ("--tol-discord", args.tol_discord)] {
        if !tol.is_finite() || tol < 0.0 {
            return Err(CliError::Usage(format!("{name} {tol} must be finite and non-negative")));
        }
    }
    let report = run_verify(&VerifyConfig {
        samples: args.samples,
        seed: args.seed,
        n_max: args.n_max,
        gt_max: args.gt_max,
        tol_evolve: args.tol_evolve,
        tol_discord: args.tol_discord,
    });
    stdout.write_all(report.render().as_bytes())?;
    stdout.flush()?;
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::Verification)
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let result = match &cli.command {
        Command::Evolve(a) => cmd_evolve(a, stdout),
        Command::Verify(a) => cmd_verify(a, stdout),
        Command::Envelope(a) => cmd_envelope(a, stdout),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "qcorr: {e}");
            e.exit_code()
        }
    }
}
