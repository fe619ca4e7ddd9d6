use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kfp_lab::commands::{run, Overrides};
use kfp_lab::scenario::{Format, Mode};
use kfp_lab::{LabError, Scenario, BENCHMARK};

/// Numerical laboratory for kinetic Fokker-Planck equations.
#[derive(Parser)]
#[command(name = "kfp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the mode named in the scenario file.
    Run(Flags),
    /// Kinetic distance between `point_a` and `point_b`, with the optimal shift.
    Distance(Flags),
    /// Fraction of each cylinder around the centers that lies in the domain.
    Volume(Flags),
    /// Exterior measure of Q⁻ at each center against μ*.
    MuCheck(Flags),
    /// Solve and write the final snapshot.
    Solve(Flags),
    /// Oscillation and sup decay over dyadic cylinders at each center.
    Decay(Flags),
    /// Hölder seminorms over dyadic cylinders at each center.
    Holder(Flags),
    /// Every acceptance criterion, with a pass/fail report.
    VerifyAll(Flags),
}

#[derive(Args)]
struct Flags {
    /// Scenario file; the bundled half-line benchmark when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory for reports.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Monte-Carlo sample count.
    #[arg(long)]
    samples: Option<usize>,
    /// Snapshot format for `solve`.
    #[arg(long, value_parser = parse_format)]
    format: Option<Format>,
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse()
}

fn load(flags: &Flags) -> Result<Scenario, LabError> {
    let mut s = match &flags.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| LabError::Usage(format!("cannot read {}: {e}", path.display())))?;
            Scenario::parse(&text).map_err(|e| LabError::Usage(format!("{}:{e}", path.display())))?
        }
        None => Scenario::parse(BENCHMARK)?,
    };
    Overrides { out: flags.out.clone(), seed: flags.seed, samples: flags.samples, format: flags.format }.apply(&mut s);
    Ok(s)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // clap reports usage errors as 2, which is reserved for failed checks
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let (mode, flags) = match cli.command {
        Command::Run(f) => (None, f),
        Command::Distance(f) => (Some(Mode::Distance), f),
        Command::Volume(f) => (Some(Mode::Volume), f),
        Command::MuCheck(f) => (Some(Mode::MuCheck), f),
        Command::Solve(f) => (Some(Mode::Solve), f),
        Command::Decay(f) => (Some(Mode::Decay), f),
        Command::Holder(f) => (Some(Mode::Holder), f),
        Command::VerifyAll(f) => (Some(Mode::VerifyAll), f),
    };
    let result = load(&flags).and_then(|s| run(mode.unwrap_or(s.mode), &s, &mut io::stdout().lock()));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("kfp: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
