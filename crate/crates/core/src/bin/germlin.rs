use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use germlin::cli::{self, Command, Overrides, RunConfig, EXIT_INPUT};
use germlin::Mode;

#[derive(Parser)]
#[command(name = "germlin", version, about = "Linearization and vanishing checks for toroidal and Hopf neighborhoods")]
struct Args {
    #[command(subcommand)]
    command: Sub,
    /// TOML run configuration
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the JSON report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,
    /// Worker threads (GERMLIN_THREADS takes precedence)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand, Clone, Copy)]
enum Sub {
    /// Standard coordinates, irrationality and convex-hull margin of a toroidal group
    ToroidalValidate,
    /// Small-divisor scan of a deck system
    DiophScan,
    /// Order-by-order linearization of a deck system
    Linearize,
    /// Linearization plus majorant certificate
    Certify,
    /// Genericity class and vanishing criteria of a Hopf manifold
    HopfClassify,
    /// Arithmetic hypotheses for linearizing a Hopf neighborhood
    HopfPrecheck,
    /// Nested covering, Monte-Carlo check and transition chains
    HopfCover,
    /// Shilov constant of a covering piece
    Shilov,
}

#[derive(ValueEnum, Clone, Copy)]
enum ModeArg {
    Exact,
    Float,
}

impl From<Sub> for Command {
    fn from(s: Sub) -> Self {
        match s {
            Sub::ToroidalValidate => Command::ToroidalValidate,
            Sub::DiophScan => Command::DiophScan,
            Sub::Linearize => Command::Linearize,
            Sub::Certify => Command::Certify,
            Sub::HopfClassify => Command::HopfClassify,
            Sub::HopfPrecheck => Command::HopfPrecheck,
            Sub::HopfCover => Command::HopfCover,
            Sub::Shilov => Command::Shilov,
        }
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT as u8 } else { 0 });
        }
    };
    match go(args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("germlin: {e}");
            ExitCode::from(EXIT_INPUT as u8)
        }
    }
}

fn go(args: Args) -> Result<i32, cli::CliError> {
    let ov = Overrides {
        mode: args.mode.map(|m| match m {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Float => Mode::Float,
        }),
        seed: args.seed,
        threads: cli::resolve_threads(args.threads)?,
        out: args.out,
    };
    let command = Command::from(args.command);
    let config = match &args.config {
        Some(p) => RunConfig::load(command, p, ov)?,
        None => RunConfig::bare(command, ov)?,
    };
    let report = cli::run(&config)?;
    eprint!("{}", cli::render_summary(&report));
    if let Some(json) = cli::write_report(&config, &report)? {
        println!("{json}");
    }
    Ok(report.exit_code())
}
