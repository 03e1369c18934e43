use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use bandflow::pde::Scheme;
use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod config;
mod sweep;

use config::{ConfigError, DatumKind, Loaded};

const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "bandflow", version, about = "Traveling waves and anisotropic curvature flow in a band")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Run configuration (TOML)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory [default: $BANDFLOW_OUT, then [output] dir, then .]
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SchemeArg {
    SemiImplicit,
    Explicit,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::SemiImplicit => Scheme::SemiImplicit,
            SchemeArg::Explicit => Scheme::Explicit,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve for the wave speed and profile
    Tw {
        /// Finite boundary slope
        #[arg(long)]
        h: Option<f64>,
    },
    /// Evolve an initial datum
    Evolve {
        #[arg(long, value_enum)]
        datum: Option<DatumKind>,
        /// Samples `x,u[,ux]` for the user datum
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, value_enum)]
        scheme: Option<SchemeArg>,
    },
    /// Run the verification suite and write report.json
    Verify {
        #[arg(long, value_enum)]
        scheme: Option<SchemeArg>,
    },
    /// Tabulate wave quantities along one axis
    Sweep {
        /// Concurrent points [default: available cores]
        #[arg(long)]
        jobs: Option<usize>,
    },
}

fn out_dir(flag: Option<PathBuf>, cfg: &Loaded) -> PathBuf {
    flag.or_else(|| std::env::var_os("BANDFLOW_OUT").filter(|v| !v.is_empty()).map(PathBuf::from))
        .or_else(|| cfg.config.output.dir.as_ref().map(|d| cfg.resolve(d)))
        .unwrap_or_else(|| PathBuf::from("."))
}

fn run(cli: Cli) -> Result<u8> {
    let cfg = Loaded::read(cli.config.as_deref())?;
    let out = out_dir(cli.out, &cfg);
    match cli.command {
        Command::Tw { h } => commands::tw(&cfg, h, &out),
        Command::Evolve { datum, file, scheme } => {
            commands::evolve_cmd(&cfg, datum, file, scheme.map(Into::into), &out)
        }
        Command::Verify { scheme } => commands::verify(&cfg, scheme.map(Into::into), &out),
        Command::Sweep { jobs } => {
            let jobs = jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            sweep::sweep(&cfg, jobs, &out)
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<ConfigError>().is_some() {
        return EXIT_USAGE;
    }
    match err.downcast_ref::<bandflow::Error>() {
        Some(bandflow::Error::BlowUp { .. }) => commands::EXIT_BLOW_UP,
        _ => EXIT_USAGE,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
