mod args;
mod config;
mod output;
mod run;

use std::fmt;
use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use output::Provenance;

const EXIT_OTHER: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_DATA: u8 = 3;
const EXIT_BUDGET: u8 = 4;

/// Invalid flags, config files or argument combinations.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn exit_code(err: &anyhow::Error) -> u8 {
    use vpvc::Error as E;
    for cause in err.chain() {
        if cause.is::<UsageError>() {
            return EXIT_CONFIG;
        }
        if let Some(e) = cause.downcast_ref::<vpvc::Error>() {
            return match e {
                E::BudgetExceeded { .. } => EXIT_BUDGET,
                E::InvalidData { .. }
                | E::DegenerateData(_)
                | E::InsufficientData { .. }
                | E::Io { .. }
                | E::Parse { .. }
                | E::MissingColumn { .. }
                | E::EmptyDataset(_)
                | E::Csv(_) => EXIT_DATA,
                _ => EXIT_CONFIG,
            };
        }
    }
    EXIT_OTHER
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let out = cli.command.out().clone();
    if let Some(threads) = out.threads {
        rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build_global()?;
    }
    let provenance = Provenance {
        command: command_name(&cli.command),
        config_sha256: config::config_hash(&cli.command)?,
        seed: out.seed,
    };
    let table = run::execute(&cli.command, out.seed)?;
    output::emit(&table, &provenance, out.format, out.output.as_deref())
}

fn command_name(c: &args::Command) -> &'static str {
    use args::Command::*;
    match c {
        Ssd { .. } => "ssd",
        Sweep { .. } => "sweep",
        Evaluate { .. } => "evaluate",
        Asymptotics { .. } => "asymptotics",
        Surrogate { .. } => "surrogate",
        Coverage { .. } => "coverage",
    }
}

fn main() -> ExitCode {
    let argv = match config::merged_args(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_CONFIG } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
