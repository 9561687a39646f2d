//! `indefsum`: evaluate principal indefinite sums, their constants,
//! asymptotic expansions and identity checks from the command line.

mod commands;
mod config;
mod output;
mod verify;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use config::{CliError, Format, GlobalArgs, OffsetMode, RunConfig, EXIT_VIOLATION};
use verify::{Grid, Suite};

#[derive(Debug, Parser)]
#[command(name = "indefsum", version, about = "Principal indefinite sums and their gamma-like identities")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate Σg at a list of points.
    Eval {
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        x: Vec<f64>,
        #[arg(long, value_enum, default_value_t)]
        offset: OffsetMode,
    },
    /// Asymptotic constant σ[g] and generalized Euler constant γ[g].
    Constants,
    /// Run identity and inequality checks.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        x: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        m: Option<Vec<u32>>,
        #[arg(long, value_delimiter = ',')]
        a: Option<Vec<f64>>,
        /// Truncation or sequence index where the suite has one.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Terms of the asymptotic expansion at x.
    Expand {
        #[arg(long)]
        x: f64,
        #[arg(long, default_value_t = 4)]
        q: usize,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, value_enum, default_value_t)]
        offset: OffsetMode,
    },
    /// Plot-ready table of Σg, the Binet remainder and closed-form bounds.
    Tabulate {
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        #[arg(long)]
        step: f64,
        #[arg(long, value_enum, default_value_t)]
        offset: OffsetMode,
    },
    /// List the built-in functions.
    Catalog,
}

fn verify(cfg: &RunConfig, suite: Suite, grid: &Grid, mut out: impl Write) -> Result<u8, CliError> {
    let target = cfg.resolve()?;
    let reports = verify::run(&target, suite, grid)?;
    let pass = reports.iter().all(|r| r.pass);
    match cfg.format_or(Format::Json) {
        Format::Json => {
            let function = target.catalog_name().map_or_else(|| target.g.name().to_string(), str::to_string);
            let v = json!({
                "function": function,
                "pass": pass,
                "reports": reports.iter().map(verify::SuiteReport::to_json).collect::<Vec<_>>(),
            });
            output::write_json(&v, &mut out)?;
        }
        Format::Csv => verify::reports_table(&reports).write_csv(out)?,
    }
    Ok(if pass { 0 } else { EXIT_VIOLATION })
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let stdout = io::stdout().lock();
    if let Command::Catalog = cli.command {
        return commands::catalog(cli.global.format.unwrap_or(Format::Csv), stdout);
    }
    let cfg = RunConfig::from_args(&cli.global)?;
    match cli.command {
        Command::Eval { x, offset } => commands::eval(&cfg, &x, offset, stdout),
        Command::Constants => commands::constants(&cfg, stdout),
        Command::Verify { suite, x, m, a, n } => verify(&cfg, suite, &Grid { x, m, a, n }, stdout),
        Command::Expand { x, q, m, offset } => commands::expand(&cfg, x, q, m, offset, stdout),
        Command::Tabulate { from, to, step, offset } => {
            let xs = commands::grid(from, to, step)?;
            commands::tabulate(&cfg, &xs, offset, stdout)
        }
        Command::Catalog => unreachable!(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
