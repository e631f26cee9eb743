use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use qlab::commands::{self, InputError, SearchArgs, Source};
use qlab::report::Report;
use qlab_core::config::MAX_CARRIER_ENV;
use qlab_core::Config;

/// Verifier for finite involutive quantales, their projections and the
/// groupoids they induce.
#[derive(Debug, Parser)]
#[command(name = "qlab", version)]
struct Cli {
    /// Use the quantale of binary relations on n points.
    #[arg(long, global = true, value_name = "N", conflicts_with = "file")]
    rel: Option<usize>,
    /// Read a qlab/1 instance file.
    #[arg(long, global = true, value_name = "PATH")]
    file: Option<std::path::PathBuf>,
    /// Largest carrier checked exhaustively.
    #[arg(long, global = true, value_name = "N", env = MAX_CARRIER_ENV)]
    max_carrier: Option<usize>,
    /// Seed for random candidates.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the axioms, the class flags, or both.
    Check {
        #[arg(default_value = "all", value_parser = ["axioms", "class", "all"])]
        which: String,
    },
    /// List projections with a summary of each one's pseudogroup.
    Projections,
    /// Verify one theorem on the instance.
    Verify {
        #[arg(value_parser = commands::THEOREMS)]
        theorem: String,
        /// Restrict to one projection, by label.
        #[arg(long)]
        b: Option<String>,
    },
    /// Search small involutive quantales for class constraints such as
    /// `stably_gelfand,!strongly_gelfand`.
    Search {
        constraints: String,
        /// Largest carrier size; up to 5 exhaustive, up to 8 random.
        #[arg(long, default_value_t = 4)]
        max_size: usize,
        #[arg(long, default_value_t = 1)]
        hits: usize,
        /// Random candidates per size above the exhaustive range.
        #[arg(long, default_value_t = 200)]
        attempts: usize,
    },
}

fn source(cli: &Cli) -> Result<Source, InputError> {
    match (&cli.rel, &cli.file) {
        (Some(n), _) => Ok(Source::Rel(*n)),
        (None, Some(path)) => std::fs::read_to_string(path)
            .map(Source::Text)
            .map_err(|e| InputError(format!("{}: {e}", path.display()))),
        (None, None) => Err(InputError("give an instance with --rel <n> or --file <path>".into())),
    }
}

fn run(cli: &Cli) -> Result<Report, InputError> {
    let mut cfg = Config::default();
    if let Some(m) = cli.max_carrier {
        cfg.max_carrier = m;
    }
    match &cli.command {
        Command::Check { which } => commands::check(&source(cli)?, which, &cfg),
        Command::Projections => commands::cmd_projections(&source(cli)?, &cfg),
        Command::Verify { theorem, b } => commands::verify(&source(cli)?, theorem, b.as_deref(), &cfg),
        Command::Search {
            constraints,
            max_size,
            hits,
            attempts,
        } => commands::cmd_search(
            &SearchArgs {
                constraints: constraints.clone(),
                max_size: *max_size,
                seed: cli.seed,
                hits: *hits,
                attempts: *attempts,
            },
            &cfg,
        ),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    let start = Instant::now();
    let result = run(&cli);
    eprintln!("elapsed {:.3}s", start.elapsed().as_secs_f64());
    match result {
        Ok(rep) => {
            print!("{}", if cli.json { rep.to_json() } else { rep.to_text() });
            ExitCode::from(rep.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
