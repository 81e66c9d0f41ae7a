use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use nilspace_cli::{run_text, schema_report, Overrides, SchemaError, EXIT_SCHEMA};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Structured,
    Csv,
}

/// Run one nilspace experiment from a JSON config and print its report.
#[derive(Debug, Parser)]
#[command(name = "nilspace-lab", version)]
struct Args {
    /// Experiment config (JSON); `-` reads standard input.
    #[arg(long)]
    config: PathBuf,
    /// Seed for randomized functions and searches; overrides the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker cap, recorded in the report (runs are single-threaded).
    #[arg(long)]
    threads: Option<usize>,
    /// Candidate budget per enumeration; overrides config and environment.
    #[arg(long)]
    budget_maps: Option<u64>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Structured)]
    format: Format,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let mut ov = Overrides {
        seed: args.seed,
        threads: args.threads,
        budget_maps: args.budget_maps,
        env_budget: None,
    };
    let report = match std::env::var("NILSPACE_LAB_BUDGET") {
        Ok(s) => match s.trim().parse::<u64>() {
            Ok(b) if b > 0 => {
                ov.env_budget = Some(b);
                None
            }
            _ => Some(schema_report(
                &SchemaError::new(
                    "NILSPACE_LAB_BUDGET",
                    format!("expected a positive integer, got {s:?}"),
                ),
                &ov,
            )),
        },
        Err(_) => None,
    };
    let report = report.unwrap_or_else(|| {
        let text = if args.config.as_os_str() == "-" {
            std::io::read_to_string(std::io::stdin())
        } else {
            std::fs::read_to_string(&args.config)
        };
        match text {
            Ok(t) => run_text(&t, &ov),
            Err(e) => schema_report(
                &SchemaError::new(args.config.display().to_string(), e.to_string()),
                &ov,
            ),
        }
    });
    let body = match args.format {
        Format::Structured => report.to_json() + "\n",
        Format::Csv => report.to_csv(),
    };
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, body) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_SCHEMA as u8);
            }
        }
        None => print!("{body}"),
    }
    if report.exit_code != 0 {
        eprintln!(
            "{}: {}",
            report.status,
            report.result["message"].as_str().unwrap_or("")
        );
    }
    ExitCode::from(report.exit_code as u8)
}
