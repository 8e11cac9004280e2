use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use rpm_cli::{reproduce_table, run, write_convergence_csv, CliError, Format, RunConfig};

#[derive(Parser)]
#[command(name = "rpm", version, about = "Radial Schrödinger eigenvalues for V(r) = σ r^α by Hankel-determinant quantization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute eigenvalues.
    Run(RunConfig),
    /// Recompute a published table and compare.
    Table {
        /// Table number, 1 to 7.
        id: u8,
        #[arg(long, default_value_t = 15)]
        digits: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Compare every row with the shooting oracle.
        #[arg(long)]
        oracle_check: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn write_out(out: &Option<PathBuf>, body: &[u8]) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, body)?,
        None => std::io::stdout().write_all(body)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(cfg) => run(&cfg).and_then(|report| {
            let body = match cfg.format {
                Format::Json => report.to_json()? + "\n",
                Format::Text => report.to_text(),
                Format::Csv => {
                    let mut buf = Vec::new();
                    write_convergence_csv(&report, &mut buf)?;
                    String::from_utf8(buf).expect("ascii csv")
                }
            };
            write_out(&cfg.out, body.as_bytes())?;
            Ok(report.complete())
        }),
        Command::Table { id, digits, format, oracle_check, out } => {
            reproduce_table(id, digits, oracle_check).and_then(|cmp| {
                let body = match format {
                    Format::Json => serde_json::to_string_pretty(&cmp)? + "\n",
                    Format::Text => cmp.to_text(),
                    Format::Csv => cmp.to_csv(),
                };
                write_out(&out, body.as_bytes())?;
                Ok(cmp.rows.iter().all(|r| r.computed.is_some()))
            })
        }
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e @ CliError::Usage(_)) => {
            eprintln!("rpm: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("rpm: {e}");
            ExitCode::from(1)
        }
    }
}
