use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use opuc_cli::scenarios::{band_table, default_grid, oracle_discrepancy};
use opuc_cli::{runner, CliError, CliResult, Scenario};
use opuc_core::PointMassSpec;

#[derive(Parser)]
#[command(
    name = "opuc",
    version,
    about = "Point-mass perturbation experiments for OPUC"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment(s) described by a JSON config.
    Run {
        config: PathBuf,
        /// Output directory for summary.json and table.csv.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Worker threads for batch configs.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Print the gap arcs of a periodic background as CSV.
    Bands {
        #[arg(long)]
        period: usize,
        /// Comma-separated coefficients, e.g. `0.5,-0.5` or `0.3+0.1i`.
        #[arg(
            long,
            value_delimiter = ',',
            allow_negative_numbers = true,
            required = true
        )]
        beta: Vec<Complex64>,
        /// Bisection tolerance for the edges.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Compare the perturbation formulas with the moment oracle.
    Oracle {
        #[arg(long)]
        gamma: f64,
        #[arg(long, allow_negative_numbers = true)]
        omega: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
}

fn execute(cli: Cli) -> CliResult<bool> {
    match cli.command {
        Command::Run { config, out, jobs } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| CliError::Config(format!("{}: {e}", config.display())))?;
            let configs = opuc_cli::parse(&text)?;
            let reports = runner::run_all(&configs, jobs)?;
            runner::write_all(&reports, &out)?;
            for r in &reports {
                println!("{}: {}", r.name, if r.passed { "PASS" } else { "FAIL" });
                for g in &r.gates {
                    let bound = g
                        .tolerance
                        .map(|t| format!(" (< {t:e})"))
                        .unwrap_or_default();
                    println!(
                        "  {}: {:e}{bound} {}",
                        g.name,
                        g.value,
                        if g.passed { "ok" } else { "FAILED" }
                    );
                }
            }
            Ok(reports.iter().all(|r| r.passed))
        }
        Command::Bands {
            period,
            beta,
            tol,
            grid,
        } => {
            if beta.len() != period {
                return Err(CliError::Config(format!(
                    "period {period} but {} coefficients given",
                    beta.len()
                )));
            }
            let (_, table) = band_table(&beta, grid.unwrap_or_else(|| default_grid(period)), tol)?;
            table.write_csv(Scenario::Bands, std::io::stdout().lock())?;
            Ok(true)
        }
        Command::Oracle {
            gamma,
            omega,
            n,
            tol,
        } => {
            let spec = PointMassSpec::new(omega, gamma)?;
            let (worst, _) = oracle_discrepancy(&spec, n)?;
            let ok = worst < tol;
            println!(
                "max discrepancy over n <= {n}: {worst:e} (< {tol:e}) {}",
                if ok { "PASS" } else { "FAIL" }
            );
            Ok(ok)
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{}: {e}", e.name());
            ExitCode::from(2)
        }
    }
}
