//! `cantor-arith` command-line frontend.

mod args;
mod output;
mod query;
mod solve;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use cantor_arith::c1_maps::PhiSpec;
use cantor_arith::intervals::RatInterval;
use cantor_arith::oracle::CoverageOp;
use clap::Parser;

use args::{Cli, Command, Format, VerifyCommand};
use output::{CliError, CliResult, Report};

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::ParamsSum { .. } => "params-sum",
        Command::ParamsProduct { .. } => "params-product",
        Command::Interval { .. } => "interval",
        Command::Decompose { .. } => "decompose",
        Command::Verify { what: VerifyCommand::Decomposition { .. } } => "verify decomposition",
        Command::Verify { what: VerifyCommand::Coverage { .. } } => "verify coverage",
        Command::Alpha1 { .. } => "alpha1",
        Command::Batch { .. } => "batch",
    }
}

fn run(cmd: &Command) -> CliResult<Report> {
    match cmd {
        Command::ParamsSum { alpha, m, phi } => query::params_sum(alpha, *m, phi.as_ref()),
        Command::ParamsProduct { alpha, phi } => query::params_product(alpha, phi.as_ref()),
        Command::Interval { kind, p } => query::interval(*kind, p),
        Command::Decompose { kind, p, x, stop } => solve::decompose(*kind, p, x, stop),
        Command::Verify { what } => match what {
            VerifyCommand::Decomposition { input, x } => solve::verify_doc(input, x.as_ref()),
            VerifyCommand::Coverage { lo, hi, terms, product, m, phi, level } => {
                let target = RatInterval::new(lo.clone(), hi.clone())
                    .map_err(|_| CliError::usage("--lo must not exceed --hi"))?;
                let op = if *product {
                    CoverageOp::Product
                } else {
                    CoverageOp::Sum(phi.clone().unwrap_or(PhiSpec::Power(*m)))
                };
                solve::verify_coverage(target, terms, op, *level)
            }
        },
        Command::Alpha1 { m, grid } => query::alpha1(m, *grid),
        Command::Batch { kind, p, count, seed, denominator, stop } => {
            solve::batch(*kind, p, *count, *seed, *denominator, stop)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let started = Instant::now();
    match run(&cli.command) {
        Ok(report) => {
            let text = match cli.format {
                Format::Json => {
                    let doc = report.envelope(command_name(&cli.command), started);
                    serde_json::to_string_pretty(&doc).expect("json") + "\n"
                }
                Format::Csv => report.csv_text(),
            };
            // a closed pipe downstream is not an error here
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            ExitCode::from(report.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
