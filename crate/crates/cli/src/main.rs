//! `eichler`: runs the theta series / Brandt matrix pipeline for one
//! quaternion algebra and writes a JSON report.
//!
//! Exit status is 0 when every property check passes, 2 when a check fails
//! and 1 on error.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use eichler_core::orders::Mode;
use eichler_core::report::{run, RunConfig};
use log::error;

#[derive(Parser, Debug)]
#[command(
    name = "eichler",
    version,
    about = "Theta series, Brandt matrices and span ranks for definite quaternion algebras"
)]
struct Args {
    /// d in L = Q(sqrt d); one of 1, 2, 5, 13, 17
    #[arg(long)]
    field: i64,
    /// Rational prime p, inert or split in L
    #[arg(long)]
    prime: i64,
    #[arg(long, default_value = "level_p")]
    mode: Mode,
    /// Trace bound B for theta coefficients
    #[arg(long)]
    bound: i64,
    /// Rational prime below the neighbour prime
    #[arg(long)]
    aux_prime: Option<i64>,
    /// Rational primes for Brandt matrices, comma separated
    #[arg(long, value_delimiter = ',')]
    hecke: Vec<i64>,
    /// Report path; standard output if absent
    #[arg(long)]
    out: Option<PathBuf>,
    /// Directory for cached ideal class representatives
    #[arg(long)]
    cache: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Ignore the cache directory entirely
    #[arg(long)]
    no_cache: bool,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    // usage errors are errors, not property failures
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let config = RunConfig {
        d: args.field,
        p: args.prime,
        mode: args.mode,
        bound: args.bound,
        aux_prime: args.aux_prime,
        hecke_primes: args.hecke,
        out: args.out.clone(),
        cache_dir: if args.no_cache { None } else { args.cache },
        workers: args.workers,
    };
    match run(&config) {
        Ok((report, timings)) => {
            if args.out.is_none() {
                let text = match report.to_json(&timings) {
                    Ok(t) => t,
                    Err(e) => {
                        eprintln!("error[{}]: {e}", e.code());
                        return ExitCode::from(1);
                    }
                };
                let _ = writeln!(std::io::stdout(), "{text}");
            }
            if report.passed {
                ExitCode::SUCCESS
            } else {
                error!("property checks failed: {:?}", report.checks);
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            ExitCode::from(1)
        }
    }
}
