use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use weyl_commute::error::Error;
use weyl_commute::numeric::Tolerances;
use weyl_commute::pair::match_printed_examples;
use weyl_commute::params::Params;
use weyl_commute::pipeline::{construct, verify, Config, Fault};

#[derive(Parser)]
#[command(version, about = "Rank-two commuting differential operators: construction and exact verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build Q, F, L4 and M and print them as JSON.
    Construct {
        #[command(flatten)]
        run: RunArgs,
        /// Include wall-clock timings (makes the output non-deterministic).
        #[arg(long)]
        timings: bool,
    },
    /// Run every exact and float check; exit 1 if any fails.
    Verify {
        #[command(flatten)]
        run: RunArgs,
        /// Series order N for the expansion at infinity (terms below k^N).
        #[arg(long)]
        series_order: Option<i64>,
        /// Number of float sample points.
        #[arg(long, default_value_t = 3)]
        samples: usize,
        /// Finite-difference step.
        #[arg(long, default_value_t = 1e-4)]
        step: f64,
        #[arg(long)]
        tol_root: Option<f64>,
        #[arg(long)]
        tol_separation: Option<f64>,
        #[arg(long)]
        tol_corollary: Option<f64>,
        #[arg(long)]
        tol_krichever: Option<f64>,
    },
    /// Compare the two printed examples with the constructed operators.
    Examples {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Genus g >= 1.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    genus: u32,
    /// Parameters, e.g. `a0=sym,a1=0,a2=1/2,a3=1`; unlisted ones stay symbolic.
    #[arg(long, default_value = "a0=sym,a1=0,a2=0,a3=1")]
    alpha: String,
    /// Write JSON here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Corrupt q, f or m before checking (test hook).
    #[arg(long)]
    inject_fault: Option<Fault>,
}

impl RunArgs {
    fn config(&self) -> Result<Config, Error> {
        let params: Params = self.alpha.parse()?;
        let mut cfg = Config::new(self.genus, params);
        cfg.fault = self.inject_fault;
        Ok(cfg)
    }
}

fn emit<T: Serialize>(value: &T, out: Option<&PathBuf>) -> Result<(), String> {
    let json = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
    match out {
        Some(path) => std::fs::write(path, json + "\n").map_err(|e| format!("{}: {e}", path.display())),
        None => match writeln!(std::io::stdout().lock(), "{json}") {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.to_string()),
            _ => Ok(()),
        },
    }
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(if e.is_user_error() { 2 } else { 3 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Construct { run, timings } => {
            let built = run.config().and_then(|cfg| construct(&cfg, timings));
            match built {
                Ok(c) => {
                    eprintln!("genus {}: F = {}", c.genus, c.curve.poly());
                    match emit(&c, run.out.as_ref()) {
                        Ok(()) => ExitCode::SUCCESS,
                        Err(msg) => {
                            eprintln!("error: {msg}");
                            ExitCode::from(3)
                        }
                    }
                }
                Err(e) => fail(&e),
            }
        }
        Command::Verify {
            run,
            series_order,
            samples,
            step,
            tol_root,
            tol_separation,
            tol_corollary,
            tol_krichever,
        } => {
            let cfg = run.config().map(|mut cfg| {
                let d = Tolerances::default();
                cfg.series_order = series_order;
                cfg.samples = samples;
                cfg.step = step;
                cfg.tolerances = Tolerances {
                    root: tol_root.unwrap_or(d.root),
                    separation: tol_separation.unwrap_or(d.separation),
                    corollary: tol_corollary.unwrap_or(d.corollary),
                    krichever: tol_krichever.unwrap_or(d.krichever),
                    reexpand: d.reexpand,
                };
                cfg
            });
            let report = match cfg.and_then(|cfg| verify(&cfg)) {
                Ok(r) => r,
                Err(e) => return fail(&e),
            };
            for c in &report.checks {
                eprintln!("{} {}", if c.pass { "PASS" } else { "FAIL" }, c.name);
            }
            for n in &report.not_run {
                eprintln!("SKIP {} ({})", n.name, n.reason);
            }
            eprintln!("{} passed, {} failed", report.passed, report.failed);
            if let Err(msg) = emit(&report, run.out.as_ref()) {
                eprintln!("error: {msg}");
                return ExitCode::from(3);
            }
            if report.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Command::Examples { out } => {
            let reports = match match_printed_examples() {
                Ok(r) => r,
                Err(e) => return fail(&e),
            };
            for r in &reports {
                let verdict = if r.matches() { "MATCH" } else { "DIFF" };
                eprintln!("{}: {verdict}", r.name);
                for (i, d) in &r.coefficient_diffs {
                    eprintln!("  coefficient of D^{i}: constructed - printed = {d}");
                }
            }
            match emit(&reports, out.as_ref()) {
                Ok(()) => ExitCode::SUCCESS,
                Err(msg) => {
                    eprintln!("error: {msg}");
                    ExitCode::from(3)
                }
            }
        }
    }
}
