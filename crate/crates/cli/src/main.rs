//! `fracdirac`: forward and inverse runs from JSON problem files, special
//! function tables and the self-check suites.
//!
//! Exit status: 0 on success, 1 for unusable input, 2 when a numerical method
//! fails (series divergence, precision loss, nothing recoverable), 3 when a
//! self-check suite fails. Errors print one `error code=... message=...`
//! line on stderr.

mod commands;
mod output;
mod selfcheck;
mod spec;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use commands::{CliError, Failure, InverseInput, Run};
use output::{write_output, RunManifest};
use spec::Overrides;

#[derive(Parser)]
#[command(name = "fracdirac", version, about = "Time-fractional Dirac-type Cauchy problems with a clock function")]
struct Cli {
    /// Worker threads for mode-parallel work (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Test hook: corrupt a building block before running.
    #[arg(long, global = true, hide = true)]
    inject_fault: Option<Fault>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Fault {
    Gamma,
}

#[derive(Args)]
struct RunFlags {
    /// Output directory.
    #[arg(long, default_value = "fracdirac-out")]
    out: PathBuf,
    /// Override the series tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Override the number of time steps.
    #[arg(long)]
    grid: Option<usize>,
    /// Override the lattice nodes per dimension.
    #[arg(long)]
    modes: Option<usize>,
}

impl RunFlags {
    fn overrides(&self) -> Overrides {
        Overrides { steps: self.grid, modes: self.modes, tol: self.tol }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Fast,
    Full,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a forward problem and write solution.csv.
    SolveForward {
        #[arg(long)]
        spec: PathBuf,
        #[command(flatten)]
        flags: RunFlags,
    },
    /// Recover Theta(t) from a problem file or from two trace files; writes theta.csv.
    SolveInverse {
        #[arg(long, conflicts_with_all = ["h1", "h2"], required_unless_present_all = ["h1", "h2", "alpha"])]
        spec: Option<PathBuf>,
        /// CSV of (t, h1).
        #[arg(long, requires_all = ["h2", "alpha"])]
        h1: Option<PathBuf>,
        /// CSV of (t, h2).
        #[arg(long, requires = "h1")]
        h2: Option<PathBuf>,
        #[arg(long)]
        alpha: Option<f64>,
        /// Clock name for trace input.
        #[arg(long, default_value = "identity")]
        clock: String,
        #[command(flatten)]
        flags: RunFlags,
    },
    /// Tabulate ml, ml-multi, kilbas-saigo or bessel-j as CSV (argument, value, error_estimate).
    EvalMl {
        #[arg(long)]
        function: String,
        /// e.g. "alpha=0.5,beta=1" or "a=0.5;0.8,b=1,coeffs=1;-1".
        #[arg(long, default_value = "")]
        params: String,
        /// from:to:count
        #[arg(long, default_value = "-1:1:21", allow_hyphen_values = true)]
        range: String,
        /// Write table.csv and manifest.json here instead of printing.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the invariant suites of every module.
    Selfcheck {
        #[arg(long, value_enum, default_value = "fast")]
        level: LevelArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn finish(run: Run, out: &Path, started: Instant) -> ExitCode {
    let Run { mut manifest, error } = run;
    manifest.elapsed_ms = started.elapsed().as_millis();
    if let Some(e) = &error {
        manifest.exit_code = e.kind.exit_code();
        manifest.warnings.push(e.to_string());
    }
    // a spec that fails to parse leaves no run worth recording
    let keep = !matches!(&error, Some(e) if e.kind == Failure::BadSpec && manifest.config.is_null());
    if keep {
        if let Err(e) = manifest.write(out) {
            eprintln!("{}", CliError::new(Failure::Io, format!("{}: {e}", out.display())));
            return ExitCode::from(1);
        }
    }
    for w in manifest.warnings.iter().filter(|w| !w.starts_with("error ")) {
        eprintln!("warning: {w}");
    }
    match error {
        None => ExitCode::SUCCESS,
        Some(e) => {
            eprintln!("{e}");
            ExitCode::from(e.kind.exit_code() as u8)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    if cli.threads > 0 {
        // only fails if a pool already exists, which cannot happen this early
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }
    if let Some(Fault::Gamma) = cli.inject_fault {
        fracdirac_core::specfun::fault::set_gamma_perturbation(1e-2);
    }
    match cli.command {
        Command::SolveForward { spec, flags } => {
            finish(commands::solve_forward(&spec, &flags.out, &flags.overrides()), &flags.out, started)
        }
        Command::SolveInverse { spec, h1, h2, alpha, clock, flags } => {
            let input = match (spec, h1, h2, alpha) {
                (Some(s), ..) => InverseInput::Spec(s),
                (None, Some(h1), Some(h2), Some(alpha)) => InverseInput::Traces { h1, h2, alpha, clock },
                _ => {
                    eprintln!("{}", CliError::new(Failure::BadSpec, "give --spec, or --h1, --h2 and --alpha"));
                    return ExitCode::from(1);
                }
            };
            finish(commands::solve_inverse(&input, &flags.out, &flags.overrides()), &flags.out, started)
        }
        Command::EvalMl { function, params, range, out } => match commands::eval(&function, &params, &range, out.as_deref()) {
            Ok((run, table)) => match out {
                Some(dir) => finish(run, &dir, started),
                None => {
                    print!("{table}");
                    ExitCode::SUCCESS
                }
            },
            Err(e) => {
                eprintln!("{e}");
                ExitCode::from(e.kind.exit_code() as u8)
            }
        },
        Command::Selfcheck { level, out } => {
            let level = match level {
                LevelArg::Fast => selfcheck::Level::Fast,
                LevelArg::Full => selfcheck::Level::Full,
            };
            let suites = selfcheck::run(level);
            let pass = suites.iter().all(|s| s.pass);
            let summary = json!({
                "level": format!("{level:?}").to_lowercase(),
                "pass": pass,
                "suites": suites,
            });
            let text = serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n";
            print!("{text}");
            for s in &suites {
                eprintln!("{} {}", if s.pass { "PASS" } else { "FAIL" }, s.suite);
            }
            let error = (!pass).then(|| {
                let names: Vec<&str> = suites.iter().filter(|s| !s.pass).map(|s| s.suite).collect();
                CliError::new(Failure::SelfCheck, format!("failing suites: {}", names.join(",")))
            });
            match out {
                Some(dir) => {
                    let mut manifest = RunManifest::new("selfcheck");
                    manifest.config = json!({ "level": summary["level"] });
                    match write_output(&dir, "selfcheck.json", &text) {
                        Ok(f) => manifest.outputs.push(f),
                        Err(e) => return finish(Run { manifest, error: Some(CliError::new(Failure::Io, e.to_string())) }, &dir, started),
                    }
                    finish(Run { manifest, error }, &dir, started)
                }
                None => match error {
                    None => ExitCode::SUCCESS,
                    Some(e) => {
                        eprintln!("{e}");
                        ExitCode::from(e.kind.exit_code() as u8)
                    }
                },
            }
        }
    }
}
