use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qfisher_cli::commands::{self, ProbeMode};
use qfisher_cli::error::{CliError, Result};
use qfisher_cli::scenario;
use qfisher_cli::suite;
use qfisher_cli::table::{json_with_provenance, significant, Provenance};

#[derive(Parser)]
#[command(name = "qfisher", version, about = "Fisher information of quantum measurement processes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Fisher information along every route at each θ of a scenario.
    Compute {
        scenario: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Best measurement basis (and probe, with --probe free) at the scenario's θ.
    Optimize {
        scenario: PathBuf,
        #[arg(long, value_enum, default_value = "fixed")]
        probe: ProbeMode,
        #[arg(long)]
        restarts: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte-Carlo maximum-likelihood estimation against the Cramér–Rao bound.
    Estimate {
        scenario: PathBuf,
        /// Samples per trial.
        #[arg(long = "n", value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Regenerate the reference tables and check them.
    PaperSuite {
        #[arg(long, default_value = "paper-suite")]
        out: PathBuf,
        #[arg(long, default_value_t = suite::DEFAULT_SEED)]
        seed: u64,
    },
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Write {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Compute { scenario, format, out } => {
            let s = scenario::load(&scenario)?;
            let table = commands::compute(&s)?;
            let text = match format {
                Format::Csv => table.to_csv(),
                Format::Json => table.to_json(),
            };
            emit(out.as_deref(), &text)
        }
        Command::Optimize {
            scenario,
            probe,
            restarts,
            seed,
            out,
        } => {
            let s = scenario::load(&scenario)?;
            let r = commands::optimize(&s, probe, restarts, seed)?;
            eprintln!(
                "J ≤ 4Var ≤ seminorm: {} ≤ {} ≤ {}",
                r.j_achieved, r.variance_bound, r.seminorm_bound
            );
            if !r.converged {
                eprintln!("warning: best restart stopped at the iteration limit before converging");
            }
            let provenance = Provenance::new(s.sha256.clone(), seed.unwrap_or(s.seed));
            emit(out.as_deref(), &json_with_provenance(&provenance, &r))
        }
        Command::Estimate {
            scenario,
            n,
            trials,
            seed,
            out,
        } => {
            let s = scenario::load(&scenario)?;
            let r = commands::estimate(&s, n, trials, seed)?;
            eprintln!(
                "MSE/CR-bound ratio: {} (J = {}, bound = {:e}, MSE = {:e})",
                significant(r.ratio, 4),
                r.j_true,
                r.bound,
                r.empirical_variance
            );
            if r.assertions_skipped {
                eprintln!("note: a single trial gives no variance estimate; checks skipped");
            } else if !r.passed {
                eprintln!(
                    "warning: ratio outside [{}, {}]",
                    significant(r.lower_limit, 4),
                    r.upper_limit.map_or("∞".into(), |u| u.to_string())
                );
            }
            let provenance = Provenance::new(s.sha256.clone(), seed.unwrap_or(s.seed));
            emit(out.as_deref(), &json_with_provenance(&provenance, &r))
        }
        Command::PaperSuite { out, seed } => {
            let output = suite::run(seed)?;
            std::fs::create_dir_all(&out).map_err(|source| CliError::Write {
                path: out.clone(),
                source,
            })?;
            for (name, contents) in &output.files {
                emit(Some(&out.join(name)), contents)?;
            }
            let mut failed = 0;
            for c in &output.checks {
                eprintln!("[{}] {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
                failed += usize::from(!c.passed);
            }
            if failed > 0 {
                return Err(CliError::Acceptance { failed });
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
