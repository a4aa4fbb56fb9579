use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use qquery::fourier::MonomialPolynomial;
use qquery::qqm::{build_deutsch_jozsa, build_random_algorithm, QueryAlgorithm};
use qquery::report::{self, Envelope, RunConfig, Sampling};
use qquery::{Error, Result};

/// Classical simulation and speedup bounds for quantum query algorithms.
#[derive(Debug, Parser)]
#[command(name = "qquery", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct Common {
    /// Error parameter of the target or of the bounds.
    #[arg(long, global = true, default_value_t = 1.0 / 3.0)]
    epsilon: f64,
    /// Write the JSON report to this path.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Suppress the table on standard output.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Spectrum, decomposition metrics and bound chain of an algorithm file.
    Analyze {
        file: PathBuf,
        /// Output label whose probability is analyzed.
        #[arg(long, default_value_t = 1)]
        label: u32,
    },
    /// Run the parity-tree mixture for an algorithm or polynomial file.
    Simulate {
        file: PathBuf,
        /// Query count for a polynomial file; defaults to ceil(degree / 2).
        #[arg(long)]
        t: Option<usize>,
        /// Majority-vote repetitions; defaults to the smallest odd j reaching --target.
        #[arg(long)]
        j: Option<usize>,
        #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Amplified error the default j aims for.
        #[arg(long, default_value_t = 1.0 / 3.0)]
        target: f64,
    },
    /// Worked examples.
    Demo {
        #[command(subcommand)]
        demo: Demo,
    },
    /// Closed-form caps for a given Fourier 1-norm.
    Bounds {
        #[arg(long, default_value_t = 1.0)]
        l: f64,
        /// Query count for the polynomial cap.
        #[arg(long)]
        t: Option<usize>,
    },
    /// Write an algorithm file.
    Build {
        #[command(subcommand)]
        kind: Build,
    },
}

#[derive(Debug, Subcommand)]
enum Demo {
    /// Deutsch-Jozsa coefficient pattern and both randomized caps.
    Dj {
        #[arg(long, default_value_t = 8)]
        n: usize,
    },
    /// Fourier 1-norm of AND and the resulting exact lower bound.
    And {
        #[arg(long, default_value_t = 6)]
        n: usize,
    },
}

#[derive(Debug, Subcommand)]
enum Build {
    /// Deutsch-Jozsa on n bits (n even).
    Dj {
        #[arg(long)]
        n: usize,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Haar-random algorithm with a random binary measurement.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))
}

fn config(command: &str, input: Option<&Path>, common: &Common) -> RunConfig {
    RunConfig {
        command: command.into(),
        input: input.map(|p| p.display().to_string()),
        epsilon: common.epsilon,
        seed: 0,
        trials: 0,
        j: None,
    }
}

/// Prints the table, writes the JSON report and returns whether every
/// contract held.
fn emit<T: Serialize>(
    common: &Common,
    config: RunConfig,
    passed: bool,
    report: T,
    table: String,
) -> Result<bool> {
    if !common.quiet {
        print!("{table}");
    }
    if let Some(path) = &common.json {
        let envelope = Envelope {
            config,
            passed,
            report,
        };
        std::fs::write(path, envelope.to_json()?)?;
    }
    Ok(passed)
}

fn run(cli: Cli) -> Result<bool> {
    let common = &cli.common;
    match cli.command {
        Command::Analyze { file, label } => {
            let alg = QueryAlgorithm::from_json(&read(&file)?)?;
            let r = report::analyze(&alg, label, common.epsilon)?;
            let table = report::render_analysis(&r);
            emit(
                common,
                config("analyze", Some(&file), common),
                r.passed(),
                r,
                table,
            )
        }
        Command::Simulate {
            file,
            t,
            j,
            trials,
            seed,
            target,
        } => {
            let text = read(&file)?;
            let value: serde_json::Value = serde_json::from_str(&text)?;
            let sampling = Sampling {
                seed,
                trials,
                j,
                target,
            };
            let r = if value.get("terms").is_some() {
                let p: MonomialPolynomial = serde_json::from_value(value)?;
                let t = t.unwrap_or(p.degree().div_ceil(2));
                report::simulate_polynomial(&p, t, common.epsilon, sampling)?
            } else {
                let alg = QueryAlgorithm::from_json(&text)?;
                report::simulate_algorithm(&alg, common.epsilon, sampling)?
            };
            let mut cfg = config("simulate", Some(&file), common);
            cfg.seed = seed;
            cfg.trials = trials;
            cfg.j = Some(r.simulation.j);
            let table = report::render_simulation(&r);
            emit(common, cfg, r.passed(), r, table)
        }
        Command::Demo {
            demo: Demo::Dj { n },
        } => {
            let r = report::demo_dj(n, common.epsilon)?;
            let table = report::render_dj(&r);
            emit(
                common,
                config("demo dj", None, common),
                r.passed(),
                r,
                table,
            )
        }
        Command::Demo {
            demo: Demo::And { n },
        } => {
            let r = report::demo_and(n, common.epsilon)?;
            let table = report::render_and(&r);
            emit(
                common,
                config("demo and", None, common),
                r.passed(),
                r,
                table,
            )
        }
        Command::Bounds { l, t } => {
            let r = report::scalar_bounds(common.epsilon, l, t)?;
            let table = report::render_bounds(&r);
            emit(common, config("bounds", None, common), true, r, table)
        }
        Command::Build { kind } => {
            let (alg, out) = match kind {
                Build::Dj { n, out } => (build_deutsch_jozsa(n)?, out),
                Build::Random { n, m, t, seed, out } => {
                    (build_random_algorithm(n, m, t, seed)?, out)
                }
            };
            let mut text = alg.to_json();
            text.push('\n');
            match out {
                Some(path) => std::fs::write(path, text)?,
                None => print!("{text}"),
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: a contract failed; see the report");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
