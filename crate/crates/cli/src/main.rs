use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use profend::dsl::{self, ValidateConfig};
use profend::report::{self, demo_scenario, Report, RunConfig};

/// Structure of endomorphisms of finite groups and towers of finite quotients.
#[derive(Parser, Debug)]
#[command(name = "profend", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run every analysis in a scenario file.
    Run {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads [default: $PROFEND_JOBS, else 1].
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Largest group order any construction may reach.
        #[arg(long)]
        order_guard: Option<usize>,
        /// Record wall time per analysis (output is then not byte-stable).
        #[arg(long)]
        timings: bool,
    },
    /// Built-in demonstrations.
    Demo {
        #[command(subcommand)]
        which: Demo,
    },
    /// Run the acceptance suite and print one line per criterion.
    Selftest,
}

#[derive(Subcommand, Debug)]
enum Demo {
    /// Z/p^k semidirect U(p^k) with (a, u) -> (pa, u).
    #[command(name = "paper-example")]
    UnitsSemidirect {
        #[arg(long, default_value_t = 3)]
        p: u64,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        jobs: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn default_jobs(flag: Option<usize>) -> usize {
    flag.or_else(|| std::env::var("PROFEND_JOBS").ok()?.parse().ok())
        .unwrap_or(1)
        .max(1)
}

fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
    }
}

/// Parses, validates and runs; diagnostics go to stderr with exit code 2.
fn run_source(
    source: &str,
    base_dir: &Path,
    order_guard: Option<usize>,
    config: RunConfig,
) -> Result<Report, ExitCode> {
    let vc = ValidateConfig {
        base_dir: base_dir.to_path_buf(),
        order_guard,
    };
    match dsl::load(source, &vc) {
        Ok(res) => {
            let config = RunConfig {
                jobs: if config.jobs == 0 {
                    res.options.jobs.unwrap_or(1)
                } else {
                    config.jobs
                },
                ..config
            };
            Ok(report::run(&res, &config))
        }
        Err(e) => {
            for d in e.diagnostics(source) {
                eprintln!("{d}");
            }
            Err(ExitCode::from(2))
        }
    }
}

fn finish(report: &Report, text: String, out: Option<&Path>) -> ExitCode {
    match out {
        Some(path) => {
            if let Err(e) = fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(report.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            file,
            format,
            out,
            jobs,
            seed,
            order_guard,
            timings,
        } => {
            let source = match fs::read_to_string(&file) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: cannot read {}: {e}", file.display());
                    return ExitCode::from(2);
                }
            };
            let base = file.parent().map(Path::to_path_buf).unwrap_or_default();
            // 0 defers to the scenario's `set jobs`
            let jobs = jobs
                .or_else(|| std::env::var("PROFEND_JOBS").ok()?.parse().ok())
                .unwrap_or(0);
            let config = RunConfig {
                jobs,
                seed,
                timings,
            };
            match run_source(&source, &base, order_guard, config) {
                Ok(report) => finish(&report, render(&report, format), out.as_deref()),
                Err(code) => code,
            }
        }
        Command::Demo {
            which:
                Demo::UnitsSemidirect {
                    p,
                    depth,
                    format,
                    seed,
                    jobs,
                },
        } => {
            let source = demo_scenario(p, depth);
            let config = RunConfig {
                jobs: default_jobs(jobs),
                seed,
                timings: false,
            };
            match run_source(&source, Path::new("."), None, config) {
                Ok(report) => finish(&report, render(&report, format), None),
                Err(code) => code,
            }
        }
        Command::Selftest => {
            let results = profend::acceptance::run_all();
            for r in &results {
                println!("{r}");
            }
            let failed = results.iter().filter(|r| !r.passed).count();
            println!(
                "{} of {} criteria passed",
                results.len() - failed,
                results.len()
            );
            if failed == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
