use std::fs::File;
use std::io::{self, BufWriter};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use gdft::linalg::MatMulBackend;
use gdft_cli::commands::{self, EngineChoice, Settings};

#[derive(Parser)]
#[command(name = "gdft", version, about = "Fast Fourier transforms over finite groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Seed for inputs and subgroup search.
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Directory for cached irrep files.
    #[arg(long = "irrep-cache", env = "GDFT_CACHE")]
    irrep_cache: Option<PathBuf>,
    /// Largest group order decomposed numerically.
    #[arg(long, default_value_t = commands::ORACLE_CAP)]
    order_cap: usize,
    /// Matrix product backend: `naive`, `strassen` or `strassen:<threshold>`.
    #[arg(long, default_value = "naive")]
    backend: MatMulBackend,
    /// Threshold exponent of the general engine.
    #[arg(long)]
    beta: Option<f64>,
    /// Groups up to this order are transformed directly inside recursions.
    #[arg(long, default_value_t = 32)]
    base_size: usize,
}

impl Common {
    fn settings(&self) -> Settings {
        Settings {
            seed: self.seed,
            cache_dir: self.irrep_cache.clone(),
            order_cap: self.order_cap,
            backend: self.backend,
            beta: self.beta,
            base_size: self.base_size,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check every applicable engine against the naive transform.
    Verify {
        /// `default`, a family like `sl2:p=3,5`, or `;`-separated descriptors.
        #[arg(long, default_value = "default")]
        corpus: String,
        /// Random inputs per group and engine.
        #[arg(long, default_value_t = 5)]
        samples: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Count operations of one engine across a family and write CSV.
    ///
    /// Columns: descriptor,order,engine,backend,r,mults,adds,max_rel_err,seconds.
    /// `r` is the covering size of a top-level double reduction. Skipped
    /// instances have `skipped` counts. `max_rel_err` is empty above the
    /// oracle cap; `seconds` is empty unless `--timing` is given.
    Bench {
        #[arg(long)]
        family: String,
        /// naive, single, double, ldu, solvable, general or auto.
        #[arg(long, default_value = "auto")]
        engine: EngineChoice,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Record wall-clock seconds (makes output run-dependent).
        #[arg(long)]
        timing: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Fit the log-log slope of mults against order from a bench CSV.
    Fit {
        csv: PathBuf,
        /// Only rows of this engine.
        #[arg(long)]
        engine: Option<String>,
        /// Fail when the slope exceeds this value.
        #[arg(long)]
        max_slope: Option<f64>,
    },
    /// Generate, verify and cache the irreps of a group.
    Irreps {
        descriptor: String,
        #[command(flatten)]
        common: Common,
    },
    /// Print the recursion tree an engine builds for a group.
    Plan {
        descriptor: String,
        #[arg(long, default_value = "auto")]
        engine: EngineChoice,
        #[command(flatten)]
        common: Common,
    },
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Verify { corpus, samples, common } => {
            let failures = commands::verify(&corpus, &common.settings(), samples, &mut io::stdout().lock())?;
            if failures > 0 {
                println!("{failures} failure(s)");
                return Ok(ExitCode::FAILURE);
            }
            println!("all checks passed");
        }
        Command::Bench { family, engine, out, timing, common } => {
            let rows = commands::bench(&family, engine, &common.settings(), timing)?;
            match out {
                Some(path) => {
                    let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
                    commands::write_csv(&rows, BufWriter::new(file))?;
                }
                None => commands::write_csv(&rows, io::stdout().lock())?,
            }
        }
        Command::Fit { csv, engine, max_slope } => {
            let f = commands::fit(&csv, engine.as_deref(), max_slope)?;
            println!("slope {:.6} r2 {:.6} points {}", f.slope, f.r2, f.points);
        }
        Command::Irreps { descriptor, common } => {
            let o = commands::irreps(&descriptor, &common.settings())?;
            let dims: Vec<String> = o.dims.iter().map(|d| d.to_string()).collect();
            println!("dims {}", dims.join(","));
            println!("{} {}", if o.cache_hit { "cache-hit" } else { "generated" }, o.path.display());
            println!("sha256 {}", o.digest);
        }
        Command::Plan { descriptor, engine, common } => {
            print!("{}", commands::plan(&descriptor, engine, &common.settings())?);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
