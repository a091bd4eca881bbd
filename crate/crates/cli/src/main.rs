use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ncbloch::config::{
    DisorderSection, InvariantChoice, ModelSection, OutputSection, Range, RawConfig,
};
use ncbloch::{verify_suite, write_sweep, ConfigError, Level, SweepConfig};
use ncbloch_core::clifford::build_clifford_rep;

#[derive(Parser)]
#[command(name = "ncbloch", version, about = "Real-space topological invariants of disordered lattice models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a parameter sweep described by a TOML file.
    Sweep {
        config: PathBuf,
        /// Override a config key, e.g. `--set disorder.realizations=4`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        /// Worker threads (0 = all cores).
        #[arg(long, env = "NCBLOCH_THREADS", default_value_t = 0)]
        threads: usize,
        /// Output path; overrides `output.path`.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Compute one invariant at a single parameter point and print JSON lines.
    Invariant {
        #[arg(long)]
        model: String,
        #[arg(long)]
        m: f64,
        #[arg(long = "L")]
        size: usize,
        #[arg(long, default_value_t = 0.0)]
        lambda: f64,
        #[arg(long, default_value = "bond")]
        kind: String,
        #[arg(long, default_value_t = 1)]
        realizations: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// chern_even, chern_odd, index_even, index_odd or all.
        #[arg(long, default_value = "all")]
        invariant: String,
        #[arg(long = "x0-grid", default_value_t = 1)]
        x0_grid: usize,
        #[arg(long, env = "NCBLOCH_THREADS", default_value_t = 0)]
        threads: usize,
    },
    /// Run the built-in identity checks.
    Verify {
        /// Include the large-box quadrature of the geometric identities.
        #[arg(long)]
        full: bool,
    },
    /// Print the Clifford generators for n generators.
    Clifford {
        #[arg(long)]
        n: usize,
    },
}

enum Failure {
    Config(String),
    Runtime(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

fn pool(threads: usize) -> Result<rayon::ThreadPool, Failure> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Failure::Runtime(e.to_string()))
}

fn sweep(cfg: &SweepConfig, threads: usize) -> Result<(), Failure> {
    let summary = pool(threads)?.install(|| -> io::Result<_> {
        match &cfg.output.path {
            Some(path) => {
                let mut out = BufWriter::new(File::create(path)?);
                let mut csv = match cfg.output.csv {
                    true => Some(BufWriter::new(File::create(path.with_extension("csv"))?)),
                    false => None,
                };
                let s = write_sweep(cfg, &mut out, csv.as_mut().map(|w| w as &mut dyn Write))?;
                out.flush()?;
                if let Some(w) = csv.as_mut() {
                    w.flush()?;
                }
                Ok(s)
            }
            None => write_sweep(cfg, &mut io::stdout().lock(), None),
        }
    })?;
    eprintln!(
        "{} records, {} gapless, {} errors",
        summary.records, summary.gapless, summary.errors
    );
    if summary.errors > 0 {
        return Err(Failure::Runtime(format!("{} records failed", summary.errors)));
    }
    Ok(())
}

fn invariant_choice(name: &str) -> Result<InvariantChoice, Failure> {
    Ok(match name {
        "chern_even" => InvariantChoice::ChernEven,
        "chern_odd" => InvariantChoice::ChernOdd,
        "index_even" => InvariantChoice::IndexEven,
        "index_odd" => InvariantChoice::IndexOdd,
        "all" => InvariantChoice::All,
        other => return Err(Failure::Config(format!("invariant: unknown `{other}`"))),
    })
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Sweep {
            config,
            overrides,
            threads,
            output,
        } => {
            let mut cfg = SweepConfig::from_path(&config, &overrides)?;
            if output.is_some() {
                cfg.output.path = output;
            }
            sweep(&cfg, threads)
        }
        Command::Invariant {
            model,
            m,
            size,
            lambda,
            kind,
            realizations,
            seed,
            invariant,
            x0_grid,
            threads,
        } => {
            let raw = RawConfig {
                model: ModelSection {
                    name: model,
                    m: Range::One(m),
                    size,
                },
                disorder: DisorderSection {
                    kind,
                    lambda: Range::One(lambda),
                    realizations,
                    seed,
                },
                invariant: invariant_choice(&invariant)?,
                trace_strategy: "periodic".into(),
                bulk_fraction: 0.5,
                x0_grid,
                output: OutputSection::default(),
            };
            sweep(&SweepConfig::validate(raw)?, threads)
        }
        Command::Verify { full } => {
            let report = verify_suite(if full { Level::Full } else { Level::Quick });
            for c in &report.checks {
                println!("{c}");
            }
            match report.passed() {
                true => Ok(()),
                false => Err(Failure::Config("verification failed".into())),
            }
        }
        Command::Clifford { n } => {
            let rep = build_clifford_rep(n).map_err(|e| Failure::Config(e.to_string()))?;
            let mut out = io::stdout().lock();
            let mut print = |name: String, m: &faer::Mat<ncbloch_core::c64>| -> io::Result<()> {
                writeln!(out, "{name}")?;
                for i in 0..m.nrows() {
                    let row: Vec<String> = (0..m.ncols())
                        .map(|j| format!("{:>3}{:+}i", m[(i, j)].re + 0.0, m[(i, j)].im + 0.0))
                        .collect();
                    writeln!(out, "  {}", row.join("  "))?;
                }
                Ok(())
            };
            for (k, g) in rep.generators().iter().enumerate() {
                print(format!("gamma_{}", k + 1), g)?;
            }
            if let Some(g) = rep.grading() {
                print("gamma_0".into(), g)?;
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    // Linear algebra runs single-threaded inside each task; parallelism is
    // over tasks, which keeps every record independent of the thread count.
    faer::set_global_parallelism(faer::Par::Seq);
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
