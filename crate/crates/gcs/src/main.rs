use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use gcs::seedfile::{Family, SeedFile};
use gcs::suites::{run_suite, Config, Suite};
use gcs::{build_seed_file, mutate_file, CliError};

/// Build, mutate and verify generalized cluster seeds with exact arithmetic.
#[derive(Parser)]
#[command(name = "gcs", version)]
struct Cli {
    /// Worker threads for `verify` (defaults to the number of CPUs).
    #[arg(long, global = true, env = "GCS_WORKERS")]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Seed construction.
    Seed {
        #[command(subcommand)]
        command: SeedCommand,
    },
    /// Run a verification suite and emit a JSON report.
    Verify(VerifyArgs),
    /// Mutate a seed file along a sequence of vertices.
    Mutate(MutateArgs),
}

#[derive(Subcommand)]
enum SeedCommand {
    /// Build the initial seed of a family and write it as JSON.
    Build {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    #[arg(long, value_enum, default_value = "double")]
    family: Family,
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Band width; defaults to `max(2, n - 1)`.
    #[arg(long)]
    k: Option<usize>,
    /// Random points per identity.
    #[arg(long, default_value_t = 5)]
    points: usize,
    /// Required when the `CI` environment variable is set.
    #[arg(long)]
    rng_seed: Option<u64>,
    /// Coordinates of random points are drawn from `[-range, range]`.
    #[arg(long, env = "GCS_RANGE", default_value_t = 1_000_000)]
    range: i64,
    /// Charge grid: states with every coordinate in `[-grid, grid]`.
    #[arg(long, default_value_t = 30)]
    grid: i64,
    #[arg(long, default_value_t = 8)]
    charge_bound: i64,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MutateArgs {
    seed_file: PathBuf,
    /// Vertex labels such as `(2,1)`, variable names, or ids.
    #[arg(required = true)]
    vertices: Vec<String>,
    #[arg(long)]
    out: PathBuf,
    /// Certify that every new variable is a polynomial (n <= 3 only).
    #[arg(long)]
    check_regular: bool,
}

fn write_or_print(out: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(p.display().to_string(), e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn seed_build(family: Family, n: usize, k: Option<usize>, out: Option<&PathBuf>) -> Result<ExitCode, CliError> {
    let file = build_seed_file(family, n, k)?;
    file.check_structure()?;
    write_or_print(out, &file.to_json())?;
    let count = |kind: &str| file.vertices.iter().filter(|v| v.kind == kind).count();
    let edges: u32 = file.edges.iter().map(|e| e.2).sum();
    eprintln!(
        "{} seed: {} vertices ({} mutable, {} frozen, {} isolated), {} edges",
        family.as_str(),
        file.vertices.len(),
        count("mutable"),
        count("frozen"),
        count("isolated"),
        edges
    );
    Ok(ExitCode::SUCCESS)
}

fn verify(args: &VerifyArgs) -> Result<ExitCode, CliError> {
    if args.rng_seed.is_none() && std::env::var_os("CI").is_some() {
        return Err(CliError::Config("--rng-seed is required when CI is set".into()));
    }
    let cfg = Config {
        family: args.family,
        n: args.n,
        k: args.k.unwrap_or(args.n.saturating_sub(1).max(2)),
        points: args.points,
        rng_seed: args.rng_seed.unwrap_or(0),
        range: args.range,
        grid: args.grid,
        charge_bound: args.charge_bound,
        ..Config::default()
    };
    let start = Instant::now();
    let report = run_suite(args.suite, &cfg)?;
    write_or_print(args.out.as_ref(), &report.to_json())?;
    eprint!("{}", report.human());
    eprintln!("elapsed: {:.2?}", start.elapsed());
    Ok(if report.passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn mutate(args: &MutateArgs) -> Result<ExitCode, CliError> {
    let file = SeedFile::load(&args.seed_file)?;
    let (out, steps) = mutate_file(&file, &args.vertices, args.check_regular, Config::default().term_limit)?;
    out.save(&args.out)?;
    let mut ok = true;
    for s in &steps {
        match &s.outcome {
            Ok(terms) => eprintln!("PASS  {}  polynomial with {terms} terms", s.label),
            Err(e) => {
                ok = false;
                eprintln!("FAIL  {}  {e}", s.label);
            }
        }
    }
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(w) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match &cli.command {
        Command::Seed { command: SeedCommand::Build { family, n, k, out } } => seed_build(*family, *n, *k, out.as_ref()),
        Command::Verify(args) => verify(args),
        Command::Mutate(args) => mutate(args),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::from(e.exit_code() as u8)
    })
}
