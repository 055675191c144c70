use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use relengine_core::bat::oracle_cap_from_env;
use relengine_core::{
    decompose, parse_network, run, Backend, Counters, Deadline, Error, Family, GeneratorSpec,
    Network, RunOptions, RunResult,
};

mod bench;
mod format;

use format::significant;

#[derive(Parser)]
#[command(name = "relengine", version, about = "Exact two-terminal network reliability")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the reliability of a network file.
    Compute(ComputeArgs),
    /// Run every backend on one network and compare.
    Crosscheck(CrosscheckArgs),
    /// Time backends over a sweep of generated networks.
    Bench(bench::BenchArgs),
    /// Print a generated network in file format.
    Generate(GenerateArgs),
}

fn parse_backend(s: &str) -> Result<Backend, String> {
    s.parse()
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Args)]
struct ComputeArgs {
    /// Network file, or `-` for stdin.
    file: PathBuf,
    /// oracle, bat, qbat or qb2.
    #[arg(long, default_value = "qb2", value_parser = parse_backend)]
    backend: Backend,
    /// Report work counters.
    #[arg(long)]
    counters: bool,
    /// Report wall time.
    #[arg(long)]
    time: bool,
    /// Emit one JSON object instead of text.
    #[arg(long)]
    json: bool,
    /// Print the cuts and stages before the result.
    #[arg(long)]
    explain_decomposition: bool,
    /// Give up after this many seconds.
    #[arg(long)]
    budget: Option<f64>,
}

#[derive(Args, Clone)]
pub(crate) struct GeneratorArgs {
    /// series, ladder, grid, bridge-chain or random.
    #[arg(long, value_parser = parse_family)]
    family: Option<Family>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    /// Jitter arc probabilities (and pick the topology, for `random`) from this seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Grid height.
    #[arg(long, default_value_t = relengine_core::generate::DEFAULT_GRID_ROWS)]
    rows: usize,
}

impl GeneratorArgs {
    fn spec(&self, seed_offset: u64) -> Result<GeneratorSpec, String> {
        let family = self.family.ok_or("--family is required")?;
        let k = self.k.ok_or("--k is required")?;
        let mut spec = GeneratorSpec::new(family, k, self.p.unwrap_or(0.9)).with_rows(self.rows);
        if let Some(seed) = self.seed {
            spec = spec.with_seed(seed.wrapping_add(seed_offset));
        } else if seed_offset > 0 {
            spec = spec.with_seed(seed_offset);
        }
        Ok(spec)
    }
}

#[derive(Args)]
struct CrosscheckArgs {
    /// Network file, or `-` for stdin. Omit to use a generator.
    #[arg(conflicts_with = "family")]
    file: Option<PathBuf>,
    #[command(flatten)]
    generator: GeneratorArgs,
    /// Largest allowed pairwise difference.
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    /// Check this many generated instances, with consecutive seeds.
    #[arg(long, default_value_t = 1, requires = "family")]
    count: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct GenerateArgs {
    /// Family, size and probability may also be given positionally.
    #[arg(value_parser = parse_family, conflicts_with = "family")]
    family_pos: Option<Family>,
    #[arg(conflicts_with = "k")]
    k_pos: Option<usize>,
    #[arg(conflicts_with = "p")]
    p_pos: Option<f64>,
    #[command(flatten)]
    generator: GeneratorArgs,
}

/// Exit codes.
const EXIT_MISMATCH: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_CAP: u8 = 3;
const EXIT_TIMEOUT: u8 = 4;

pub(crate) fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Timeout => EXIT_TIMEOUT,
        e if relengine_core::run::is_cap_error(e) => EXIT_CAP,
        _ => EXIT_INVALID,
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        Failure {
            code: exit_code(&err),
            message: err.to_string(),
        }
    }
}

impl From<String> for Failure {
    fn from(message: String) -> Self {
        Failure {
            code: EXIT_INVALID,
            message,
        }
    }
}

fn read_network(path: &Path) -> Result<Network, Failure> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| format!("stdin: {e}"))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?
    };
    parse_network(&text).map_err(|e| Failure {
        code: EXIT_INVALID,
        message: format!("{}: {e}", path.display()),
    })
}

fn options(budget: Option<f64>) -> Result<RunOptions, Failure> {
    let deadline = match budget {
        None => Deadline::none(),
        Some(s) if s.is_finite() && s > 0.0 => Deadline::after(std::time::Duration::from_secs_f64(s)),
        Some(s) => return Err(format!("budget must be positive, got {s}").into()),
    };
    Ok(RunOptions {
        oracle_cap: oracle_cap_from_env(),
        deadline,
    })
}

#[derive(Serialize)]
struct ComputeJson<'a> {
    reliability: f64,
    backend: Backend,
    wall_time: f64,
    counters: Option<&'a Counters>,
    network_digest: &'a str,
}

fn compute(args: ComputeArgs) -> Result<(), Failure> {
    let net = read_network(&args.file)?;
    if args.explain_decomposition {
        print!("{}", decompose(&net)?);
    }
    let result = run(&net, args.backend, options(args.budget)?)?;
    if args.json {
        let out = ComputeJson {
            reliability: result.reliability,
            backend: result.backend,
            wall_time: result.wall_time,
            counters: args.counters.then_some(&result.counters),
            network_digest: &result.network_digest,
        };
        println!("{}", serde_json::to_string(&out).expect("plain data serializes"));
        return Ok(());
    }
    println!("{}", significant(result.reliability));
    if args.counters {
        print!("{}", format::counters(&result.counters));
    }
    if args.time {
        println!("time: {:.6} s", result.wall_time);
    }
    Ok(())
}

#[derive(Serialize)]
struct CrosscheckJson {
    network_digest: String,
    results: Vec<RunResult>,
    max_difference: f64,
    passed: bool,
}

fn crosscheck_one(net: &Network, tolerance: f64, json: bool) -> Result<bool, Failure> {
    let opts = options(None)?;
    let results = Backend::ALL
        .into_iter()
        .map(|b| run(net, b, opts))
        .collect::<Result<Vec<_>, _>>()?;
    let mut max_difference = 0.0f64;
    for a in &results {
        for b in &results {
            max_difference = max_difference.max((a.reliability - b.reliability).abs());
        }
    }
    let passed = max_difference <= tolerance;
    if json {
        let out = CrosscheckJson {
            network_digest: net.digest(),
            results,
            max_difference,
            passed,
        };
        println!("{}", serde_json::to_string(&out).expect("plain data serializes"));
    } else {
        for r in &results {
            println!("{:<7}{}", r.backend.name(), significant(r.reliability));
        }
        println!(
            "max difference {max_difference:.3e}: {}",
            if passed { "PASS" } else { "FAIL" }
        );
    }
    Ok(passed)
}

fn crosscheck(args: CrosscheckArgs) -> Result<(), Failure> {
    let mut all = true;
    match &args.file {
        Some(path) => all &= crosscheck_one(&read_network(path)?, args.tolerance, args.json)?,
        None => {
            for i in 0..args.count {
                let spec = args.generator.spec(i)?;
                if args.count > 1 && !args.json {
                    println!("# {} k={} seed={:?}", spec.family, spec.k, spec.seed);
                }
                all &= crosscheck_one(&spec.generate()?, args.tolerance, args.json)?;
            }
        }
    }
    if all {
        Ok(())
    } else {
        Err(Failure {
            code: EXIT_MISMATCH,
            message: format!("backends differ by more than {}", args.tolerance),
        })
    }
}

fn generate(args: GenerateArgs) -> Result<(), Failure> {
    let mut g = args.generator;
    g.family = g.family.or(args.family_pos);
    g.k = g.k.or(args.k_pos);
    g.p = g.p.or(args.p_pos);
    print!("{}", g.spec(0)?.generate()?.to_file_string());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Compute(a) => compute(a),
        Command::Crosscheck(a) => crosscheck(a),
        Command::Bench(a) => bench::bench(a).map_err(Failure::from),
        Command::Generate(a) => generate(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("relengine: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
