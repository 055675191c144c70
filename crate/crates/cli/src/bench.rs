use std::io;
use std::time::Duration;

use clap::Args;
use rayon::prelude::*;
use serde::Serialize;

use relengine_core::bat::oracle_cap_from_env;
use relengine_core::run::is_cap_error;
use relengine_core::{run, Backend, Deadline, Error, Family, GeneratorSpec, RunOptions};

use crate::format::significant;

#[derive(Args)]
pub struct BenchArgs {
    #[arg(long, value_parser = crate::parse_family)]
    family: Family,
    #[arg(long, default_value_t = 1)]
    k_min: usize,
    #[arg(long)]
    k_max: usize,
    #[arg(long, default_value_t = 0.9)]
    p: f64,
    #[arg(long)]
    seed: Option<u64>,
    /// Grid height.
    #[arg(long, default_value_t = relengine_core::generate::DEFAULT_GRID_ROWS)]
    rows: usize,
    /// Comma-separated backends.
    #[arg(long, value_delimiter = ',', default_value = "qbat,qb2", value_parser = crate::parse_backend)]
    backends: Vec<Backend>,
    /// Per-run time budget in seconds.
    #[arg(long, default_value_t = 60.0)]
    budget: f64,
    #[arg(long, conflicts_with = "json")]
    csv: bool,
    #[arg(long)]
    json: bool,
    /// Worker threads; results are still emitted in sweep order.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Status {
    Ok,
    Timeout,
    SkippedCap,
}

impl Status {
    fn name(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Timeout => "timeout",
            Status::SkippedCap => "skipped-cap",
        }
    }
}

#[derive(Debug, Serialize)]
struct Row {
    family: Family,
    k: usize,
    nodes: usize,
    arcs: usize,
    backend: Backend,
    status: Status,
    reliability: Option<f64>,
    wall_time: Option<f64>,
    network_digest: String,
}

pub fn bench(args: BenchArgs) -> Result<(), Error> {
    if args.k_min == 0 || args.k_min > args.k_max {
        return Err(Error::Generator(format!(
            "empty sweep: k from {} to {}",
            args.k_min, args.k_max
        )));
    }
    if !(args.budget.is_finite() && args.budget > 0.0) {
        return Err(Error::Generator(format!("budget must be positive, got {}", args.budget)));
    }
    let budget = Duration::from_secs_f64(args.budget);
    let cap = oracle_cap_from_env();

    let mut tasks = Vec::new();
    for k in args.k_min..=args.k_max {
        let mut spec = GeneratorSpec::new(args.family, k, args.p).with_rows(args.rows);
        if let Some(seed) = args.seed {
            spec = spec.with_seed(seed);
        }
        let net = spec.generate()?;
        for &b in &args.backends {
            tasks.push((k, net.clone(), b));
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs.max(1))
        .build()
        .expect("thread pool");
    let rows: Vec<Row> = pool.install(|| {
        tasks
            .par_iter()
            .map(|(k, net, backend)| {
                let options = RunOptions {
                    oracle_cap: cap,
                    deadline: Deadline::after(budget),
                };
                let (status, reliability, wall_time) = match run(net, *backend, options) {
                    Ok(r) => (Status::Ok, Some(r.reliability), Some(r.wall_time)),
                    Err(Error::Timeout) => (Status::Timeout, None, None),
                    Err(e) if is_cap_error(&e) => {
                        eprintln!("note: {backend} skipped for k = {k}: {e}");
                        (Status::SkippedCap, None, None)
                    }
                    Err(e) => return Err(e),
                };
                Ok(Row {
                    family: args.family,
                    k: *k,
                    nodes: net.node_count(),
                    arcs: net.arc_count(),
                    backend: *backend,
                    status,
                    reliability,
                    wall_time,
                    network_digest: net.digest(),
                })
            })
            .collect::<Result<_, Error>>()
    })?;

    if args.csv {
        let mut w = csv::Writer::from_writer(io::stdout());
        for row in &rows {
            w.serialize(row).expect("writing to stdout");
        }
        w.flush().expect("writing to stdout");
    } else if args.json {
        println!("{}", serde_json::to_string(&rows).expect("plain data serializes"));
    } else {
        print_table(&rows);
    }
    Ok(())
}

fn print_table(rows: &[Row]) {
    println!(
        "{:<13} {:>4} {:>6} {:>6} {:<7} {:<12} {:>16} {:>12}",
        "family", "k", "nodes", "arcs", "backend", "status", "reliability", "seconds"
    );
    for r in rows {
        println!(
            "{:<13} {:>4} {:>6} {:>6} {:<7} {:<12} {:>16} {:>12}",
            r.family.name(),
            r.k,
            r.nodes,
            r.arcs,
            r.backend.name(),
            r.status.name(),
            r.reliability.map(significant).unwrap_or_else(|| "-".into()),
            r.wall_time.map(|t| format!("{t:.6}")).unwrap_or_else(|| "-".into()),
        );
    }
}
