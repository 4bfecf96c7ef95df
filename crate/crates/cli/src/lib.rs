//! Command-line frontend: ingest events, build indices, run query scripts,
//! verification campaigns and latency sweeps.

pub mod bench;
pub mod bundle;
pub mod render;
pub mod script;
pub mod verify;

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{self, BufReader, Read, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::json;
use tempogeo::event::{read_csv, read_jsonl};
use tempogeo::EventSequence;
use tempogeo_oracles::query::Family;

use bench::BenchOptions;
use bundle::{Bundle, Config};
use script::Query;
use verify::VerifyOptions;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "tempogeo", version, about = "Time-windowed geometric queries over event sequences")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build indices and print summary statistics.
    Build(BuildArgs),
    /// Build indices and answer a query script.
    Query(QueryArgs),
    /// Compare every index against the brute-force oracles.
    Verify(VerifyArgs),
    /// Measure query latency over a sweep of window widths.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct IndexArgs {
    /// Approximation parameter for range, emptiness and nearest-neighbor queries.
    #[arg(long, default_value_t = tempogeo::proximity::DEFAULT_EPS)]
    pub eps: f64,
    /// WSPD separation for proximity graphs.
    #[arg(long, default_value_t = tempogeo::proximity::DEFAULT_SEPARATION)]
    pub sep: f64,
    /// Bits per coordinate of the Morton grid.
    #[arg(long, default_value_t = tempogeo::morton::DEFAULT_BITS)]
    pub bits: u32,
    /// Validate every Gabriel candidate pair against all window points.
    #[arg(long)]
    pub exact_gabriel: bool,
    #[arg(long, hide = true)]
    pub inject_fault: bool,
}

impl IndexArgs {
    fn config(&self) -> Result<Config> {
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            bail!("--eps must be positive, got {}", self.eps);
        }
        if !(self.sep > 0.0 && self.sep.is_finite()) {
            bail!("--sep must be positive, got {}", self.sep);
        }
        if !(1..=tempogeo::morton::DEFAULT_BITS).contains(&self.bits) {
            bail!("--bits must be in 1..={}, got {}", tempogeo::morton::DEFAULT_BITS, self.bits);
        }
        Ok(Config {
            eps: self.eps,
            sep: self.sep,
            bits: self.bits,
            exact_gabriel: self.exact_gabriel,
            inject_fault: self.inject_fault,
        })
    }
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    /// Event file: CSV, or JSON lines when the extension is .jsonl or .json.
    #[arg(long)]
    pub input: PathBuf,
    /// Index families to build.
    #[arg(long, default_value = "hull,skyline,prox")]
    pub indices: String,
    #[command(flatten)]
    pub index: IndexArgs,
}

#[derive(Debug, Args)]
pub struct QueryArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Index families to build; defaults to the ones the queries need.
    #[arg(long)]
    pub indices: Option<String>,
    /// Query script, or `-` for standard input.
    #[arg(long)]
    pub script: Option<PathBuf>,
    /// A single query line such as `skyline 0 100`; may be repeated.
    #[arg(long = "op")]
    pub ops: Vec<String>,
    /// Answer queries on this many threads.
    #[arg(long)]
    pub threads: Option<usize>,
    #[command(flatten)]
    pub index: IndexArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Sequence lengths, comma separated.
    #[arg(long, default_value = "64,256", value_delimiter = ',')]
    pub sizes: Vec<usize>,
    /// Random queries per suite and size.
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[command(flatten)]
    pub index: IndexArgs,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 1 << 20)]
    pub n: usize,
    /// Window widths, comma separated.
    #[arg(long, default_value = "256,1024,4096,16384,65536", value_delimiter = ',')]
    pub widths: Vec<usize>,
    #[arg(long, default_value = "giftwrap,extremal,ann,mst,nn_graph", value_delimiter = ',')]
    pub ops: Vec<String>,
    /// Queries per op and width.
    #[arg(long, default_value_t = 200)]
    pub queries: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    pub index: IndexArgs,
}

/// Failure carrying its exit code.
#[derive(Debug)]
struct Exit(i32, anyhow::Error);

trait Usage<T> {
    fn usage(self) -> std::result::Result<T, Exit>;
}

impl<T> Usage<T> for Result<T> {
    fn usage(self) -> std::result::Result<T, Exit> {
        self.map_err(|e| Exit(EXIT_USAGE, e))
    }
}

pub fn parse_families(list: &str) -> Result<BTreeSet<Family>> {
    let mut out = BTreeSet::new();
    for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        out.insert(match name {
            "skyline" => Family::Skyline,
            "hull" => Family::Hull,
            "prox" | "proximity" => Family::Proximity,
            _ => bail!("unknown index family {name:?}; expected hull, skyline or prox"),
        });
    }
    if out.is_empty() {
        bail!("no index families requested");
    }
    Ok(out)
}

pub fn load(path: &Path) -> Result<EventSequence> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    let reader = BufReader::new(file);
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
    let raw = if matches!(ext, "jsonl" | "json") {
        read_jsonl(reader)
    } else {
        read_csv(reader)
    }
    .with_context(|| format!("{}", path.display()))?;
    EventSequence::new(raw).with_context(|| format!("{}", path.display()))
}

fn emit(out: &mut impl Write, line: &str) -> Result<()> {
    writeln!(out, "{line}").context("writing output")
}

fn cmd_build(args: &BuildArgs, out: &mut impl Write) -> std::result::Result<(), Exit> {
    let config = args.index.config().usage()?;
    let families = parse_families(&args.indices).usage()?;
    let seq = load(&args.input).usage()?;
    let (n, d) = (seq.len(), seq.dim());
    let bundle = Bundle::build(seq, &families, config).usage()?;
    let summary = json!({"n": n, "d": d, "indices": bundle.stats});
    emit(out, &summary.to_string()).usage()
}

fn read_script(args: &QueryArgs, n: usize) -> Result<Vec<Query>> {
    let mut queries = Vec::new();
    if let Some(path) = &args.script {
        let mut text = String::new();
        if path.as_os_str() == "-" {
            io::stdin().read_to_string(&mut text).context("reading script from stdin")?;
        } else {
            text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        }
        queries = script::parse_script(&text, n)?;
    }
    for (k, op) in args.ops.iter().enumerate() {
        if let Some(q) = script::parse_line(op, k + 1, n).with_context(|| format!("--op {op:?}"))? {
            queries.push(q);
        }
    }
    if args.script.is_none() && args.ops.is_empty() {
        bail!("query needs --script or at least one --op");
    }
    Ok(queries)
}

fn cmd_query(args: &QueryArgs, out: &mut impl Write) -> std::result::Result<(), Exit> {
    let config = args.index.config().usage()?;
    let seq = load(&args.input).usage()?;
    let queries = read_script(args, seq.len()).usage()?;
    let needed: BTreeSet<Family> = queries.iter().map(|q| q.request.family()).collect();
    let families = match &args.indices {
        Some(list) => {
            let fams = parse_families(list).usage()?;
            if let Some(f) = needed.difference(&fams).next() {
                return Err(Exit(EXIT_USAGE, anyhow!("the script needs the {f} index, which --indices leaves out")));
            }
            fams
        }
        None => needed,
    };
    let bundle = Bundle::build(seq, &families, config).usage()?;
    let lines: Vec<String> = match args.threads {
        Some(t) if t > 1 => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Exit(EXIT_USAGE, e.into()))?;
            pool.install(|| queries.par_iter().map(|q| script::run(&bundle, q).to_string()).collect())
        }
        Some(0) => return Err(Exit(EXIT_USAGE, anyhow!("--threads must be at least 1"))),
        _ => queries.iter().map(|q| script::run(&bundle, q).to_string()).collect(),
    };
    for l in lines {
        emit(out, &l).usage()?;
    }
    Ok(())
}

fn cmd_verify(args: &VerifyArgs, out: &mut impl Write) -> std::result::Result<(), Exit> {
    let config = args.index.config().usage()?;
    if args.sizes.iter().any(|&n| n < 2) || args.sizes.is_empty() || args.trials == 0 {
        return Err(Exit(EXIT_USAGE, anyhow!("verify needs sizes of at least 2 and a positive trial count")));
    }
    let opts = VerifyOptions {
        seed: args.seed,
        sizes: args.sizes.clone(),
        trials: args.trials,
        config,
    };
    let report = verify::run_verify(&opts).map_err(|e| Exit(EXIT_VERIFY, e))?;
    for s in &report.suites {
        emit(out, &serde_json::to_string(s).expect("serializable")).usage()?;
    }
    if !report.passed() {
        let bad: usize = report.suites.iter().map(|s| s.mismatches).sum();
        return Err(Exit(EXIT_VERIFY, anyhow!("{bad} mismatches")));
    }
    Ok(())
}

fn cmd_bench(args: &BenchArgs, out: &mut impl Write) -> std::result::Result<(), Exit> {
    let config = args.index.config().usage()?;
    let opts = BenchOptions {
        n: args.n,
        widths: args.widths.clone(),
        ops: args.ops.clone(),
        queries: args.queries,
        seed: args.seed,
        config,
    };
    let rows = bench::run_bench(&opts).usage()?;
    write!(out, "{}", bench::to_csv(&rows)).context("writing output").usage()?;
    for c in bench::scaling(&rows) {
        eprintln!(
            "{} {} = {:.3} {}",
            c.op,
            c.metric,
            c.value,
            if c.pass { "ok" } else { "out of range" }
        );
    }
    Ok(())
}

/// Runs a parsed command line, writing results to `out` and diagnostics to
/// standard error. Returns the process exit code.
pub fn run(cli: &Cli, out: &mut impl Write) -> i32 {
    let res = match &cli.command {
        Command::Build(a) => cmd_build(a, out),
        Command::Query(a) => cmd_query(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Bench(a) => cmd_bench(a, out),
    };
    match res {
        Ok(()) => EXIT_OK,
        Err(Exit(code, e)) => {
            eprintln!("error: {e:#}");
            code
        }
    }
}
