//! Command line front end: enumeration, homology tables, the two-pipeline
//! comparison, axiom verification, and evaluation of the moduli maps.
//!
//! Exit codes: 0 success, 1 usage error, 2 counterexample or pipeline
//! mismatch, 3 resource budget exceeded.

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use tropocat::axioms::{self, TrialConfig};
use tropocat::cospan::WeightedCospan;
use tropocat::graph::enumerate_genus;
use tropocat::graph_complex;
use tropocat::homology::{Budget, HomologyError};
use tropocat::moduli::{
    self, parse_rational, ContractionChain, ContractionChainJson, FactorizationChain,
    FactorizationChainJson,
};
use tropocat::tropical;
use tropocat::weight::Weighting;

#[derive(Parser)]
#[command(
    name = "tropocat",
    version,
    about = "Weighted cospans, stable graphs, and exact tropical homology"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List all isomorphism classes of stable weighted graphs of a genus
    Enumerate(EnumerateArgs),
    /// Compute an exact homology table
    Homology(HomologyArgs),
    /// Run both homology pipelines and compare them degree by degree
    Compare(CompareArgs),
    /// Verify axioms and surgery diagrams by randomized or exhaustive search
    Verify(VerifyArgs),
    /// Evaluate one of the moduli maps on a chain file
    Eval(EvalArgs),
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    genus: i64,
    /// Output file; stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct HomologyArgs {
    /// Which pipeline: the moduli cell complex or the graph complex
    #[arg(value_parser = ["delta", "gc"])]
    pipeline: String,
    #[arg(long)]
    genus: i64,
    /// Restrict the table to degrees a..b (inclusive)
    #[arg(long, value_parser = parse_range)]
    degree_range: Option<(i64, i64)>,
    /// Wall-clock budget in seconds
    #[arg(long)]
    budget_seconds: Option<u64>,
    /// Output CSV file; stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long)]
    genus: i64,
    #[arg(long)]
    budget_seconds: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// What to verify; only the cospan axioms are available
    #[arg(value_parser = ["axioms"])]
    what: String,
    #[arg(long, default_value = "nat-stable")]
    monoid: Weighting,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Enumerate the whole small range instead of sampling
    #[arg(long)]
    exhaustive: bool,
    #[arg(long, default_value_t = 4)]
    max_feet: usize,
    #[arg(long, default_value_t = 4)]
    max_apex: usize,
    #[arg(long, default_value_t = 3)]
    max_label: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    /// Which map to evaluate
    #[arg(value_parser = ["phi", "phi2", "mu"])]
    map: String,
    /// JSON chain file (a factorization chain, a contraction chain, or a
    /// nerve simplex of weighted cospans, depending on the map)
    #[arg(long)]
    chain: PathBuf,
    /// Comma-separated barycentric coordinates, rationals as p/q
    #[arg(long)]
    coords: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected a..b, got {s:?}"))?;
    let lo: i64 = a.trim().parse().map_err(|e| format!("bad lower bound: {e}"))?;
    let hi: i64 = b.trim().parse().map_err(|e| format!("bad upper bound: {e}"))?;
    if lo > hi {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok((lo, hi))
}

fn parse_coords(s: &str) -> Result<Vec<BigRational>, String> {
    s.split(',').map(parse_rational).collect()
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), String> {
    match out {
        Some(path) => {
            std::fs::write(path, content).map_err(|e| format!("cannot write {path:?}: {e}"))
        }
        None => std::io::stdout()
            .write_all(content.as_bytes())
            .map_err(|e| format!("cannot write stdout: {e}")),
    }
}

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_COUNTEREXAMPLE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

fn main() -> ExitCode {
    // worker parallelism is capped by TROPOCAT_THREADS; output ordering is
    // deterministic either way
    if let Ok(threads) = std::env::var("TROPOCAT_THREADS") {
        match threads.parse::<usize>() {
            Ok(n) if n >= 1 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!("TROPOCAT_THREADS must be a positive integer, got {threads:?}");
                return ExitCode::from(EXIT_USAGE);
            }
        }
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version exit 0; anything else is a usage error
            let is_help = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return ExitCode::from(if is_help { EXIT_OK } else { EXIT_USAGE });
        }
    };
    let code = match cli.command {
        Command::Enumerate(args) => run_enumerate(args),
        Command::Homology(args) => run_homology(args),
        Command::Compare(args) => run_compare(args),
        Command::Verify(args) => run_verify(args),
        Command::Eval(args) => run_eval(args),
    };
    match code {
        Ok(c) => ExitCode::from(c),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn budget_from(seconds: Option<u64>) -> Budget {
    match seconds {
        Some(s) => Budget::seconds(s),
        None => Budget::unlimited(),
    }
}

fn run_enumerate(args: EnumerateArgs) -> Result<u8, String> {
    let graphs = enumerate_genus(Weighting::NatStable, args.genus).map_err(|e| e.to_string())?;
    let json: Vec<_> = graphs.iter().map(|g| g.to_json()).collect();
    let mut text = serde_json::to_string_pretty(&json).map_err(|e| e.to_string())?;
    text.push('\n');
    emit(&args.out, &text)?;
    Ok(EXIT_OK)
}

struct HomologyTable {
    rows: Vec<(i64, usize, usize, usize)>, // degree, dim, boundary rank, betti
}

impl HomologyTable {
    fn to_csv(&self, range: Option<(i64, i64)>) -> String {
        let mut s = String::from("degree,dim,rank,betti\n");
        for &(d, dim, rank, betti) in &self.rows {
            if let Some((lo, hi)) = range {
                if d < lo || d > hi {
                    continue;
                }
            }
            s.push_str(&format!("{d},{dim},{rank},{betti}\n"));
        }
        s
    }
}

fn homology_table(
    complex: &tropocat::homology::ChainComplex,
    budget: &Budget,
) -> Result<HomologyTable, HomologyError> {
    let ranks = complex.boundary_ranks(budget)?;
    let betti = complex.betti_numbers(budget)?;
    let rows = complex
        .degree_range()
        .enumerate()
        .map(|(i, d)| (d, complex.dims[i], ranks[i], betti[i].1))
        .collect();
    Ok(HomologyTable { rows })
}

fn run_homology(args: HomologyArgs) -> Result<u8, String> {
    let budget = budget_from(args.budget_seconds);
    let table = match args.pipeline.as_str() {
        "delta" => tropical::build_complex(args.genus, &budget)
            .map_err(|e| e.to_string())
            .and_then(|tc| homology_table(&tc.complex, &budget).map_err(|e| e.to_string())),
        _ => graph_complex::build_gc(args.genus, &budget)
            .map_err(|e| e.to_string())
            .and_then(|gc| homology_table(&gc.complex, &budget).map_err(|e| e.to_string())),
    };
    match table {
        Ok(t) => {
            emit(&args.out, &t.to_csv(args.degree_range))?;
            Ok(EXIT_OK)
        }
        Err(msg) if msg.contains("budget") => {
            eprintln!("error: {msg}");
            Ok(EXIT_BUDGET)
        }
        Err(msg) => Err(msg),
    }
}

fn run_compare(args: CompareArgs) -> Result<u8, String> {
    let budget = budget_from(args.budget_seconds);
    match graph_complex::compare_with_tropical(args.genus, &budget) {
        Ok(rows) => {
            let mut s = String::from("edge_degree,simplicial_degree,delta_betti,gc_betti,status\n");
            let mut all_equal = true;
            for r in &rows {
                all_equal &= r.equal;
                s.push_str(&format!(
                    "{},{},{},{},{}\n",
                    r.edge_degree,
                    r.simplicial_degree,
                    r.tropical_betti,
                    r.gc_betti,
                    if r.equal { "equal" } else { "MISMATCH" }
                ));
            }
            emit(&args.out, &s)?;
            Ok(if all_equal { EXIT_OK } else { EXIT_COUNTEREXAMPLE })
        }
        Err(e) => {
            let msg = e.to_string();
            if msg.contains("budget") {
                eprintln!("error: {msg}");
                Ok(EXIT_BUDGET)
            } else {
                Err(msg)
            }
        }
    }
}

fn run_verify(args: VerifyArgs) -> Result<u8, String> {
    let cfg = TrialConfig {
        seed: args.seed,
        trials: args.trials,
        max_feet: args.max_feet,
        max_apex: args.max_apex,
        max_label: args.max_label,
    };
    let reports = axioms::run_all(args.monoid, &cfg, args.exhaustive);
    let mut text = serde_json::to_string_pretty(&reports).map_err(|e| e.to_string())?;
    text.push('\n');
    emit(&args.out, &text)?;
    let ok = reports.iter().all(|r| r.passed);
    Ok(if ok { EXIT_OK } else { EXIT_COUNTEREXAMPLE })
}

fn run_eval(args: EvalArgs) -> Result<u8, String> {
    let data = std::fs::read_to_string(&args.chain)
        .map_err(|e| format!("cannot read {:?}: {e}", args.chain))?;
    let t = parse_coords(&args.coords)?;
    let mut text = match args.map.as_str() {
        "phi" => {
            let json: FactorizationChainJson =
                serde_json::from_str(&data).map_err(|e| e.to_string())?;
            let chain = FactorizationChain::from_json(&json).map_err(|e| e.to_string())?;
            let m = moduli::phi(&chain, &t).map_err(|e| e.to_string())?;
            serde_json::to_string_pretty(&m.canonical().to_json()).map_err(|e| e.to_string())?
        }
        "phi2" => {
            let json: ContractionChainJson =
                serde_json::from_str(&data).map_err(|e| e.to_string())?;
            let chain = ContractionChain::from_json(&json).map_err(|e| e.to_string())?;
            let m = moduli::phi2(&chain, &t).map_err(|e| e.to_string())?;
            serde_json::to_string_pretty(&m.canonical().to_json()).map_err(|e| e.to_string())?
        }
        _ => {
            // a nerve simplex: same file shape as a factorization chain but
            // without the closed-endpoint requirements
            let json: FactorizationChainJson =
                serde_json::from_str(&data).map_err(|e| e.to_string())?;
            let monoid: Weighting = json.monoid.parse()?;
            let cospans = json
                .cospans
                .iter()
                .map(|c| WeightedCospan::from_json(monoid, c).map_err(|e| e.to_string()))
                .collect::<Result<Vec<_>, _>>()?;
            let pts = moduli::mu(&cospans, &t).map_err(|e| e.to_string())?;
            let out: Vec<_> = pts.iter().map(|p| p.to_json()).collect();
            serde_json::to_string_pretty(&out).map_err(|e| e.to_string())?
        }
    };
    text.push('\n');
    emit(&args.out, &text)?;
    Ok(EXIT_OK)
}
