//! Command-line front end: invariant reports, verification runs, and
//! machine-readable model dumps for partial configuration spaces.
//!
//! Exit codes: 0 success/verified, 1 usage error, 2 input error, 3 budget
//! exceeded, 4 verification failure (a falsification witness was found).

mod report;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use parconf_core::flatconn::{
    decompose_flat_with, grid_enumerate_flat, verify_m3res, FlatError, Representation,
    DEFAULT_BUDGET,
};
use parconf_core::lie::LieError;
use parconf_core::linalg::Rational;
use parconf_core::model::model_dump;
use parconf_core::*;
use std::str::FromStr;

const EXIT_OK: i32 = 0;
const EXIT_USAGE: i32 = 1;
const EXIT_INPUT: i32 = 2;
const EXIT_BUDGET: i32 = 3;
const EXIT_VERIFY: i32 = 4;

#[derive(Parser)]
#[command(
    name = "parconf",
    version,
    about = "Exact invariants of partial configuration spaces of Riemann surfaces"
)]
struct Cli {
    /// Size of the worker thread pool (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ModelArgs {
    /// Genus of the surface.
    #[arg(long)]
    genus: usize,
    /// Graph file: edge list ("n" then "i j" lines, '#' comments) or JSON
    /// {"n": .., "edges": [[i,j],..]}.
    #[arg(long)]
    graph: std::path::PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgebraArg {
    Sl2,
    Sol2,
}

#[derive(Clone, Copy, ValueEnum)]
enum ThetaArg {
    Standard,
    Adjoint,
}

#[derive(Subcommand)]
enum Command {
    /// Summary report: Betti number, admissible maps, resonance components,
    /// formality, optionally the LCS rank table.
    Report {
        #[command(flatten)]
        model: ModelArgs,
        /// Include lower-central-series ranks up to this weight.
        #[arg(long)]
        max_weight: Option<u32>,
        #[arg(long)]
        json: bool,
    },
    /// Lower-central-series ranks of the holonomy Lie algebra.
    Lcs {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        max_weight: u32,
        /// Use the raw presentation (weight grading with weight-2 edge
        /// generators) instead of the reduced one.
        #[arg(long)]
        raw: bool,
        #[arg(long)]
        json: bool,
    },
    /// 1-formality classification.
    Formality {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        json: bool,
    },
    /// Verify the rank-one resonance decomposition on random rational points.
    ResonanceCheck {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 25)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Exhaustively enumerate flat connections over a coefficient grid and
    /// decompose every solution.
    FlatEnumerate {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum)]
        algebra: AlgebraArg,
        /// Comma-separated rational grid values.
        #[arg(long, default_value = "-1,0,1")]
        grid: String,
        #[arg(long, value_enum, default_value_t = ThetaArg::Standard)]
        theta: ThetaArg,
        /// Candidate budget; enumeration refuses larger spaces.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
        #[arg(long)]
        json: bool,
    },
    /// Dump the model bases, differential, and product as JSON.
    ModelDump {
        #[command(flatten)]
        model: ModelArgs,
    },
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    if let Some(threads) = cli.threads {
        // a failure here just means a pool already exists
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    match cli.command {
        Command::Report {
            model,
            max_weight,
            json,
        } => cmd_report(&model, max_weight, json),
        Command::Lcs {
            model,
            max_weight,
            raw,
            json,
        } => cmd_lcs(&model, max_weight, raw, json),
        Command::Formality { model, json } => cmd_formality(&model, json),
        Command::ResonanceCheck {
            model,
            samples,
            seed,
            json,
        } => cmd_resonance_check(&model, samples, seed, json),
        Command::FlatEnumerate {
            model,
            algebra,
            grid,
            theta,
            budget,
            json,
        } => cmd_flat_enumerate(&model, algebra, &grid, theta, budget, json),
        Command::ModelDump { model } => cmd_model_dump(&model),
    }
}

fn load_graph(args: &ModelArgs) -> Result<Graph, i32> {
    let text = std::fs::read_to_string(&args.graph).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", args.graph.display());
        EXIT_INPUT
    })?;
    Graph::parse(&text).map_err(|e| {
        eprintln!("error: {}: {e}", args.graph.display());
        EXIT_INPUT
    })
}

fn print_json<T: serde::Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn cmd_report(args: &ModelArgs, max_weight: Option<u32>, json: bool) -> i32 {
    let graph = match load_graph(args) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let doc = match report::build_report(args.genus, &graph, max_weight) {
        Ok(doc) => doc,
        Err(e) => {
            eprintln!("error: {e}");
            return lie_error_code(&e);
        }
    };
    if json {
        print_json(&doc);
    } else {
        report::print_text(&doc);
    }
    EXIT_OK
}

fn lie_error_code(e: &LieError) -> i32 {
    match e {
        LieError::TooLarge { .. } => EXIT_BUDGET,
        _ => EXIT_INPUT,
    }
}

fn cmd_lcs(args: &ModelArgs, max_weight: u32, raw: bool, json: bool) -> i32 {
    let graph = match load_graph(args) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let presentation = if raw {
        raw_presentation(&build_model(args.genus, &graph))
    } else {
        reduced_presentation(args.genus, &graph)
    };
    let ranks = match lcs_ranks(&presentation, max_weight) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return lie_error_code(&e);
        }
    };
    if json {
        print_json(&report::LcsDoc {
            genus: args.genus,
            graph: graph.clone(),
            grading: if raw { "raw-weight" } else { "bracket-length" }.into(),
            max_weight,
            ranks: ranks.ranks.clone(),
        });
    } else {
        println!(
            "lcs ranks of the holonomy Lie algebra ({} presentation)",
            if raw { "raw" } else { "reduced" }
        );
        println!("{:>8} {:>8}", "weight", "rank");
        for (k, r) in ranks.ranks.iter().enumerate() {
            println!("{:>8} {:>8}", k + 1, r);
        }
    }
    EXIT_OK
}

fn cmd_formality(args: &ModelArgs, json: bool) -> i32 {
    let graph = match load_graph(args) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let verdict = formality_classify(args.genus, &graph);
    if json {
        print_json(&serde_json::json!({
            "genus": args.genus,
            "graph": graph,
            "classification": verdict,
        }));
    } else {
        println!("{verdict}");
    }
    EXIT_OK
}

fn cmd_resonance_check(args: &ModelArgs, samples: usize, seed: u64, json: bool) -> i32 {
    let graph = match load_graph(args) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let m = build_model(args.genus, &graph);
    let report = verify_decomposition(&m, samples, seed);
    if json {
        print_json(&serde_json::json!({
            "genus": args.genus,
            "graph": graph,
            "samples": report.samples,
            "seed": report.seed,
            "components": report.component_count,
            "violations": report.violations,
        }));
    } else {
        println!(
            "resonance decomposition: {} components, {} samples, seed {}",
            report.component_count, report.samples, report.seed
        );
        if report.ok() {
            println!("no violations");
        } else {
            for v in &report.violations {
                println!("violation: {v:?}");
            }
        }
    }
    if report.ok() {
        EXIT_OK
    } else {
        EXIT_VERIFY
    }
}

fn parse_grid(text: &str) -> Result<Vec<Rational>, i32> {
    text.split(',')
        .map(|s| {
            Rational::from_str(s.trim()).map_err(|e| {
                eprintln!("error: bad grid value {s:?}: {e}");
                EXIT_USAGE
            })
        })
        .collect()
}

fn cmd_flat_enumerate(
    args: &ModelArgs,
    algebra: AlgebraArg,
    grid_text: &str,
    theta: ThetaArg,
    budget: u128,
    json: bool,
) -> i32 {
    let graph = match load_graph(args) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let grid = match parse_grid(grid_text) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let m = build_model(args.genus, &graph);
    let alg = match algebra {
        AlgebraArg::Sl2 => MatrixLieAlgebra::sl2(),
        AlgebraArg::Sol2 => MatrixLieAlgebra::sol2(),
    };
    let rep = match theta {
        ThetaArg::Standard => Representation::standard(alg.clone()),
        ThetaArg::Adjoint => Representation::adjoint(alg.clone()),
    };
    let maps = enumerate_admissible(&m);
    let flats = match grid_enumerate_flat(&m.cdga, &alg, &grid, budget) {
        Ok(f) => f,
        Err(e @ FlatError::BudgetExceeded { .. }) => {
            eprintln!("error: {e}");
            return EXIT_BUDGET;
        }
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT;
        }
    };
    let candidates = (grid.len() as u128).pow((m.dim1() * alg.dim()) as u32);

    let mut rank_one = 0usize;
    let mut by_label: Vec<(String, usize)> = Vec::new();
    let mut failures: Vec<Vec<Vec<String>>> = Vec::new();
    for f in &flats {
        match decompose_flat_with(&maps, &m, &alg, f) {
            FlatDecomposition::RankOne => rank_one += 1,
            FlatDecomposition::ViaMap { label, .. } => {
                let key = label.to_string();
                match by_label.iter_mut().find(|(k, _)| *k == key) {
                    Some((_, c)) => *c += 1,
                    None => by_label.push((key, 1)),
                }
            }
            _ => failures.push(
                (0..f.rows())
                    .map(|r| f.row(r).iter().map(|c| c.to_string()).collect())
                    .collect(),
            ),
        }
    }
    by_label.sort();

    // the resonance comparison needs H¹ ≠ 0
    let m3res = if m.cdga.betti1() > 0 {
        match verify_m3res(&m, &maps, &rep, &flats) {
            Ok(r) => Some(r),
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_INPUT;
            }
        }
    } else {
        None
    };

    let mismatch_count = m3res.as_ref().map_or(0, |r| r.mismatches.len());
    if json {
        print_json(&serde_json::json!({
            "genus": args.genus,
            "graph": graph,
            "algebra": match algebra { AlgebraArg::Sl2 => "sl2", AlgebraArg::Sol2 => "sol2" },
            "grid": grid.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "candidates": candidates.to_string(),
            "flat": flats.len(),
            "rank_one": rank_one,
            "via_map": by_label,
            "decomposition_failures": failures,
            "m3res": m3res,
        }));
    } else {
        println!(
            "scanned {candidates} candidates, {} flat: {rank_one} rank-one, {} via maps, {} failures",
            flats.len(),
            by_label.iter().map(|(_, c)| c).sum::<usize>(),
            failures.len()
        );
        for (label, c) in &by_label {
            println!("  {label}: {c}");
        }
        match &m3res {
            Some(r) if r.ok() => println!("covariant resonance check: {} flats, no mismatches", r.checked),
            Some(r) => println!("covariant resonance check: {} MISMATCHES", r.mismatches.len()),
            None => println!("covariant resonance check skipped (H¹ = 0)"),
        }
    }
    if failures.is_empty() && mismatch_count == 0 {
        EXIT_OK
    } else {
        EXIT_VERIFY
    }
}

fn cmd_model_dump(args: &ModelArgs) -> i32 {
    let graph = match load_graph(args) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let m = build_model(args.genus, &graph);
    print_json(&model_dump(&m));
    EXIT_OK
}
