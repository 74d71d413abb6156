//! Command-line front end: print generating polynomials, evaluate symbols,
//! run oracle cross-checks, glue legs with series verification, count curve
//! sets and benchmark the evaluators.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 verification failure,
//! 3 term budget exceeded.

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use loopgen::assign::{parse_assignment, AssignTextError};
use loopgen::curves::count_sets;
use loopgen::graph::{five_j, nine_j, six_j, three_j, AssignError, RecouplingGraph};
use loopgen::sweeps::{run_bench, run_check, BenchRow, RefOracle};
use loopgen::symbol::{generating_function, glue_identity_holds, symbol_value, SelectionRule};

#[derive(Parser)]
#[command(
    name = "loopgen",
    about = "Exact multi-j-symbol engine built on loop combinatorics",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the loop-set polynomial, the per-leg factors and the set counts
    Gf {
        /// graph file path or builtin alias (@3j, @5j, @6j, @9j)
        graph: String,
    },
    /// Evaluate one symbol exactly
    Symbol {
        graph: String,
        /// quantum numbers as name=2j (edges) or name=2j,2m (legs)
        assignments: Vec<String>,
        /// doubled magnetic numbers, one per leg in graph order
        #[arg(long = "m", num_args = 0.., allow_negative_numbers = true)]
        magnetic: Option<Vec<i32>>,
        /// uniform expansion cap override (per variable)
        #[arg(long)]
        cap: Option<u32>,
    },
    /// Exhaustively cross-check the engine against the oracles
    Check {
        graph: String,
        /// doubled angular-momentum bound for the sweep
        #[arg(long)]
        max2j: i32,
        /// magnetic term budget for the contraction oracle
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
    },
    /// Glue two legs and verify the series-level gluing against the glued graph
    Glue {
        graph: String,
        leg1: String,
        leg2: String,
        /// total order up to which the equivalence is verified
        #[arg(long, default_value_t = 6)]
        cap: u32,
    },
    /// Print enumerated set counts and their closed forms
    Count { graph: String },
    /// Time the evaluators over sweeps of growing size (CSV output)
    Bench {
        graph: String,
        #[arg(long)]
        max2j: i32,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        /// emit CSV (the default and only format)
        #[arg(long)]
        csv: bool,
    },
}

struct Failure {
    message: String,
    code: u8,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            message: message.into(),
            code: 1,
        }
    }

    fn verification(message: impl Into<String>) -> Self {
        Failure {
            message: message.into(),
            code: 2,
        }
    }

    fn budget(message: impl Into<String>) -> Self {
        Failure {
            message: message.into(),
            code: 3,
        }
    }
}

fn load_graph(spec: &str) -> Result<RecouplingGraph, Failure> {
    match spec.to_ascii_lowercase().as_str() {
        "@3j" => return Ok(three_j()),
        "@5j" => return Ok(five_j()),
        "@6j" => return Ok(six_j()),
        "@9j" => return Ok(nine_j()),
        other if other.starts_with('@') => {
            return Err(Failure::usage(format!(
                "unknown builtin graph `{spec}` (available: @3j, @5j, @6j, @9j)"
            )))
        }
        _ => {}
    }
    let text = std::fs::read_to_string(spec)
        .map_err(|e| Failure::usage(format!("cannot read {spec}: {e}")))?;
    RecouplingGraph::parse(&text).map_err(|e| Failure::usage(format!("{spec}: {e}")))
}

fn cmd_gf(graph: &str) -> Result<(), Failure> {
    let g = load_graph(graph)?;
    let gf = generating_function(&g);
    let counts = count_sets(&g);
    println!(
        "graph: V={} I={} J={}",
        g.vertex_count(),
        g.edge_count(),
        g.leg_count()
    );
    println!("|Omega_0| = {}", counts.omega0);
    println!("base = {}", gf.base);
    for (leg, q) in &gf.leg_factors {
        println!("Q[{leg}] = {q}");
    }
    let mut pairs = counts.pairs.clone();
    pairs.sort();
    for (i, j, n) in &pairs {
        println!("|Omega_{{{i}->{j}}}| = {n}");
    }
    Ok(())
}

fn cmd_symbol(
    graph: &str,
    assignments: &[String],
    magnetic: Option<&[i32]>,
    cap: Option<u32>,
) -> Result<(), Failure> {
    let g = load_graph(graph)?;
    let q = match parse_assignment(&g, assignments, magnetic) {
        Ok(q) => q,
        // inconsistent magnetic data is a vanishing symbol, not a usage error
        Err(AssignTextError::Assign(AssignError::Parity { .. })) => {
            println!("0 (selection rule: {})", SelectionRule::Parity);
            return Ok(());
        }
        Err(AssignTextError::Assign(AssignError::MagneticRange { .. })) => {
            println!("0 (selection rule: {})", SelectionRule::MagneticRange);
            return Ok(());
        }
        Err(e) => return Err(Failure::usage(e.to_string())),
    };
    let value = match cap {
        None => symbol_value(&g, &q),
        Some(cap) => {
            loopgen::symbol::SymbolEvaluator::new(&g, cap).and_then(|ev| ev.value(&q))
        }
    };
    let value = value.map_err(|e| Failure::usage(e.to_string()))?;
    match value.vanished_by {
        Some(rule) => println!("0 (selection rule: {rule})"),
        None => {
            println!("{}", value.value);
            println!("approx = {:.14e}", value.value.to_f64());
        }
    }
    Ok(())
}

fn cmd_check(graph: &str, max2j: i32, budget: u64) -> Result<(), Failure> {
    let g = load_graph(graph)?;
    let oracle = match graph.to_ascii_lowercase().as_str() {
        "@3j" => RefOracle::ThreeJ,
        "@6j" => RefOracle::SixJ,
        _ => RefOracle::Contraction { budget },
    };
    let report = run_check(&g, max2j, oracle).map_err(|e| Failure::usage(e.to_string()))?;
    println!(
        "{} mismatches / {} cases (max2j = {max2j})",
        report.mismatches, report.cases
    );
    for s in &report.samples {
        println!("  {s}");
    }
    if report.budget_exceeded > 0 {
        return Err(Failure::budget(format!(
            "{} cases exceeded the contraction budget of {budget}",
            report.budget_exceeded
        )));
    }
    if report.mismatches > 0 {
        return Err(Failure::verification("verification failed"));
    }
    Ok(())
}

fn cmd_glue(graph: &str, leg1: &str, leg2: &str, cap: u32) -> Result<(), Failure> {
    let g = load_graph(graph)?;
    let new_edge = format!("{leg1}{leg2}");
    let glued = g
        .glue_legs(leg1, leg2, &new_edge)
        .map_err(|e| Failure::usage(e.to_string()))?;
    print!("{}", glued.serialize());
    let holds = glue_identity_holds(&g, leg1, leg2, &new_edge, cap)
        .map_err(|e| Failure::usage(e.to_string()))?;
    if holds {
        println!("equivalence: PASS (verified to total order {cap})");
        Ok(())
    } else {
        println!("equivalence: FAIL (total order {cap})");
        Err(Failure::verification("gluing equivalence failed"))
    }
}

fn cmd_count(graph: &str) -> Result<(), Failure> {
    let g = load_graph(graph)?;
    let counts = count_sets(&g);
    let (v, i, j) = (g.vertex_count(), g.edge_count(), g.leg_count());
    println!("graph: V={v} I={i} J={j}");
    if g.is_connected() {
        let closed_form = 1u64 << (i as i64 - v as i64 + 1).max(0);
        println!("|Omega_0| = {} (closed form 2^(I-V+1) = {})", counts.omega0, closed_form);
    } else {
        println!("|Omega_0| = {} (disconnected: no closed form)", counts.omega0);
    }
    let mut pairs = counts.pairs.clone();
    pairs.sort();
    for (a, b, n) in &pairs {
        println!("|Omega_{{{a}->{b}}}| = {n}");
    }
    Ok(())
}

fn cmd_bench(graph: &str, max2j: i32, budget: u64) -> Result<(), Failure> {
    let g = load_graph(graph)?;
    let rows = run_bench(&g, max2j, budget).map_err(|e| Failure::usage(e.to_string()))?;
    println!("{}", BenchRow::csv_header());
    for row in rows {
        println!("{}", row.to_csv());
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match &cli.cmd {
        Command::Gf { graph } => cmd_gf(graph),
        Command::Symbol {
            graph,
            assignments,
            magnetic,
            cap,
        } => cmd_symbol(graph, assignments, magnetic.as_deref(), *cap),
        Command::Check {
            graph,
            max2j,
            budget,
        } => cmd_check(graph, *max2j, *budget),
        Command::Glue {
            graph,
            leg1,
            leg2,
            cap,
        } => cmd_glue(graph, leg1, leg2, *cap),
        Command::Count { graph } => cmd_count(graph),
        Command::Bench {
            graph,
            max2j,
            budget,
            csv: _,
        } => cmd_bench(graph, *max2j, *budget),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
