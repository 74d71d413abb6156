//! Exhaustive cross-checks and benchmark sweeps over quantum assignments.
//!
//! A check sweep enumerates every assignment with all doubled momenta up to a
//! bound (legs additionally run over all valid magnetic numbers), evaluates
//! the symbol through the series expansion, the exponential-form expansion,
//! the layer sums (closed graphs) and a reference oracle, and counts
//! disagreements. All comparisons are exact.

use rayon::prelude::*;

use crate::graph::{QuantumAssignment, RecouplingGraph};
use crate::oracles::{contraction_oracle, racah_3j, racah_6j, OracleError};
use crate::symbol::{symbol_via_layer_sums, SymbolError, SymbolEvaluator};

/// Reference evaluator to check the engine against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RefOracle {
    /// single-sum vertex formula; graph must be the one-vertex three-leg graph
    ThreeJ,
    /// single-sum tetrahedral formula; graph must be the standard closed
    /// six-line graph with edges named `A..F`
    SixJ,
    /// brute-force magnetic contraction with the given term budget
    Contraction { budget: u64 },
}

#[derive(Debug, Clone, Default)]
pub struct CheckReport {
    pub cases: u64,
    pub mismatches: u64,
    /// contraction cases skipped because the budget was too small
    pub budget_exceeded: u64,
    /// first few mismatch descriptions, in enumeration order
    pub samples: Vec<String>,
    sample_keys: Vec<u64>,
}

impl CheckReport {
    fn push_sample(&mut self, idx: u64, message: String) {
        self.sample_keys.push(idx);
        self.samples.push(message);
        self.sort_samples();
    }

    // keep the first five in enumeration order so output does not depend on
    // work-stealing order
    fn sort_samples(&mut self) {
        let mut paired: Vec<(u64, String)> = self
            .sample_keys
            .drain(..)
            .zip(self.samples.drain(..))
            .collect();
        paired.sort_by_key(|(k, _)| *k);
        paired.truncate(5);
        for (k, s) in paired {
            self.sample_keys.push(k);
            self.samples.push(s);
        }
    }

    fn merge(mut self, other: CheckReport) -> CheckReport {
        self.cases += other.cases;
        self.mismatches += other.mismatches;
        self.budget_exceeded += other.budget_exceeded;
        self.sample_keys.extend(other.sample_keys);
        self.samples.extend(other.samples);
        self.sort_samples();
        self
    }
}

/// Per-line option table for the assignment odometer: the line name and its
/// `(2j, optional 2m)` choices.
type LineOptions = (String, Vec<(i32, Option<i32>)>);

fn assignment_dims(g: &RecouplingGraph, max_tj: i32) -> Vec<LineOptions> {
    let mut dims = Vec::new();
    for e in g.edges() {
        let opts: Vec<(i32, Option<i32>)> = (0..=max_tj).map(|tj| (tj, None)).collect();
        dims.push((e.name.clone(), opts));
    }
    for l in g.legs() {
        let mut opts = Vec::new();
        for tj in 0..=max_tj {
            let mut tm = -tj;
            while tm <= tj {
                opts.push((tj, Some(tm)));
                tm += 2;
            }
        }
        dims.push((l.name.clone(), opts));
    }
    dims
}

fn decode_assignment(g: &RecouplingGraph, dims: &[LineOptions], mut index: u64) -> QuantumAssignment {
    let mut entries = Vec::with_capacity(dims.len());
    for (name, opts) in dims {
        let k = (index % opts.len() as u64) as usize;
        index /= opts.len() as u64;
        let (tj, tm) = opts[k];
        entries.push((name.clone(), tj, tm));
    }
    QuantumAssignment::new(g, &entries).expect("enumerated assignments are valid")
}

/// Number of assignments a sweep of the graph visits at the given bound.
pub fn sweep_size(g: &RecouplingGraph, max_tj: i32) -> u64 {
    assignment_dims(g, max_tj)
        .iter()
        .map(|(_, o)| o.len() as u64)
        .product()
}

fn oracle_value(
    g: &RecouplingGraph,
    q: &QuantumAssignment,
    oracle: RefOracle,
) -> Result<crate::arith::RootRational, OracleError> {
    match oracle {
        RefOracle::ThreeJ => {
            debug_assert_eq!((g.vertex_count(), g.leg_count()), (1, 3));
            let lines = g.vertex_lines(0);
            let leg_of = |i: usize| match lines[i] {
                crate::graph::LineRef::Leg(l) => l,
                crate::graph::LineRef::Edge(_) => unreachable!("three-leg vertex"),
            };
            let tj = [0, 1, 2].map(|i| q.leg_tj[leg_of(i)]);
            let tm = [0, 1, 2].map(|i| q.leg_tm[leg_of(i)]);
            Ok(racah_3j(tj, tm))
        }
        RefOracle::SixJ => {
            let tj = ["A", "B", "C", "D", "E", "F"].map(|n| {
                let e = g.edge_index(n).expect("standard six-line graph");
                q.edge_tj[e]
            });
            Ok(racah_6j(tj))
        }
        RefOracle::Contraction { budget } => contraction_oracle(g, q, budget),
    }
}

/// Runs the full cross-check sweep. Every case compares the series value,
/// the exponential-form value, the reference oracle, and (closed graphs) the
/// layer sums; any disagreement is a mismatch.
pub fn run_check(
    g: &RecouplingGraph,
    max_tj: i32,
    oracle: RefOracle,
) -> Result<CheckReport, SymbolError> {
    let evaluator = SymbolEvaluator::new(g, max_tj as u32)?;
    let dims = assignment_dims(g, max_tj);
    let total: u64 = dims.iter().map(|(_, o)| o.len() as u64).product();
    let closed = g.leg_count() == 0;

    let report = (0..total)
        .into_par_iter()
        .fold(CheckReport::default, |mut rep, idx| {
            let q = decode_assignment(g, &dims, idx);
            rep.cases += 1;
            let v5 = evaluator.value(&q).expect("caps cover the sweep");
            let v6 = evaluator
                .value_exp_form(&q)
                .expect("caps cover the sweep");
            let mut bad = Vec::new();
            if v5.value != v6.value {
                bad.push(format!("exp-form {} != {}", v6.value, v5.value));
            }
            match oracle_value(g, &q, oracle) {
                Ok(reference) => {
                    if reference != v5.value {
                        bad.push(format!("oracle {} != {}", reference, v5.value));
                    }
                }
                Err(OracleError::BudgetExceeded { .. }) => rep.budget_exceeded += 1,
            }
            if closed {
                let layered = symbol_via_layer_sums(g, &q).expect("graph is closed");
                if layered.value.value != v5.value {
                    bad.push(format!("layers {} != {}", layered.value.value, v5.value));
                }
            }
            if !bad.is_empty() {
                rep.mismatches += 1;
                rep.push_sample(idx, format!("case #{idx}: {}", bad.join("; ")));
            }
            rep
        })
        .reduce(CheckReport::default, CheckReport::merge);
    Ok(report)
}

/// One benchmark measurement.
#[derive(Debug, Clone)]
pub struct BenchRow {
    pub evaluator: &'static str,
    pub max_tj: i32,
    pub cases: u64,
    pub wall_ms: u128,
    /// peak work size: series terms, layer stackings, or magnetic terms
    pub terms: u64,
}

impl BenchRow {
    pub fn csv_header() -> &'static str {
        "evaluator,max2j,cases,wall_ms,terms"
    }

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.evaluator, self.max_tj, self.cases, self.wall_ms, self.terms
        )
    }
}

/// Upper bound on the assignments timed per evaluator and size; larger
/// sweeps are benchmarked on an evenly strided deterministic sample.
pub const BENCH_CASE_CAP: u64 = 4096;

/// Times the three evaluators at every bound up to `max_tj`, each over at
/// most [`BENCH_CASE_CAP`] assignments spread evenly through the sweep.
/// Contraction cases beyond the budget are skipped (they do not count as
/// cases); layer sums only run on closed graphs.
pub fn run_bench(g: &RecouplingGraph, max_tj: i32, budget: u64) -> Result<Vec<BenchRow>, SymbolError> {
    let mut rows = Vec::new();
    let closed = g.leg_count() == 0;
    for bound in 1..=max_tj {
        let dims = assignment_dims(g, bound);
        let full: u64 = dims.iter().map(|(_, o)| o.len() as u64).product();
        let total = full.min(BENCH_CASE_CAP);
        let stride = (full / total).max(1);
        let sample = |k: u64| (k * stride).min(full - 1);

        let t0 = std::time::Instant::now();
        let evaluator = SymbolEvaluator::new(g, bound as u32)?;
        for k in 0..total {
            let q = decode_assignment(g, &dims, sample(k));
            let _ = evaluator.value(&q)?;
        }
        rows.push(BenchRow {
            evaluator: "series",
            max_tj: bound,
            cases: total,
            wall_ms: t0.elapsed().as_millis(),
            terms: evaluator.series_terms() as u64,
        });

        if closed {
            let t0 = std::time::Instant::now();
            let mut peak = 0u64;
            for k in 0..total {
                let q = decode_assignment(g, &dims, sample(k));
                let layered = symbol_via_layer_sums(g, &q)?;
                peak = peak.max(layered.solutions);
            }
            rows.push(BenchRow {
                evaluator: "layers",
                max_tj: bound,
                cases: total,
                wall_ms: t0.elapsed().as_millis(),
                terms: peak,
            });
        }

        let t0 = std::time::Instant::now();
        let mut cases = 0u64;
        let mut peak = 0u64;
        for k in 0..total {
            let q = decode_assignment(g, &dims, sample(k));
            match contraction_oracle(g, &q, budget) {
                Ok(_) => {
                    cases += 1;
                    peak = peak.max(contraction_cost(g, &q).min(u64::MAX as u128) as u64);
                }
                Err(OracleError::BudgetExceeded { .. }) => {}
            }
        }
        rows.push(BenchRow {
            evaluator: "contraction",
            max_tj: bound,
            cases,
            wall_ms: t0.elapsed().as_millis(),
            terms: peak,
        });
    }
    Ok(rows)
}

/// Product of the free magnetic ranges the contraction oracle would enumerate.
pub fn contraction_cost(g: &RecouplingGraph, q: &QuantumAssignment) -> u128 {
    // replicate the plan construction cheaply: greedily solve vertices with
    // one open incident edge, multiply the ranges of the rest
    use crate::graph::Attachment;
    let ne = g.edge_count();
    let mut determined = vec![false; ne];
    let mut cost: u128 = 1;
    let coefficient = |v: usize, e: usize| -> i32 {
        let mut c = 0;
        for &h in &g.vertex_halves(v) {
            if let Attachment::EdgeEnd(idx, is_tail) = g.attachment(h) {
                if idx == e {
                    c += if is_tail { 1 } else { -1 };
                }
            }
        }
        c
    };
    while determined.iter().any(|d| !d) {
        let mut solved = false;
        for v in 0..g.vertex_count() {
            let mut open = Vec::new();
            for &h in &g.vertex_halves(v) {
                if let Attachment::EdgeEnd(e, _) = g.attachment(h) {
                    if !determined[e] && coefficient(v, e) != 0 && !open.contains(&e) {
                        open.push(e);
                    }
                }
            }
            if open.len() == 1 {
                determined[open[0]] = true;
                solved = true;
            }
        }
        if !solved {
            let e = determined.iter().position(|d| !d).expect("edge remains");
            determined[e] = true;
            cost = cost.saturating_mul((q.edge_tj[e] + 1) as u128);
        }
    }
    cost
}
