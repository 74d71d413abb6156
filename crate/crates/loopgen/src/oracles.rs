//! Independent reference evaluators.
//!
//! Two classical single-sum formulas (for the three-leg vertex symbol and the
//! tetrahedral closed symbol) plus a brute-force contraction oracle that
//! evaluates any graph by summing products of vertex symbols over internal
//! magnetic numbers, joined by the oriented metric
//! `(-1)^(a + m_tail) delta(m_tail, -m_head)`. Everything here is exact and
//! shares no code with the series pipeline it cross-checks, beyond the basic
//! number tower.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::{delta, factorial, parity_sign, sqrt_factorial_ratio, triangle_ok, RootRational};
use crate::graph::{Attachment, QuantumAssignment, RecouplingGraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("contraction needs {needed} magnetic terms, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
}

fn fact_inv(n: i32) -> Option<BigRational> {
    if n < 0 {
        return None;
    }
    Some(BigRational::new(BigInt::one(), factorial(n as u64)))
}

/// Selection rules of the vertex symbol: magnetic ranges, parities, zero
/// magnetic sum and the triangle condition.
fn three_j_allowed(tj: [i32; 3], tm: [i32; 3]) -> bool {
    tm.iter().zip(tj.iter()).all(|(m, j)| m.abs() <= *j)
        && tm.iter().zip(tj.iter()).all(|(m, j)| (m + j) % 2 == 0)
        && tm.iter().sum::<i32>() == 0
        && triangle_ok(tj[0], tj[1], tj[2])
}

/// Single-sum formula for the three-leg vertex symbol, on doubled arguments.
/// Selection-rule failures give an exact zero.
pub fn racah_3j(tj: [i32; 3], tm: [i32; 3]) -> RootRational {
    if !three_j_allowed(tj, tm) {
        return RootRational::zero();
    }
    let [ta, tb, tc] = tj;
    let [tal, tbe, tga] = tm;
    // integer combinations (parities guaranteed by the selection rules)
    let abc = (ta + tb - tc) / 2;
    let a_al = (ta - tal) / 2;
    let b_be = (tb + tbe) / 2;
    let cb_al = (tc - tb + tal) / 2;
    let ca_be = (tc - ta - tbe) / 2;
    let phase_base = (ta - tb - tga) / 2;

    let z_min = 0.max(-cb_al).max(-ca_be);
    let z_max = abc.min(a_al).min(b_be);
    let mut sum = BigRational::zero();
    for z in z_min..=z_max {
        let denom = [abc - z, a_al - z, b_be - z, cb_al + z, ca_be + z, z];
        let mut term = BigRational::one();
        let mut ok = true;
        for d in denom {
            match fact_inv(d) {
                Some(f) => term *= f,
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        let sign = parity_sign((z + phase_base) as i64);
        sum += term * BigRational::from_integer(BigInt::from(sign));
    }
    let norm = sqrt_factorial_ratio(
        &[
            ((ta + tal) / 2) as u64,
            ((ta - tal) / 2) as u64,
            ((tb + tbe) / 2) as u64,
            ((tb - tbe) / 2) as u64,
            ((tc + tga) / 2) as u64,
            ((tc - tga) / 2) as u64,
        ],
        &[],
    );
    delta(ta, tb, tc)
        .expect("triangle checked")
        .mul(&norm)
        .scale(&sum)
}

/// Single-sum formula for the tetrahedral closed symbol `{a b c; d e f}`, on
/// doubled arguments. Any failed triangle among `(a,b,c), (a,e,f), (b,d,f),
/// (c,d,e)` gives zero.
pub fn racah_6j(tj: [i32; 6]) -> RootRational {
    let [ta, tb, tc, td, te, tf] = tj;
    let triples = [(ta, tb, tc), (ta, te, tf), (tb, td, tf), (tc, td, te)];
    if triples.iter().any(|&(x, y, z)| !triangle_ok(x, y, z)) {
        return RootRational::zero();
    }
    let mut deltas = RootRational::one();
    for &(x, y, z) in &triples {
        deltas = deltas.mul(&delta(x, y, z).expect("triangle checked"));
    }
    let abc = (ta + tb + tc) / 2;
    let aef = (ta + te + tf) / 2;
    let bdf = (tb + td + tf) / 2;
    let cde = (tc + td + te) / 2;
    let abde = (ta + tb + td + te) / 2;
    let bcef = (tb + tc + te + tf) / 2;
    let acdf = (ta + tc + td + tf) / 2;
    let z_min = abc.max(aef).max(bdf).max(cde);
    let z_max = abde.min(bcef).min(acdf);
    let mut sum = BigRational::zero();
    for z in z_min..=z_max {
        let denom = [
            z - abc,
            z - aef,
            z - bdf,
            z - cde,
            abde - z,
            bcef - z,
            acdf - z,
        ];
        let mut term = BigRational::from_integer(factorial((z + 1) as u64));
        let mut ok = true;
        for d in denom {
            match fact_inv(d) {
                Some(f) => term *= f,
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        sum += term * BigRational::from_integer(BigInt::from(parity_sign(z as i64)));
    }
    deltas.scale(&sum)
}

/// One step of the magnetic-sum evaluation plan.
#[derive(Debug, Clone, Copy)]
enum PlanStep {
    /// iterate this edge's magnetic number over its full range
    Free { edge: usize },
    /// this vertex has exactly one undetermined incident edge left: solve it
    Solve { edge: usize, vertex: usize },
}

/// Signed coefficient of edge `e`'s magnetic number in vertex `v`'s
/// constraint: `+1` per tail half at `v`, `-1` per head half. A self-loop
/// contributes zero.
fn edge_coefficient(g: &RecouplingGraph, v: usize, e: usize) -> i32 {
    let mut c = 0;
    for &h in &g.vertex_halves(v) {
        if let Attachment::EdgeEnd(idx, is_tail) = g.attachment(h) {
            if idx == e {
                c += if is_tail { 1 } else { -1 };
            }
        }
    }
    c
}

/// Brute-force evaluation of a symbol by contracting one vertex symbol per
/// vertex over all internal magnetic numbers.
///
/// Vertex constraints eliminate all but a loop-rank's worth of magnetic sums:
/// the plan greedily solves any vertex with a single undetermined incident
/// edge, and only the remaining edges are enumerated. The budget bounds the
/// product of the enumerated ranges.
pub fn contraction_oracle(
    g: &RecouplingGraph,
    q: &QuantumAssignment,
    budget: u64,
) -> Result<RootRational, OracleError> {
    // vanishing shortcut shared with every other evaluator
    for v in 0..g.vertex_count() {
        let [x, y, z] = g.vertex_lines(v).map(|l| q.line_tj(l));
        if !triangle_ok(x, y, z) {
            return Ok(RootRational::zero());
        }
    }

    // build the elimination plan
    let ne = g.edge_count();
    let mut determined = vec![false; ne];
    let mut plan = Vec::with_capacity(ne);
    let mut needed: u128 = 1;
    while determined.iter().any(|d| !d) {
        let mut solved_one = false;
        for v in 0..g.vertex_count() {
            let mut open = Vec::new();
            for &h in &g.vertex_halves(v) {
                if let Attachment::EdgeEnd(e, _) = g.attachment(h) {
                    if !determined[e] && edge_coefficient(g, v, e) != 0 && !open.contains(&e) {
                        open.push(e);
                    }
                }
            }
            if open.len() == 1 {
                let e = open[0];
                plan.push(PlanStep::Solve { edge: e, vertex: v });
                determined[e] = true;
                solved_one = true;
            }
        }
        if !solved_one {
            let e = determined
                .iter()
                .position(|d| !d)
                .expect("an undetermined edge remains");
            plan.push(PlanStep::Free { edge: e });
            determined[e] = true;
            needed = needed.saturating_mul((q.edge_tj[e] + 1) as u128);
        }
    }
    if needed > budget as u128 {
        return Err(OracleError::BudgetExceeded { needed, budget });
    }

    let mut cache: HashMap<([i32; 3], [i32; 3]), RootRational> = HashMap::new();
    let mut tm = vec![0i32; ne];
    let mut acc = RootRational::zero();
    walk_plan(g, q, &plan, 0, &mut tm, &mut cache, &mut acc);
    Ok(acc)
}

/// Magnetic number carried by a half-edge under the current edge assignment:
/// tail halves carry `+tm`, head halves `-tm`, legs their fixed value.
fn half_tm(
    g: &RecouplingGraph,
    q: &QuantumAssignment,
    tm: &[i32],
    h: crate::graph::HalfEdge,
) -> i32 {
    match g.attachment(h) {
        Attachment::EdgeEnd(e, true) => tm[e],
        Attachment::EdgeEnd(e, false) => -tm[e],
        Attachment::Leg(l) => q.leg_tm[l],
    }
}

fn walk_plan(
    g: &RecouplingGraph,
    q: &QuantumAssignment,
    plan: &[PlanStep],
    step: usize,
    tm: &mut Vec<i32>,
    cache: &mut HashMap<([i32; 3], [i32; 3]), RootRational>,
    acc: &mut RootRational,
) {
    if step == plan.len() {
        add_term(g, q, tm, cache, acc);
        return;
    }
    match plan[step] {
        PlanStep::Free { edge } => {
            let tj = q.edge_tj[edge];
            let mut m = -tj;
            while m <= tj {
                tm[edge] = m;
                walk_plan(g, q, plan, step + 1, tm, cache, acc);
                m += 2;
            }
        }
        PlanStep::Solve { edge, vertex } => {
            let coeff = edge_coefficient(g, vertex, edge);
            debug_assert!(coeff.abs() == 1, "solvable edge has unit coefficient");
            let mut rest = 0;
            for &h in &g.vertex_halves(vertex) {
                match g.attachment(h) {
                    Attachment::EdgeEnd(e, _) if e == edge => {}
                    _ => rest += half_tm(g, q, tm, h),
                }
            }
            let value = -rest * coeff;
            let tj = q.edge_tj[edge];
            if value.abs() > tj || (value - tj) % 2 != 0 {
                return; // out of range: the delta chain kills this branch
            }
            tm[edge] = value;
            walk_plan(g, q, plan, step + 1, tm, cache, acc);
        }
    }
}

fn add_term(
    g: &RecouplingGraph,
    q: &QuantumAssignment,
    tm: &[i32],
    cache: &mut HashMap<([i32; 3], [i32; 3]), RootRational>,
    acc: &mut RootRational,
) {
    // every vertex constraint must hold (solved ones do by construction)
    for v in 0..g.vertex_count() {
        let sum: i32 = g
            .vertex_halves(v)
            .iter()
            .map(|&h| half_tm(g, q, tm, h))
            .sum();
        if sum != 0 {
            return;
        }
    }
    let mut term = RootRational::one();
    for v in 0..g.vertex_count() {
        let halves = g.vertex_halves(v);
        let tj = halves.map(|h| q.line_tj(g.line_of(h)));
        let tms = halves.map(|h| half_tm(g, q, tm, h));
        let value = cache
            .entry((tj, tms))
            .or_insert_with(|| racah_3j(tj, tms))
            .clone();
        if value.is_zero() {
            return;
        }
        term = term.mul(&value);
    }
    for (tj_e, tm_e) in q.edge_tj.iter().zip(tm.iter()) {
        if parity_sign(((tj_e + tm_e) / 2) as i64) < 0 {
            term = term.neg();
        }
    }
    *acc = acc
        .add(&term)
        .expect("contraction terms share one radicand");
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{five_j, single_vertex, three_j};
    use num_bigint::BigUint;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn racah_3j_basics() {
        assert_eq!(racah_3j([0, 0, 0], [0, 0, 0]), RootRational::one());
        // (1,1,0;0,0,0) = -sqrt(1/3) = -(1/3) sqrt(3)
        let v = racah_3j([2, 2, 0], [0, 0, 0]);
        assert_eq!(v, RootRational::new(rat(-1, 3), BigUint::from(3u32)));
        // magnetic sum violation
        assert!(racah_3j([2, 2, 2], [2, 0, 0]).is_zero());
        // triangle violation
        assert!(racah_3j([2, 0, 0], [0, 0, 0]).is_zero());
    }

    #[test]
    fn racah_3j_column_permutation_sign() {
        // odd permutations multiply by (-1)^(a+b+c)
        let tj = [2, 4, 4];
        let tm = [2, -2, 0];
        let v = racah_3j(tj, tm);
        assert!(!v.is_zero());
        let swapped = racah_3j([4, 2, 4], [-2, 2, 0]);
        let s = parity_sign(((tj[0] + tj[1] + tj[2]) / 2) as i64);
        assert_eq!(swapped, if s < 0 { v.neg() } else { v.clone() });
        // cyclic (even) permutations leave it unchanged
        let cycled = racah_3j([4, 4, 2], [-2, 0, 2]);
        assert_eq!(cycled, v);
    }

    #[test]
    fn racah_6j_basics() {
        assert_eq!(racah_6j([0; 6]), RootRational::one());
        // {1 1 1; 1 1 1} = 1/6 (doubled: all 2)
        let v = racah_6j([2; 6]);
        assert_eq!(v, RootRational::from_rational(rat(1, 6)));
        // triangle violation in (a,b,c)
        assert!(racah_6j([2, 0, 0, 2, 2, 2]).is_zero());
    }

    #[test]
    fn contraction_reduces_to_vertex_symbol() {
        // a single vertex has no internal edges: the contraction is the
        // vertex symbol itself
        let g = three_j();
        let q = QuantumAssignment::new(
            &g,
            &[
                ("A".to_string(), 2, Some(0)),
                ("B".to_string(), 2, Some(0)),
                ("C".to_string(), 0, Some(0)),
            ],
        )
        .unwrap();
        let v = contraction_oracle(&g, &q, 1_000).unwrap();
        assert_eq!(v, racah_3j([2, 2, 0], [0, 0, 0]));
    }

    #[test]
    fn five_j_contraction_matches_glued_pair() {
        // the two-vertex graph contracts two vertex symbols through the metric
        let g = five_j();
        let q = QuantumAssignment::new(
            &g,
            &[
                ("A".to_string(), 2, None),
                ("B".to_string(), 2, Some(2)),
                ("C".to_string(), 2, Some(-2)),
                ("D".to_string(), 2, Some(2)),
                ("E".to_string(), 2, Some(-2)),
            ],
        )
        .unwrap();
        let via_oracle = contraction_oracle(&g, &q, 1_000).unwrap();
        let mut direct = RootRational::zero();
        let mut tal = -2;
        while tal <= 2 {
            let left = racah_3j([2, 2, 2], [tal, 2, -2]);
            let right = racah_3j([2, 2, 2], [-tal, 2, -2]);
            let sign = parity_sign(((2 + tal) / 2) as i64);
            let mut t = left.mul(&right);
            if sign < 0 {
                t = t.neg();
            }
            direct = direct.add(&t).unwrap();
            tal += 2;
        }
        assert_eq!(via_oracle, direct);
        assert!(!via_oracle.is_zero());
    }

    #[test]
    fn budget_enforced() {
        let g = single_vertex(["P", "Q", "R"])
            .glue_legs("P", "Q", "S")
            .unwrap();
        // the self-loop edge is a free magnetic sum
        let q = QuantumAssignment::new(
            &g,
            &[("S".to_string(), 4, None), ("R".to_string(), 0, Some(0))],
        )
        .unwrap();
        assert!(matches!(
            contraction_oracle(&g, &q, 2),
            Err(OracleError::BudgetExceeded { .. })
        ));
        assert!(contraction_oracle(&g, &q, 100).is_ok());
    }
}
