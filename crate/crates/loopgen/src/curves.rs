//! Enumeration of non-overlapping curve sets and their signed products.
//!
//! A curve set is a collection of pairwise line-disjoint walks: closed loops
//! plus (for the open family) a single open curve running from one external
//! leg to another. Because every vertex is trivalent, an admissible set is
//! the same thing as a subset of lines in which every vertex has degree 0 or
//! 2, and the decomposition of such a subset into walks is unique.
//!
//! The product `P` of a set multiplies the variables of all traversed lines
//! and carries a sign: minus for each internal edge traversed against its
//! arrow, minus for each clockwise vertex passage, and one overall minus per
//! connected component. The open curve contributes its start leg unbared and
//! its end leg bared.

use thiserror::Error;

use crate::graph::{HalfEdge, LineRef, RecouplingGraph};
use crate::poly::{Monomial, MultilinearPolynomial, Var};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("open curve endpoints must differ")]
    IdenticalLegs,
    #[error("no such leg: {0}")]
    NoSuchLeg(String),
    #[error("invalid walk: {0}")]
    InvalidWalk(String),
}

/// One traversal step of a walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    /// Enter the graph from the free end of a leg.
    EnterLeg(usize),
    /// Traverse an internal edge starting at half-edge `from`.
    Edge { edge: usize, from: HalfEdge },
    /// Leave the graph through the free end of a leg.
    ExitLeg(usize),
}

/// A walk: a closed loop (edge steps only) or an open curve
/// (`EnterLeg`, edge steps, `ExitLeg`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Walk {
    pub steps: Vec<Step>,
}

impl Walk {
    pub fn is_open(&self) -> bool {
        matches!(self.steps.first(), Some(Step::EnterLeg(_)))
    }
}

/// A set of line-disjoint walks: closed loops and at most one open curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveSet {
    pub closed_loops: Vec<Walk>,
    pub open_curve: Option<Walk>,
}

impl CurveSet {
    pub fn empty() -> Self {
        CurveSet {
            closed_loops: Vec::new(),
            open_curve: None,
        }
    }

    pub fn components(&self) -> usize {
        self.closed_loops.len() + usize::from(self.open_curve.is_some())
    }

    pub fn walks(&self) -> impl Iterator<Item = &Walk> {
        self.closed_loops.iter().chain(self.open_curve.iter())
    }
}

fn check_half(g: &RecouplingGraph, h: HalfEdge) -> Result<(), CurveError> {
    if h.0 >= g.half_count() {
        return Err(CurveError::InvalidWalk(format!(
            "half-edge #{} is not in the graph",
            h.0
        )));
    }
    Ok(())
}

/// Sign of a vertex passage entering on `arrive` and leaving on `depart`:
/// `+1` for counter-clockwise (depart is the ccw successor of arrive),
/// `-1` for clockwise.
fn passage_sign(g: &RecouplingGraph, arrive: HalfEdge, depart: HalfEdge) -> i32 {
    let succ = g.ccw_successor(arrive);
    if succ == depart {
        1
    } else {
        debug_assert_eq!(
            g.ccw_successor(succ),
            depart,
            "passage must use two distinct half-edges of one vertex"
        );
        -1
    }
}

fn arrival_half(g: &RecouplingGraph, step: &Step) -> Result<Option<HalfEdge>, CurveError> {
    Ok(match *step {
        Step::EnterLeg(l) => Some(
            g.legs()
                .get(l)
                .ok_or_else(|| CurveError::InvalidWalk(format!("no leg #{l}")))?
                .half,
        ),
        Step::Edge { edge, from } => {
            let e = g
                .edges()
                .get(edge)
                .ok_or_else(|| CurveError::InvalidWalk(format!("no edge #{edge}")))?;
            check_half(g, from)?;
            if from != e.tail && from != e.head {
                return Err(CurveError::InvalidWalk(format!(
                    "half-edge {} does not belong to edge {}",
                    g.half_name(from),
                    e.name
                )));
            }
            Some(if from == e.tail { e.head } else { e.tail })
        }
        Step::ExitLeg(_) => None,
    })
}

fn departure_half(g: &RecouplingGraph, step: &Step) -> Result<Option<HalfEdge>, CurveError> {
    Ok(match *step {
        Step::EnterLeg(_) => None,
        Step::Edge { from, .. } => {
            check_half(g, from)?;
            Some(from)
        }
        Step::ExitLeg(l) => Some(
            g.legs()
                .get(l)
                .ok_or_else(|| CurveError::InvalidWalk(format!("no leg #{l}")))?
                .half,
        ),
    })
}

/// Sign of a single walk, including its own component factor of `-1`.
///
/// Rules: `-1` per internal edge traversed against its arrow, `-1` per
/// clockwise vertex passage, `-1` overall.
pub fn walk_sign(g: &RecouplingGraph, walk: &Walk) -> Result<i32, CurveError> {
    if walk.steps.is_empty() {
        return Err(CurveError::InvalidWalk("empty walk".to_string()));
    }
    let mut sign = -1; // component factor
    for step in &walk.steps {
        if let Step::Edge { edge, from } = *step {
            let e = g
                .edges()
                .get(edge)
                .ok_or_else(|| CurveError::InvalidWalk(format!("no edge #{edge}")))?;
            check_half(g, from)?;
            if from == e.head {
                sign = -sign; // against the arrow
            }
        }
    }
    let open = walk.is_open();
    let n = walk.steps.len();
    let pairs = if open { n - 1 } else { n };
    for k in 0..pairs {
        let arr = arrival_half(g, &walk.steps[k])?
            .ok_or_else(|| CurveError::InvalidWalk("exit step mid-walk".to_string()))?;
        let dep = departure_half(g, &walk.steps[(k + 1) % n])?
            .ok_or_else(|| CurveError::InvalidWalk("enter step mid-walk".to_string()))?;
        if arr == dep || g.vertex_of(arr) != g.vertex_of(dep) {
            return Err(CurveError::InvalidWalk(
                "consecutive steps must use two distinct half-edges of one vertex".to_string(),
            ));
        }
        sign *= passage_sign(g, arr, dep);
    }
    Ok(sign)
}

/// Product sign over all components of the set.
pub fn set_sign(g: &RecouplingGraph, set: &CurveSet) -> Result<i32, CurveError> {
    let mut sign = 1;
    for w in set.walks() {
        sign *= walk_sign(g, w)?;
    }
    Ok(sign)
}

/// The variables traversed by a set: internal edges unbared, the open curve's
/// start leg unbared and end leg bared.
pub fn set_monomial(g: &RecouplingGraph, set: &CurveSet) -> Monomial {
    let mut vars = Vec::new();
    for w in set.walks() {
        for step in &w.steps {
            match *step {
                Step::EnterLeg(l) => vars.push(Var::line(&g.legs()[l].name)),
                Step::ExitLeg(l) => vars.push(Var::bar(&g.legs()[l].name)),
                Step::Edge { edge, .. } => vars.push(Var::line(&g.edges()[edge].name)),
            }
        }
    }
    Monomial::new(vars)
}

/// Enumerates admissible line subsets and decomposes each into walks.
///
/// `required_legs` is empty for closed-loop sets, or `[start, end]` for the
/// open family; no other leg may be used. Depth-first search over internal
/// edges with the vertex-degree constraint (every vertex ends at degree 0 or
/// 2), pruning as soon as a vertex exceeds degree 2.
fn enumerate_sets(g: &RecouplingGraph, required_legs: &[usize]) -> Vec<CurveSet> {
    let nv = g.vertex_count();
    let ne = g.edge_count();
    let mut deg = vec![0u8; nv];
    for &l in required_legs {
        deg[g.vertex_of(g.legs()[l].half)] += 1;
    }
    // remaining[v] after deciding edges [0, k): how many half-edges at v belong
    // to edges with index >= k
    let mut remaining = vec![0u32; nv];
    for e in g.edges() {
        remaining[g.vertex_of(e.tail)] += 1;
        remaining[g.vertex_of(e.head)] += 1;
    }
    let mut chosen = vec![false; ne];
    let mut out = Vec::new();
    dfs(
        g,
        0,
        &mut deg,
        &mut remaining,
        &mut chosen,
        required_legs,
        &mut out,
    );
    out.sort_by_key(|s| set_monomial(g, s));
    return out;

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        g: &RecouplingGraph,
        k: usize,
        deg: &mut [u8],
        remaining: &mut [u32],
        chosen: &mut [bool],
        required_legs: &[usize],
        out: &mut Vec<CurveSet>,
    ) {
        if k == g.edge_count() {
            if deg.iter().all(|&d| d == 0 || d == 2) {
                out.push(decompose(g, chosen, required_legs));
            }
            return;
        }
        fn viable(deg: &[u8], remaining: &[u32], v: usize) -> bool {
            deg[v] <= 2 && !(remaining[v] == 0 && deg[v] == 1)
        }

        let e = &g.edges()[k];
        let (vt, vh) = (g.vertex_of(e.tail), g.vertex_of(e.head));
        remaining[vt] -= 1;
        remaining[vh] -= 1;

        // skip this edge, unless that strands an odd vertex
        if viable(deg, remaining, vt) && viable(deg, remaining, vh) {
            dfs(g, k + 1, deg, remaining, chosen, required_legs, out);
        }

        // take this edge
        deg[vt] += 1;
        deg[vh] += 1;
        if viable(deg, remaining, vt) && viable(deg, remaining, vh) {
            chosen[k] = true;
            dfs(g, k + 1, deg, remaining, chosen, required_legs, out);
            chosen[k] = false;
        }
        deg[vt] -= 1;
        deg[vh] -= 1;
        remaining[vt] += 1;
        remaining[vh] += 1;
    }
}

/// Unique walk decomposition of an admissible subset.
fn decompose(g: &RecouplingGraph, chosen: &[bool], required_legs: &[usize]) -> CurveSet {
    let nv = g.vertex_count();
    // present half-edges per vertex
    let mut present: Vec<Vec<HalfEdge>> = vec![Vec::new(); nv];
    for (e, edge) in g.edges().iter().enumerate() {
        if chosen[e] {
            present[g.vertex_of(edge.tail)].push(edge.tail);
            present[g.vertex_of(edge.head)].push(edge.head);
        }
    }
    for &l in required_legs {
        let h = g.legs()[l].half;
        present[g.vertex_of(h)].push(h);
    }
    let mut consumed = vec![false; g.edge_count()];

    let other_at = |present: &[Vec<HalfEdge>], v: usize, not: HalfEdge| -> HalfEdge {
        let slot = &present[v];
        debug_assert_eq!(slot.len(), 2, "admissible vertex has degree 0 or 2");
        if slot[0] == not {
            slot[1]
        } else {
            slot[0]
        }
    };

    let open_curve = if required_legs.is_empty() {
        None
    } else {
        let (start, end) = (required_legs[0], required_legs[1]);
        let mut steps = vec![Step::EnterLeg(start)];
        let mut cur = g.legs()[start].half;
        loop {
            let v = g.vertex_of(cur);
            let dep = other_at(&present, v, cur);
            match g.line_of(dep) {
                LineRef::Leg(l) => {
                    debug_assert_eq!(l, end, "open curve must end at the required leg");
                    steps.push(Step::ExitLeg(l));
                    break;
                }
                LineRef::Edge(e) => {
                    steps.push(Step::Edge { edge: e, from: dep });
                    consumed[e] = true;
                    cur = g.opposite_half(dep).expect("edge half has an opposite");
                }
            }
        }
        Some(Walk { steps })
    };

    let mut closed_loops = Vec::new();
    loop {
        // canonical loop start: the least unconsumed chosen half-edge
        let start = g
            .edges()
            .iter()
            .enumerate()
            .filter(|(e, _)| chosen[*e] && !consumed[*e])
            .flat_map(|(_, edge)| [edge.tail, edge.head])
            .min();
        let Some(start) = start else { break };
        let e0 = match g.line_of(start) {
            LineRef::Edge(e) => e,
            LineRef::Leg(_) => unreachable!("loop start is an edge half"),
        };
        let mut steps = vec![Step::Edge {
            edge: e0,
            from: start,
        }];
        consumed[e0] = true;
        let mut cur = g.opposite_half(start).expect("edge half has an opposite");
        loop {
            let v = g.vertex_of(cur);
            let dep = other_at(&present, v, cur);
            let e = match g.line_of(dep) {
                LineRef::Edge(e) => e,
                LineRef::Leg(_) => unreachable!("closed loop can only use edges"),
            };
            if consumed[e] {
                debug_assert_eq!(dep, start, "loop closes at its starting half");
                break;
            }
            steps.push(Step::Edge { edge: e, from: dep });
            consumed[e] = true;
            cur = g.opposite_half(dep).expect("edge half has an opposite");
        }
        closed_loops.push(Walk { steps });
    }

    CurveSet {
        closed_loops,
        open_curve,
    }
}

/// All non-overlapping sets of closed loops, including the empty set.
pub fn loop_sets(g: &RecouplingGraph) -> Vec<CurveSet> {
    enumerate_sets(g, &[])
}

/// All non-overlapping sets consisting of one open curve from `from_leg` to
/// `to_leg` plus closed loops.
pub fn curve_sets(
    g: &RecouplingGraph,
    from_leg: &str,
    to_leg: &str,
) -> Result<Vec<CurveSet>, CurveError> {
    if from_leg == to_leg {
        return Err(CurveError::IdenticalLegs);
    }
    let i = g
        .leg_index(from_leg)
        .map_err(|_| CurveError::NoSuchLeg(from_leg.to_string()))?;
    let j = g
        .leg_index(to_leg)
        .map_err(|_| CurveError::NoSuchLeg(to_leg.to_string()))?;
    Ok(enumerate_sets(g, &[i, j]))
}

fn polynomial_of_sets(g: &RecouplingGraph, sets: &[CurveSet]) -> MultilinearPolynomial {
    let mut p = MultilinearPolynomial::zero();
    for s in sets {
        let sign = set_sign(g, s).expect("enumerated sets are valid");
        p.add_term(set_monomial(g, s), sign as i64);
    }
    p
}

/// `sum over closed-loop sets of P`; the empty set contributes the constant 1.
pub fn loop_polynomial(g: &RecouplingGraph) -> MultilinearPolynomial {
    polynomial_of_sets(g, &loop_sets(g))
}

/// `sum over open sets from leg i to leg j of P`; every monomial carries the
/// start leg unbared and the end leg bared.
pub fn curve_polynomial(
    g: &RecouplingGraph,
    from_leg: &str,
    to_leg: &str,
) -> Result<MultilinearPolynomial, CurveError> {
    Ok(polynomial_of_sets(g, &curve_sets(g, from_leg, to_leg)?))
}

/// Enumerated set counts for a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetCounts {
    pub omega0: u64,
    /// `(from leg, to leg, count)` over all ordered leg pairs
    pub pairs: Vec<(String, String, u64)>,
}

/// Counts `|Omega_0|` and every `|Omega_ij|` by enumeration.
pub fn count_sets(g: &RecouplingGraph) -> SetCounts {
    let omega0 = loop_sets(g).len() as u64;
    let mut pairs = Vec::new();
    for i in g.legs() {
        for j in g.legs() {
            if i.name == j.name {
                continue;
            }
            let n = curve_sets(g, &i.name, &j.name)
                .expect("distinct existing legs")
                .len() as u64;
            pairs.push((i.name.clone(), j.name.clone(), n));
        }
    }
    SetCounts { omega0, pairs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{five_j, nine_j, single_vertex, six_j, three_j};

    fn poly(s: &MultilinearPolynomial) -> String {
        s.to_string()
    }

    #[test]
    fn three_j_has_no_loops() {
        let g = three_j();
        assert_eq!(poly(&loop_polynomial(&g)), "1");
        assert_eq!(loop_sets(&g).len(), 1);
    }

    #[test]
    fn three_j_curve_signs() {
        let g = three_j();
        // factor for terminal leg A: 1 + (B - C) ~A
        assert_eq!(poly(&curve_polynomial(&g, "B", "A").unwrap()), "B*~A");
        assert_eq!(poly(&curve_polynomial(&g, "C", "A").unwrap()), "-C*~A");
        // factor for terminal leg B: 1 + (C - A) ~B
        assert_eq!(poly(&curve_polynomial(&g, "C", "B").unwrap()), "C*~B");
        assert_eq!(poly(&curve_polynomial(&g, "A", "B").unwrap()), "-A*~B");
        // factor for terminal leg C: 1 + (A - B) ~C
        assert_eq!(poly(&curve_polynomial(&g, "A", "C").unwrap()), "A*~C");
        assert_eq!(poly(&curve_polynomial(&g, "B", "C").unwrap()), "-B*~C");
    }

    #[test]
    fn six_j_loop_polynomial_golden() {
        let g = six_j();
        assert_eq!(
            poly(&loop_polynomial(&g)),
            "1 + A*B*F + A*C*E + B*C*D + D*E*F + A*B*D*E + A*C*D*F + B*C*E*F"
        );
    }

    #[test]
    fn nine_j_loop_polynomial_golden() {
        let g = nine_j();
        assert_eq!(
            poly(&loop_polynomial(&g)),
            "1 - A*B*D*E - A*B*G*H - A*C*D*F - A*C*G*K - B*C*E*F - B*C*H*K \
             - D*E*G*H - D*F*G*K - E*F*H*K - A*B*D*F*H*K + A*B*E*F*G*K \
             + A*C*D*E*H*K - A*C*E*F*G*H - B*C*D*E*G*K + B*C*D*F*G*H"
        );
    }

    #[test]
    fn five_j_terminal_b_factor() {
        let g = five_j();
        // (C - A(D - E)) ~B
        let p = curve_polynomial(&g, "C", "B").unwrap();
        let q = curve_polynomial(&g, "D", "B").unwrap();
        let r = curve_polynomial(&g, "E", "B").unwrap();
        let total = p.add(&q).add(&r);
        assert_eq!(poly(&total), "C*~B - A*D*~B + A*E*~B");
    }

    #[test]
    fn counts_match_closed_forms() {
        // |Omega_0| = 2^(I - V + 1) on connected graphs
        assert_eq!(count_sets(&six_j()).omega0, 8);
        assert_eq!(count_sets(&nine_j()).omega0, 16);
        let c = count_sets(&three_j());
        assert_eq!(c.omega0, 1);
        assert!(c.pairs.iter().all(|&(_, _, n)| n == 1));
        // the 5-j graph is a tree: every count is 1
        let c = count_sets(&five_j());
        assert_eq!(c.omega0, 1);
        assert!(c.pairs.iter().all(|&(_, _, n)| n == 1));
    }

    #[test]
    fn edge_reversal_negates_variable() {
        let g = six_j();
        let p = loop_polynomial(&g);
        let r = loop_polynomial(&g.reverse_edge("A").unwrap());
        assert_eq!(r, p.negate_var(&Var::line("A")));
        // and on an open family of the 5-j graph
        let g = five_j();
        let p = curve_polynomial(&g, "D", "B").unwrap();
        let r = curve_polynomial(&g.reverse_edge("A").unwrap(), "D", "B").unwrap();
        assert_eq!(r, p.negate_var(&Var::line("A")));
    }

    #[test]
    fn vertex_swap_flips_passing_monomials() {
        // transposing two half-edges at one vertex flips the sign of every
        // set that passes through that vertex (exactly two incident lines)
        let g = six_j();
        let swapped = g.swap_vertex_slots(0, 0, 1);
        let p = loop_polynomial(&g);
        let q = loop_polynomial(&swapped);
        let incident: Vec<Var> = g.vertex_lines(0).iter().map(|&l| Var::line(g.line_name(l))).collect();
        let expected = p.map_coefficients(|m, c| {
            let used = incident.iter().filter(|v| m.contains(v)).count();
            match used {
                0 => c,
                2 => -c,
                _ => unreachable!("trivalent vertex passed at most once"),
            }
        });
        assert_eq!(q, expected);
    }

    #[test]
    fn vertex_swap_on_three_j_negates_incident_variables() {
        // at an all-leg vertex the passage flip is the same as negating the
        // three unbared leg variables
        let g = three_j();
        let swapped = g.swap_vertex_slots(0, 1, 2);
        for (from, to) in [("B", "A"), ("C", "A"), ("A", "B"), ("C", "B")] {
            let p = curve_polynomial(&g, from, to).unwrap();
            let q = curve_polynomial(&swapped, from, to).unwrap();
            let negated = p
                .negate_var(&Var::line("A"))
                .negate_var(&Var::line("B"))
                .negate_var(&Var::line("C"));
            assert_eq!(q, negated);
        }
    }

    #[test]
    fn closed_loop_direction_irrelevant() {
        let g = six_j();
        for set in loop_sets(&g) {
            for w in &set.closed_loops {
                // reverse the traversal: walk the steps backwards from the
                // opposite halves
                let rev = Walk {
                    steps: w
                        .steps
                        .iter()
                        .rev()
                        .map(|s| match *s {
                            Step::Edge { edge, from } => Step::Edge {
                                edge,
                                from: g.opposite_half(from).unwrap(),
                            },
                            _ => unreachable!(),
                        })
                        .collect(),
                };
                assert_eq!(walk_sign(&g, w).unwrap(), walk_sign(&g, &rev).unwrap());
            }
        }
    }

    #[test]
    fn multilinearity() {
        for g in [three_j(), five_j(), six_j(), nine_j()] {
            let p = loop_polynomial(&g);
            assert!(p.max_var_degree() <= 1);
        }
    }

    #[test]
    fn self_loop_enumeration() {
        let g = three_j().glue_legs("B", "C", "L").unwrap();
        let sets = loop_sets(&g);
        assert_eq!(sets.len(), 2); // empty set and the self-loop
        let p = loop_polynomial(&g);
        assert_eq!(p.constant_term(), 1);
        assert_eq!(p.num_terms(), 2);
    }

    #[test]
    fn identical_legs_rejected() {
        let g = three_j();
        assert!(matches!(
            curve_polynomial(&g, "A", "A"),
            Err(CurveError::IdenticalLegs)
        ));
    }

    #[test]
    fn invalid_walk_rejected() {
        let g = six_j();
        let w = Walk {
            steps: vec![Step::Edge {
                edge: 0,
                from: HalfEdge(999),
            }],
        };
        assert!(walk_sign(&g, &w).is_err());
        let w = Walk {
            steps: vec![Step::Edge {
                edge: 42,
                from: HalfEdge(0),
            }],
        };
        assert!(walk_sign(&g, &w).is_err());
    }

    #[test]
    fn open_curve_count_matches_loop_count() {
        let g = single_vertex(["P", "Q", "R"]);
        let c = count_sets(&g);
        assert_eq!(c.pairs.len(), 6);
        assert!(c.pairs.iter().all(|&(_, _, n)| n == c.omega0));
    }
}
