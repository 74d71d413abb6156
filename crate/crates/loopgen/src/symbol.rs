//! Assembly, expansion and exact extraction of symbol values.
//!
//! For a graph with `J` legs the generating function is
//!
//! ```text
//! (sum over closed-loop sets)^(J-2) * prod over legs j of Q_j^(-1),
//! Q_j = sum over closed-loop sets + sum over open sets ending at leg j
//! ```
//!
//! Expanding this as a truncated series and reading off the coefficient of
//! `prod A_j^(a_j+m_j) ~A_j^(a_j-m_j) prod A_i^(2a_i)` gives the normalized
//! symbol; multiplying back the triangle coefficients and the factorial-ratio
//! square root recovers the exact value. The equivalent exponential form
//! trades the per-leg reciprocals for `base^(-2) * exp(-curves/base)` with a
//! slightly different normalization; both are implemented and must agree.
//!
//! Closed graphs additionally get a direct layer-sum evaluator: the
//! coefficient is a finite sum over stackings of non-overlapping loop sets
//! weighted by `(-1)^K (K+1)` and a multinomial factor.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::{delta, factorial, sqrt_factorial_ratio, triangle_ok, RootRational};
use crate::curves::{curve_polynomial, loop_polynomial, loop_sets, set_monomial, set_sign};
use crate::graph::{QuantumAssignment, RecouplingGraph};
use crate::poly::{MultilinearPolynomial, Var};
use crate::series::{SeriesError, TruncatedSeries};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymbolError {
    #[error("layer sums require a closed graph (no legs)")]
    OpenGraph,
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Graph(#[from] crate::graph::GraphError),
}

/// Which selection rule made a symbol vanish.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectionRule {
    Triangle,
    MagneticSum,
    Parity,
    MagneticRange,
}

impl std::fmt::Display for SelectionRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SelectionRule::Triangle => "triangle",
            SelectionRule::MagneticSum => "magnetic-sum",
            SelectionRule::Parity => "parity",
            SelectionRule::MagneticRange => "magnetic-range",
        };
        write!(f, "{s}")
    }
}

/// Exact symbol value with an optional vanishing flag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolValue {
    pub value: RootRational,
    pub vanished_by: Option<SelectionRule>,
}

impl SymbolValue {
    pub fn vanishing(rule: SelectionRule) -> Self {
        SymbolValue {
            value: RootRational::zero(),
            vanished_by: Some(rule),
        }
    }

    pub fn of(value: RootRational) -> Self {
        SymbolValue {
            value,
            vanished_by: None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
}

/// The loop/curve data of a graph, ready for series expansion.
#[derive(Debug, Clone)]
pub struct GeneratingFunction {
    /// sum over closed-loop sets, constant term 1
    pub base: MultilinearPolynomial,
    /// per leg `j`: base plus all open sums ending at `j`
    pub leg_factors: Vec<(String, MultilinearPolynomial)>,
    /// the three line names at each vertex
    pub vertex_triples: Vec<[String; 3]>,
    pub edge_names: Vec<String>,
    pub leg_names: Vec<String>,
}

/// Builds the generating function of a graph from its curve combinatorics.
pub fn generating_function(g: &RecouplingGraph) -> GeneratingFunction {
    let base = loop_polynomial(g);
    debug_assert_eq!(base.constant_term(), 1);
    let leg_names: Vec<String> = g.legs().iter().map(|l| l.name.clone()).collect();
    let mut leg_factors = Vec::with_capacity(leg_names.len());
    for j in &leg_names {
        let mut q = base.clone();
        for i in &leg_names {
            if i != j {
                q = q.add(&curve_polynomial(g, i, j).expect("distinct legs"));
            }
        }
        debug_assert_eq!(q.constant_term(), 1);
        debug_assert!(q
            .add(&base.map_coefficients(|_, c| -c))
            .terms()
            .all(|(m, _)| m.contains(&Var::bar(j))
                && m.vars().iter().filter(|v| v.is_bared()).count() == 1));
        leg_factors.push((j.clone(), q));
    }
    let vertex_triples = (0..g.vertex_count())
        .map(|v| g.vertex_lines(v).map(|l| g.line_name(l).to_string()))
        .collect();
    GeneratingFunction {
        base,
        leg_factors,
        vertex_triples,
        edge_names: g.edges().iter().map(|e| e.name.clone()).collect(),
        leg_names,
    }
}

impl GeneratingFunction {
    pub fn leg_count(&self) -> usize {
        self.leg_names.len()
    }

    /// All series variables of this graph with one uniform cap.
    pub fn uniform_caps(&self, cap: u32) -> Vec<(Var, u32)> {
        let mut vars = Vec::new();
        for e in &self.edge_names {
            vars.push((Var::line(e), cap));
        }
        for l in &self.leg_names {
            vars.push((Var::line(l), cap));
            vars.push((Var::bar(l), cap));
        }
        vars
    }

    /// Minimal caps for one extraction: `a+m` on the unbared leg variable,
    /// `a-m` on the bared one, `2a` on each edge variable.
    pub fn caps_for(&self, q: &QuantumAssignment) -> Vec<(Var, u32)> {
        let mut vars = Vec::new();
        for (e, name) in self.edge_names.iter().enumerate() {
            vars.push((Var::line(name), q.edge_tj[e] as u32));
        }
        for (l, name) in self.leg_names.iter().enumerate() {
            vars.push((Var::line(name), ((q.leg_tj[l] + q.leg_tm[l]) / 2) as u32));
            vars.push((Var::bar(name), ((q.leg_tj[l] - q.leg_tm[l]) / 2) as u32));
        }
        vars
    }

    /// `base^(J-2) * prod Q_j^(-1)`, truncated to the caps.
    pub fn expand_power_form(&self, caps: &[(Var, u32)]) -> Result<TruncatedSeries, SeriesError> {
        let base = TruncatedSeries::from_polynomial(&self.base, caps)?;
        let mut acc = base.power(self.leg_count() as i64 - 2)?;
        for (_, q) in &self.leg_factors {
            let qs = TruncatedSeries::from_polynomial(q, caps)?;
            acc = acc.mul(&qs.power(-1)?);
        }
        Ok(acc)
    }

    /// `base^(-2) * exp(-curves/base)`, truncated to the caps; `curves` is
    /// the sum of all open contributions over ordered leg pairs.
    pub fn expand_exponential_form(&self, caps: &[(Var, u32)]) -> Result<TruncatedSeries, SeriesError> {
        let base = TruncatedSeries::from_polynomial(&self.base, caps)?;
        let mut curves = MultilinearPolynomial::zero();
        for (_, q) in &self.leg_factors {
            curves = curves.add(q).add(&self.base.map_coefficients(|_, c| -c));
        }
        let curves = TruncatedSeries::from_polynomial(&curves, caps)?;
        let quotient = curves.mul(&base.power(-1)?);
        Ok(base.power(-2)?.mul(&quotient.neg().exp()?))
    }

    /// Exponent vector of the extraction target for `q`.
    fn target(&self, q: &QuantumAssignment) -> Vec<(Var, u32)> {
        let mut t = Vec::new();
        for (e, name) in self.edge_names.iter().enumerate() {
            t.push((Var::line(name), q.edge_tj[e] as u32));
        }
        for (l, name) in self.leg_names.iter().enumerate() {
            t.push((Var::line(name), ((q.leg_tj[l] + q.leg_tm[l]) / 2) as u32));
            t.push((Var::bar(name), ((q.leg_tj[l] - q.leg_tm[l]) / 2) as u32));
        }
        t
    }

    fn line_tj(&self, q: &QuantumAssignment, name: &str) -> i32 {
        if let Some(e) = self.edge_names.iter().position(|n| n == name) {
            q.edge_tj[e]
        } else {
            let l = self
                .leg_names
                .iter()
                .position(|n| n == name)
                .expect("line name known to the generating function");
            q.leg_tj[l]
        }
    }

    /// Vanishing checks shared by every evaluation route.
    fn selection_flag(&self, q: &QuantumAssignment) -> Option<SelectionRule> {
        for triple in &self.vertex_triples {
            if !triangle_ok(
                self.line_tj(q, &triple[0]),
                self.line_tj(q, &triple[1]),
                self.line_tj(q, &triple[2]),
            ) {
                return Some(SelectionRule::Triangle);
            }
        }
        if !q.leg_tm.is_empty() && q.leg_tm.iter().sum::<i32>() != 0 {
            return Some(SelectionRule::MagneticSum);
        }
        None
    }

    fn delta_product(&self, q: &QuantumAssignment) -> Option<RootRational> {
        let mut acc = RootRational::one();
        for triple in &self.vertex_triples {
            let d = delta(
                self.line_tj(q, &triple[0]),
                self.line_tj(q, &triple[1]),
                self.line_tj(q, &triple[2]),
            )?;
            acc = acc.mul(&d);
        }
        Some(acc)
    }

    fn normalize_power_form(&self, q: &QuantumAssignment, coeff: &BigRational) -> SymbolValue {
        if coeff.is_zero() {
            return SymbolValue::of(RootRational::zero());
        }
        let deltas = self
            .delta_product(q)
            .expect("triangles checked before extraction");
        let nums: Vec<u64> = (0..q.leg_tj.len())
            .map(|l| ((q.leg_tj[l] + q.leg_tm[l]) / 2) as u64)
            .collect();
        let dens: Vec<u64> = (0..q.leg_tj.len())
            .map(|l| ((q.leg_tj[l] - q.leg_tm[l]) / 2) as u64)
            .collect();
        let norm = sqrt_factorial_ratio(&nums, &dens);
        SymbolValue::of(deltas.mul(&norm).scale(coeff))
    }

    fn normalize_exponential_form(&self, q: &QuantumAssignment, coeff: &BigRational) -> SymbolValue {
        if coeff.is_zero() {
            return SymbolValue::of(RootRational::zero());
        }
        let deltas = self
            .delta_product(q)
            .expect("triangles checked before extraction");
        let nums: Vec<u64> = (0..q.leg_tj.len())
            .flat_map(|l| {
                [
                    ((q.leg_tj[l] + q.leg_tm[l]) / 2) as u64,
                    ((q.leg_tj[l] - q.leg_tm[l]) / 2) as u64,
                ]
            })
            .collect();
        let norm = sqrt_factorial_ratio(&nums, &[]);
        SymbolValue::of(deltas.mul(&norm).scale(coeff))
    }
}

/// A graph plus one shared expansion, for evaluating many assignments.
pub struct SymbolEvaluator {
    gf: GeneratingFunction,
    caps: Vec<(Var, u32)>,
    power_series: TruncatedSeries,
    exp_series: std::sync::OnceLock<TruncatedSeries>,
}

impl SymbolEvaluator {
    /// Expands the power form once with every variable capped at `max_tj`;
    /// the exponential form is expanded on first use.
    pub fn new(g: &RecouplingGraph, max_tj: u32) -> Result<Self, SymbolError> {
        let gf = generating_function(g);
        let caps = gf.uniform_caps(max_tj);
        let power_series = gf.expand_power_form(&caps)?;
        Ok(SymbolEvaluator {
            gf,
            caps,
            power_series,
            exp_series: std::sync::OnceLock::new(),
        })
    }

    pub fn generating_function(&self) -> &GeneratingFunction {
        &self.gf
    }

    pub fn series_terms(&self) -> usize {
        self.power_series.num_terms()
    }

    /// Symbol value through the power-product expansion.
    pub fn value(&self, q: &QuantumAssignment) -> Result<SymbolValue, SymbolError> {
        if let Some(rule) = self.gf.selection_flag(q) {
            return Ok(SymbolValue::vanishing(rule));
        }
        let coeff = self.power_series.coefficient(&self.gf.target(q))?;
        Ok(self.gf.normalize_power_form(q, &coeff))
    }

    /// Symbol value through the exponential-form expansion.
    pub fn value_exp_form(&self, q: &QuantumAssignment) -> Result<SymbolValue, SymbolError> {
        if let Some(rule) = self.gf.selection_flag(q) {
            return Ok(SymbolValue::vanishing(rule));
        }
        let series = self.exp_series.get_or_init(|| {
            self.gf
                .expand_exponential_form(&self.caps)
                .expect("exponential form shares the power form's preconditions")
        });
        let coeff = series.coefficient(&self.gf.target(q))?;
        Ok(self.gf.normalize_exponential_form(q, &coeff))
    }
}

/// One-shot symbol evaluation with minimal caps for the assignment.
pub fn symbol_value(
    g: &RecouplingGraph,
    q: &QuantumAssignment,
) -> Result<SymbolValue, SymbolError> {
    let gf = generating_function(g);
    if let Some(rule) = gf.selection_flag(q) {
        return Ok(SymbolValue::vanishing(rule));
    }
    let caps = gf.caps_for(q);
    let series = gf.expand_power_form(&caps)?;
    let coeff = series.coefficient(&gf.target(q))?;
    Ok(gf.normalize_power_form(q, &coeff))
}

/// One-shot evaluation through the exponential form.
pub fn symbol_value_exp_form(
    g: &RecouplingGraph,
    q: &QuantumAssignment,
) -> Result<SymbolValue, SymbolError> {
    let gf = generating_function(g);
    if let Some(rule) = gf.selection_flag(q) {
        return Ok(SymbolValue::vanishing(rule));
    }
    let caps = gf.caps_for(q);
    let series = gf.expand_exponential_form(&caps)?;
    let coeff = series.coefficient(&gf.target(q))?;
    Ok(gf.normalize_exponential_form(q, &coeff))
}

/// Verifies the series-level gluing identity: gluing the leg pair inside the
/// expanded generating series must reproduce the generating series of the
/// glued graph, compared exactly on all monomials of total degree at most
/// `total_order`.
///
/// A glued term of total degree `d` with exponent `e` on the new edge draws
/// on pre-glue terms of degree `d + e`, so the pre-glue expansion is carried
/// to twice the compared order.
pub fn glue_identity_holds(
    g: &RecouplingGraph,
    leg1: &str,
    leg2: &str,
    new_edge: &str,
    total_order: u32,
) -> Result<bool, SymbolError> {
    let glued = g.glue_legs(leg1, leg2, new_edge)?;
    let gf = generating_function(g);
    let before = gf
        .expand_power_form(&gf.uniform_caps(total_order))?
        .total_degree_truncate(2 * total_order);
    let lhs = before
        .glue(leg1, leg2, new_edge)?
        .total_degree_truncate(total_order);
    let gf_glued = generating_function(&glued);
    let rhs = gf_glued
        .expand_power_form(&gf_glued.uniform_caps(total_order))?
        .total_degree_truncate(total_order);
    Ok(lhs.coefficients_equal(&rhs))
}

/// Result of a layer-sum evaluation, with the number of stackings visited.
#[derive(Debug, Clone)]
pub struct LayerSumValue {
    pub value: SymbolValue,
    pub solutions: u64,
}

/// Direct multinomial evaluation of `base^(-2)` for closed graphs.
///
/// The coefficient of the target monomial is a sum over all ways to stack
/// the nonempty loop sets with multiplicities so that every edge reaches
/// total degree `2a`; a stacking of `K` layers weighs
/// `(-1)^K (K+1) K!/prod(k!)` times the product of the sets' signs.
pub fn symbol_via_layer_sums(
    g: &RecouplingGraph,
    q: &QuantumAssignment,
) -> Result<LayerSumValue, SymbolError> {
    if g.leg_count() != 0 {
        return Err(SymbolError::OpenGraph);
    }
    let gf = generating_function(g);
    if let Some(rule) = gf.selection_flag(q) {
        return Ok(LayerSumValue {
            value: SymbolValue::vanishing(rule),
            solutions: 0,
        });
    }

    // nonempty loop sets as (sign, per-edge degree) pairs
    let sets: Vec<(i64, Vec<u32>)> = loop_sets(g)
        .into_iter()
        .filter(|s| s.components() > 0)
        .map(|s| {
            let sign = set_sign(g, &s).expect("enumerated set is valid") as i64;
            let m = set_monomial(g, &s);
            let degrees = gf
                .edge_names
                .iter()
                .map(|e| u32::from(m.contains(&Var::line(e))))
                .collect();
            (sign, degrees)
        })
        .collect();
    let mut remaining: Vec<u32> = q.edge_tj.iter().map(|&t| t as u32).collect();

    let mut coeff = BigRational::zero();
    let mut solutions = 0u64;
    let mut counts = vec![0u64; sets.len()];
    stack_layers(
        &sets,
        0,
        &mut remaining,
        &mut counts,
        &mut coeff,
        &mut solutions,
    );

    let value = gf.normalize_power_form(q, &coeff);
    Ok(LayerSumValue { value, solutions })
}

fn stack_layers(
    sets: &[(i64, Vec<u32>)],
    idx: usize,
    remaining: &mut Vec<u32>,
    counts: &mut Vec<u64>,
    coeff: &mut BigRational,
    solutions: &mut u64,
) {
    if idx == sets.len() {
        if remaining.iter().all(|&r| r == 0) {
            *solutions += 1;
            let total: u64 = counts.iter().sum();
            // (-1)^K (K+1)!/prod k! times the sign product
            let mut num = factorial(total + 1);
            if total % 2 == 1 {
                num = -num;
            }
            let mut den = BigInt::one();
            for (&k, (sign, _)) in counts.iter().zip(sets.iter()) {
                den *= factorial(k);
                if *sign < 0 && k % 2 == 1 {
                    num = -num;
                }
            }
            *coeff += BigRational::new(num, den);
        }
        return;
    }
    let (_, degrees) = &sets[idx];
    let max_k = degrees
        .iter()
        .zip(remaining.iter())
        .filter(|(&d, _)| d > 0)
        .map(|(&d, &r)| r / d)
        .min()
        .unwrap_or(0);
    for k in 0..=max_k {
        if k > 0 {
            for (d, r) in degrees.iter().zip(remaining.iter_mut()) {
                *r -= d;
            }
        }
        counts[idx] = k as u64;
        stack_layers(sets, idx + 1, remaining, counts, coeff, solutions);
    }
    counts[idx] = 0;
    for (d, r) in degrees.iter().zip(remaining.iter_mut()) {
        *r += max_k * d;
    }
}
