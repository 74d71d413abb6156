//! Sparse truncated multivariate power series over exact rationals.
//!
//! Caps are per variable: a series stores no exponent above its variable's
//! cap, and every operation truncates back into the cap lattice. Truncation
//! is an ideal, so any coefficient that survives is exact. Binary operations
//! take the variable-set union and intersect caps on shared variables.
//!
//! The gluing transform joins two leg variable pairs into one edge variable
//! by balanced-exponent selection: the coefficient of
//! `A1^p ~A1^q A2^p' ~A2^q'` survives exactly when `p = q'` and `q = p'`,
//! lands on exponent `p + p'` of the new variable, and picks up `(-1)^p`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::poly::{MultilinearPolynomial, Var};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("reciprocal of a series with zero constant term")]
    NonUnitConstant,
    #[error("exponential of a series with nonzero constant term")]
    NonzeroConstant,
    #[error("series does not contain variable {0}")]
    MissingVariable(Var),
    #[error("variable {0} already present")]
    VariableClash(Var),
    #[error("cannot glue a leg pair to itself: {0}")]
    IdenticalLegs(String),
    #[error("exponent {requested} of {var} beyond cap {cap}: expansion order too low")]
    CapExceeded { var: Var, requested: u32, cap: u32 },
}

/// Sparse multivariate power series truncated to per-variable degree caps.
#[derive(Debug, Clone)]
pub struct TruncatedSeries {
    vars: Vec<Var>,
    caps: Vec<u32>,
    terms: HashMap<Vec<u32>, BigRational>,
}

impl TruncatedSeries {
    /// Zero series on the given variables; caps of repeated variables are
    /// intersected.
    pub fn zero(vars_caps: &[(Var, u32)]) -> Self {
        let mut pairs: Vec<(Var, u32)> = Vec::new();
        for (v, c) in vars_caps {
            match pairs.iter_mut().find(|(w, _)| w == v) {
                Some((_, cap)) => *cap = (*cap).min(*c),
                None => pairs.push((v.clone(), *c)),
            }
        }
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        TruncatedSeries {
            vars: pairs.iter().map(|(v, _)| v.clone()).collect(),
            caps: pairs.iter().map(|(_, c)| *c).collect(),
            terms: HashMap::new(),
        }
    }

    pub fn constant(vars_caps: &[(Var, u32)], value: BigRational) -> Self {
        let mut s = Self::zero(vars_caps);
        if !value.is_zero() {
            s.terms.insert(vec![0; s.vars.len()], value);
        }
        s
    }

    pub fn one(vars_caps: &[(Var, u32)]) -> Self {
        Self::constant(vars_caps, BigRational::one())
    }

    /// Embeds a multilinear polynomial; monomials beyond the caps are
    /// truncated away. Every variable of `p` must be listed in `vars_caps`.
    pub fn from_polynomial(
        p: &MultilinearPolynomial,
        vars_caps: &[(Var, u32)],
    ) -> Result<Self, SeriesError> {
        let mut s = Self::zero(vars_caps);
        'terms: for (m, c) in p.terms() {
            let mut key = vec![0u32; s.vars.len()];
            for v in m.vars() {
                let idx = s
                    .var_index(v)
                    .ok_or_else(|| SeriesError::MissingVariable(v.clone()))?;
                key[idx] += 1;
                if key[idx] > s.caps[idx] {
                    continue 'terms;
                }
            }
            s.insert(key, BigRational::from_integer(BigInt::from(c)));
        }
        Ok(s)
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn caps(&self) -> &[u32] {
        &self.caps
    }

    pub fn var_index(&self, v: &Var) -> Option<usize> {
        self.vars.binary_search(v).ok()
    }

    pub fn cap_of(&self, v: &Var) -> Option<u32> {
        self.var_index(v).map(|i| self.caps[i])
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> BigRational {
        self.terms
            .get(vec![0u32; self.vars.len()].as_slice())
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    fn insert(&mut self, key: Vec<u32>, value: BigRational) {
        if value.is_zero() {
            return;
        }
        use std::collections::hash_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(e) => {
                e.insert(value);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += value;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn empty_like(&self) -> Self {
        TruncatedSeries {
            vars: self.vars.clone(),
            caps: self.caps.clone(),
            terms: HashMap::new(),
        }
    }

    /// Union-variable zero series plus exponent-position maps for both operands.
    fn aligned(&self, other: &Self) -> (Self, Vec<usize>, Vec<usize>) {
        let mut vars_caps: Vec<(Var, u32)> = self
            .vars
            .iter()
            .cloned()
            .zip(self.caps.iter().copied())
            .collect();
        vars_caps.extend(other.vars.iter().cloned().zip(other.caps.iter().copied()));
        let out = Self::zero(&vars_caps);
        let map_self: Vec<usize> = self
            .vars
            .iter()
            .map(|v| out.var_index(v).expect("union contains operand vars"))
            .collect();
        let map_other: Vec<usize> = other
            .vars
            .iter()
            .map(|v| out.var_index(v).expect("union contains operand vars"))
            .collect();
        (out, map_self, map_other)
    }

    fn remap_into(&self, out: &mut Self, map: &[usize], scale: &BigRational) {
        for (key, c) in &self.terms {
            let mut new_key = vec![0u32; out.vars.len()];
            let mut ok = true;
            for (i, &e) in key.iter().enumerate() {
                if e > out.caps[map[i]] {
                    ok = false;
                    break;
                }
                new_key[map[i]] = e;
            }
            if ok {
                out.insert(new_key, c * scale);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let (mut out, ms, mo) = self.aligned(other);
        self.remap_into(&mut out, &ms, &BigRational::one());
        other.remap_into(&mut out, &mo, &BigRational::one());
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let (mut out, ms, mo) = self.aligned(other);
        self.remap_into(&mut out, &ms, &BigRational::one());
        other.remap_into(&mut out, &mo, &(-BigRational::one()));
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&(-BigRational::one()))
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        let mut out = self.empty_like();
        if q.is_zero() {
            return out;
        }
        for (k, c) in &self.terms {
            out.terms.insert(k.clone(), c * q);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (out_shape, ms, mo) = self.aligned(other);
        let mut a = out_shape.empty_like();
        self.remap_into(&mut a, &ms, &BigRational::one());
        let mut b = out_shape.empty_like();
        other.remap_into(&mut b, &mo, &BigRational::one());
        // iterate the smaller operand outside
        if a.terms.len() > b.terms.len() {
            std::mem::swap(&mut a, &mut b);
        }
        let mut out = out_shape;
        for (ka, ca) in &a.terms {
            'pair: for (kb, cb) in &b.terms {
                let mut key = Vec::with_capacity(ka.len());
                for i in 0..ka.len() {
                    let e = ka[i] + kb[i];
                    if e > out.caps[i] {
                        continue 'pair;
                    }
                    key.push(e);
                }
                out.insert(key, ca * cb);
            }
        }
        out
    }

    /// Reciprocal by geometric series; the constant term must be a unit.
    fn recip(&self) -> Result<Self, SeriesError> {
        let c = self.constant_term();
        if c.is_zero() {
            return Err(SeriesError::NonUnitConstant);
        }
        let c_inv = c.recip();
        // s = c (1 + u), 1/s = (1/c) sum (-u)^k
        let mut neg_u = self.scale(&c_inv);
        let key0 = vec![0u32; self.vars.len()];
        neg_u.terms.remove(&key0);
        neg_u = neg_u.neg();
        let mut acc = Self::one(&self.vars_caps_pairs());
        let mut power = acc.clone();
        let budget: u64 = self.caps.iter().map(|&c| c as u64).sum::<u64>() + 1;
        for _ in 0..budget {
            power = power.mul(&neg_u);
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power);
        }
        debug_assert!(power.is_zero(), "geometric series must terminate in caps");
        Ok(acc.scale(&c_inv))
    }

    fn vars_caps_pairs(&self) -> Vec<(Var, u32)> {
        self.vars
            .iter()
            .cloned()
            .zip(self.caps.iter().copied())
            .collect()
    }

    /// Integer power, negative exponents via the reciprocal.
    pub fn power(&self, n: i64) -> Result<Self, SeriesError> {
        if n == 0 {
            return Ok(Self::one(&self.vars_caps_pairs()));
        }
        let base = if n < 0 { self.recip()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Self::one(&self.vars_caps_pairs());
        let mut sq = base;
        loop {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            sq = sq.mul(&sq);
        }
        Ok(acc)
    }

    /// `exp(s) = sum s^k / k!`; requires zero constant term.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if !self.constant_term().is_zero() {
            return Err(SeriesError::NonzeroConstant);
        }
        let mut acc = Self::one(&self.vars_caps_pairs());
        let mut term = acc.clone();
        let budget: u64 = self.caps.iter().map(|&c| c as u64).sum::<u64>() + 1;
        for k in 1..=budget {
            term = term.mul(self);
            if term.is_zero() {
                break;
            }
            term = term.scale(&BigRational::new(BigInt::one(), BigInt::from(k)));
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// Joins the leg pairs `(leg1, ~leg1)` and `(leg2, ~leg2)` into the new
    /// edge variable `new_edge`, running from `leg1` to `leg2`.
    ///
    /// Exact residue form of the contour-integral gluing: keep a term exactly
    /// when `exp(leg1) = exp(~leg2)` and `exp(~leg1) = exp(leg2)`, emit the
    /// sum of the unbared exponents on the new variable, with sign
    /// `(-1)^{exp(leg1)}`. All other variables pass through unchanged.
    pub fn glue(
        &self,
        leg1: &str,
        leg2: &str,
        new_edge: &str,
    ) -> Result<Self, SeriesError> {
        if leg1 == leg2 {
            return Err(SeriesError::IdenticalLegs(leg1.to_string()));
        }
        let a1 = Var::line(leg1);
        let b1 = Var::bar(leg1);
        let a2 = Var::line(leg2);
        let b2 = Var::bar(leg2);
        let ia1 = self
            .var_index(&a1)
            .ok_or(SeriesError::MissingVariable(a1.clone()))?;
        let ib1 = self
            .var_index(&b1)
            .ok_or(SeriesError::MissingVariable(b1.clone()))?;
        let ia2 = self
            .var_index(&a2)
            .ok_or(SeriesError::MissingVariable(a2.clone()))?;
        let ib2 = self
            .var_index(&b2)
            .ok_or(SeriesError::MissingVariable(b2.clone()))?;
        let new_var = Var::line(new_edge);
        if self.var_index(&new_var).is_some() {
            return Err(SeriesError::VariableClash(new_var));
        }

        let new_cap = (self.caps[ia1] + self.caps[ia2]).min(self.caps[ib1] + self.caps[ib2]);
        let mut vars_caps: Vec<(Var, u32)> = self
            .vars_caps_pairs()
            .into_iter()
            .filter(|(v, _)| *v != a1 && *v != b1 && *v != a2 && *v != b2)
            .collect();
        vars_caps.push((new_var.clone(), new_cap));
        let mut out = Self::zero(&vars_caps);
        let keep: Vec<usize> = (0..self.vars.len())
            .filter(|&i| i != ia1 && i != ib1 && i != ia2 && i != ib2)
            .collect();
        let new_idx = out.var_index(&new_var).expect("new variable present");
        let keep_map: Vec<usize> = keep
            .iter()
            .map(|&i| out.var_index(&self.vars[i]).expect("kept variable present"))
            .collect();

        for (key, c) in &self.terms {
            let (p1, q1, p2, q2) = (key[ia1], key[ib1], key[ia2], key[ib2]);
            if p1 != q2 || q1 != p2 {
                continue;
            }
            let mut new_key = vec![0u32; out.vars.len()];
            for (ki, &si) in keep_map.iter().zip(keep.iter()) {
                new_key[*ki] = key[si];
            }
            new_key[new_idx] = p1 + p2;
            let value = if p1 % 2 == 1 { -c } else { c.clone() };
            out.insert(new_key, value);
        }
        Ok(out)
    }

    /// Stored coefficient of the monomial with the given exponents
    /// (unlisted variables are taken at exponent zero). Requesting an
    /// exponent beyond a variable's cap is an error: the expansion cannot
    /// answer it. A variable the series never tracked is unconstrained and
    /// simply contributes no terms.
    pub fn coefficient(&self, exps: &[(Var, u32)]) -> Result<BigRational, SeriesError> {
        let mut key = vec![0u32; self.vars.len()];
        for (v, e) in exps {
            match self.var_index(v) {
                Some(i) => {
                    if *e > self.caps[i] {
                        return Err(SeriesError::CapExceeded {
                            var: v.clone(),
                            requested: *e,
                            cap: self.caps[i],
                        });
                    }
                    key[i] = *e;
                }
                None => {
                    if *e > 0 {
                        return Ok(BigRational::zero());
                    }
                }
            }
        }
        Ok(self
            .terms
            .get(&key)
            .cloned()
            .unwrap_or_else(BigRational::zero))
    }

    /// Drops every term of total degree above `d`.
    pub fn total_degree_truncate(&self, d: u32) -> Self {
        let mut out = self.empty_like();
        for (k, c) in &self.terms {
            if k.iter().sum::<u32>() <= d {
                out.terms.insert(k.clone(), c.clone());
            }
        }
        out
    }

    /// Term-map equality over the union of the variable sets, ignoring caps.
    pub fn coefficients_equal(&self, other: &Self) -> bool {
        let (out_shape, ms, mo) = self.aligned(other);
        let mut a = out_shape.empty_like();
        self.remap_into(&mut a, &ms, &BigRational::one());
        let mut b = out_shape.empty_like();
        other.remap_into(&mut b, &mo, &BigRational::one());
        a.terms == b.terms
    }

    fn sorted_terms(&self) -> Vec<(&Vec<u32>, &BigRational)> {
        let mut ts: Vec<_> = self.terms.iter().collect();
        // total degree first; within a degree, descending exponent order on
        // the sorted variables matches lexicographic order of the expanded
        // variable sequence (A^2 before A*~B before ~B^2)
        ts.sort_by(|(ka, _), (kb, _)| {
            let da: u32 = ka.iter().sum();
            let db: u32 = kb.iter().sum();
            da.cmp(&db).then_with(|| kb.cmp(ka))
        });
        ts
    }
}

impl PartialEq for TruncatedSeries {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars && self.caps == other.caps && self.terms == other.terms
    }
}

impl Eq for TruncatedSeries {}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (key, c) in self.sorted_terms() {
            let neg = c < &BigRational::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mono: Vec<String> = key
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        self.vars[i].to_string()
                    } else {
                        format!("{}^{}", self.vars[i], e)
                    }
                })
                .collect();
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", mag, mono.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Monomial;

    fn vc(pairs: &[(&str, u32)]) -> Vec<(Var, u32)> {
        pairs.iter().map(|(n, c)| (Var::line(*n), *c)).collect()
    }

    fn poly_from(terms: &[(&[&str], i64)]) -> MultilinearPolynomial {
        let mut p = MultilinearPolynomial::zero();
        for (names, c) in terms {
            p.add_term(
                Monomial::new(names.iter().map(|n| var_of(n)).collect()),
                *c,
            );
        }
        p
    }

    fn var_of(n: &str) -> Var {
        match n.strip_prefix('~') {
            Some(rest) => Var::bar(rest),
            None => Var::line(n),
        }
    }

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn mul_truncates() {
        let caps = vc(&[("A", 2)]);
        let p = TruncatedSeries::from_polynomial(&poly_from(&[(&[], 1), (&["A"], 1)]), &caps)
            .unwrap();
        let q = TruncatedSeries::from_polynomial(&poly_from(&[(&[], 1), (&["A"], -1)]), &caps)
            .unwrap();
        let r = p.mul(&q);
        assert_eq!(r.to_string(), "1 - A^2");
        // identity
        let one = TruncatedSeries::one(&caps);
        assert!(p.mul(&one).coefficients_equal(&p));
    }

    #[test]
    fn square_of_sum() {
        let caps = [(Var::line("A"), 2), (Var::bar("B"), 2)];
        let p = TruncatedSeries::from_polynomial(
            &poly_from(&[(&["A"], 1), (&["~B"], 1)]),
            &caps,
        )
        .unwrap();
        let sq = p.mul(&p);
        assert_eq!(sq.to_string(), "A^2 + 2*A*~B + ~B^2");
    }

    #[test]
    fn binomial_series() {
        let caps = vc(&[("X", 3)]);
        let s = TruncatedSeries::from_polynomial(&poly_from(&[(&[], 1), (&["X"], 1)]), &caps)
            .unwrap();
        let inv2 = s.power(-2).unwrap();
        assert_eq!(inv2.to_string(), "1 - 2*X + 3*X^2 - 4*X^3");
        assert!(s.power(0).unwrap().coefficients_equal(&TruncatedSeries::one(&caps)));
    }

    #[test]
    fn recip_requires_unit() {
        let caps = vc(&[("X", 3)]);
        let s = TruncatedSeries::from_polynomial(&poly_from(&[(&["X"], 1)]), &caps).unwrap();
        assert!(matches!(s.power(-1), Err(SeriesError::NonUnitConstant)));
    }

    #[test]
    fn exp_basics() {
        let caps = vc(&[("X", 4)]);
        let zero = TruncatedSeries::zero(&caps);
        assert!(zero.exp().unwrap().coefficients_equal(&TruncatedSeries::one(&caps)));
        let s = TruncatedSeries::from_polynomial(&poly_from(&[(&["X"], 1)]), &caps).unwrap();
        let e = s.exp().unwrap();
        assert_eq!(
            e.coefficient(&[(Var::line("X"), 3)]).unwrap(),
            BigRational::new(BigInt::one(), BigInt::from(6))
        );
        let one = TruncatedSeries::one(&caps);
        assert!(matches!(one.exp(), Err(SeriesError::NonzeroConstant)));
        // exp(s) exp(-s) = 1
        assert!(e.mul(&s.neg().exp().unwrap()).coefficients_equal(&one));
    }

    #[test]
    fn glue_examples() {
        let caps = [
            (Var::line("A1"), 2),
            (Var::bar("A1"), 2),
            (Var::line("A2"), 2),
            (Var::bar("A2"), 2),
        ];
        // F = A1 ~A2 -> -A
        let f = TruncatedSeries::from_polynomial(&poly_from(&[(&["A1", "~A2"], 1)]), &caps)
            .unwrap();
        let g = f.glue("A1", "A2", "A").unwrap();
        assert_eq!(g.to_string(), "-A");
        // F = ~A1 A2 -> +A
        let f = TruncatedSeries::from_polynomial(&poly_from(&[(&["~A1", "A2"], 1)]), &caps)
            .unwrap();
        assert_eq!(f.glue("A1", "A2", "A").unwrap().to_string(), "A");
        // F = A1 A2 -> 0 (balance fails)
        let f = TruncatedSeries::from_polynomial(&poly_from(&[(&["A1", "A2"], 1)]), &caps)
            .unwrap();
        assert!(f.glue("A1", "A2", "A").unwrap().is_zero());
        // missing variable
        let f = TruncatedSeries::one(&vc(&[("X", 1)]));
        assert!(matches!(
            f.glue("A1", "A2", "A"),
            Err(SeriesError::MissingVariable(_))
        ));
    }

    #[test]
    fn glue_commutes_with_disjoint_mul() {
        let caps = [
            (Var::line("A1"), 2),
            (Var::bar("A1"), 2),
            (Var::line("A2"), 2),
            (Var::bar("A2"), 2),
        ];
        let f = TruncatedSeries::from_polynomial(
            &poly_from(&[(&[], 1), (&["A1", "~A2"], 1), (&["~A1", "A2"], -1)]),
            &caps,
        )
        .unwrap();
        let other = TruncatedSeries::from_polynomial(
            &poly_from(&[(&[], 1), (&["X"], 3)]),
            &vc(&[("X", 2)]),
        )
        .unwrap();
        let a = f.mul(&other).glue("A1", "A2", "A").unwrap();
        let b = f.glue("A1", "A2", "A").unwrap().mul(&other);
        assert!(a.coefficients_equal(&b));
    }

    #[test]
    fn coefficient_errors_beyond_cap() {
        let caps = vc(&[("X", 2)]);
        let s = TruncatedSeries::from_polynomial(
            &poly_from(&[(&[], 1), (&["X"], -2)]),
            &caps,
        )
        .unwrap();
        assert_eq!(s.coefficient(&[(Var::line("X"), 1)]).unwrap(), rat(-2));
        assert_eq!(s.coefficient(&[]).unwrap(), rat(1));
        assert!(matches!(
            s.coefficient(&[(Var::line("X"), 3)]),
            Err(SeriesError::CapExceeded { .. })
        ));
        // untracked variable at positive exponent is simply absent
        assert_eq!(s.coefficient(&[(Var::line("Y"), 1)]).unwrap(), rat(0));
    }

    #[test]
    fn caps_intersect_on_shared_vars() {
        let a = TruncatedSeries::one(&vc(&[("X", 5)]));
        let b = TruncatedSeries::one(&vc(&[("X", 3), ("Y", 2)]));
        let c = a.mul(&b);
        assert_eq!(c.cap_of(&Var::line("X")), Some(3));
        assert_eq!(c.cap_of(&Var::line("Y")), Some(2));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        /// Multilinear series over `A, B, C` with constant term 1 and the
        /// given coefficients on the seven nonempty subsets.
        fn unit_multilinear(coeffs: &[i64]) -> TruncatedSeries {
            let names = ["A", "B", "C"];
            let mut p = poly_from(&[(&[], 1)]);
            for (idx, mask) in (1u8..8).enumerate() {
                let subset: Vec<Var> = (0..3)
                    .filter(|b| mask & (1 << b) != 0)
                    .map(|b| Var::line(names[b]))
                    .collect();
                p.add_term(Monomial::new(subset), coeffs[idx]);
            }
            let caps = vc(&[("A", 2), ("B", 2), ("C", 2)]);
            TruncatedSeries::from_polynomial(&p, &caps).unwrap()
        }

        proptest! {
            #[test]
            fn recip_is_inverse(coeffs in proptest::collection::vec(-3i64..=3, 7)) {
                let s = unit_multilinear(&coeffs);
                let inv = s.power(-1).unwrap();
                let one = TruncatedSeries::one(&s.vars_caps_pairs());
                prop_assert!(s.mul(&inv).coefficients_equal(&one));
            }

            #[test]
            fn exp_of_negation_inverts(coeffs in proptest::collection::vec(-2i64..=2, 7)) {
                let mut s = unit_multilinear(&coeffs);
                // drop the constant term so exp applies
                s.terms.remove(&vec![0u32, 0, 0]);
                let one = TruncatedSeries::one(&s.vars_caps_pairs());
                let product = s.exp().unwrap().mul(&s.neg().exp().unwrap());
                prop_assert!(product.coefficients_equal(&one));
            }
        }
    }
}
