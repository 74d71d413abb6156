//! Multilinear polynomials over line variables.
//!
//! These are the sign-endowed sums produced by curve enumeration: every
//! monomial is square-free (a non-overlapping set passes each line at most
//! once), and coefficients are small integers (`±1` per contributing set,
//! summed when distinct sets share a support).
//!
//! Canonical text form: monomials sorted by total degree, then
//! lexicographically, with explicit signs, e.g.
//! `1 + A*B*F + A*C*E - A*B*D*E`. A bared leg variable prints with a `~`
//! prefix: the open curve ending at leg `B` contributes `~B`.

use std::collections::BTreeMap;
use std::fmt;

/// A line variable: an internal edge or leg name, optionally bared.
///
/// Internal edges carry a single unbared variable. An external leg `X`
/// contributes `X` when a curve starts there and `~X` (bared) when one ends
/// there.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    bared: bool,
    name: String,
}

impl Var {
    pub fn line(name: impl Into<String>) -> Self {
        Var {
            bared: false,
            name: name.into(),
        }
    }

    pub fn bar(name: impl Into<String>) -> Self {
        Var {
            bared: true,
            name: name.into(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_bared(&self) -> bool {
        self.bared
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bared {
            write!(f, "~{}", self.name)
        } else {
            write!(f, "{}", self.name)
        }
    }
}

/// A square-free monomial: a sorted set of distinct variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<Var>);

impl Monomial {
    pub fn unit() -> Self {
        Monomial(Vec::new())
    }

    pub fn new(mut vars: Vec<Var>) -> Self {
        vars.sort();
        vars.dedup();
        Monomial(vars)
    }

    pub fn vars(&self) -> &[Var] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, v: &Var) -> bool {
        self.0.binary_search(v).is_ok()
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // total degree first, then lexicographic
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let names: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", names.join("*"))
    }
}

/// Signed sum of square-free monomials with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MultilinearPolynomial {
    terms: BTreeMap<Monomial, i64>,
}

impl MultilinearPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::unit(), 1);
        p
    }

    pub fn add_term(&mut self, m: Monomial, coeff: i64) {
        if coeff == 0 {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if *e.get() == 0 {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, i64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> i64 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn constant_term(&self) -> i64 {
        self.coefficient(&Monomial::unit())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Maximum degree of any single variable across all monomials (0 or 1 here
    /// by construction; exposed so tests can assert multilinearity).
    pub fn max_var_degree(&self) -> usize {
        if self.terms.keys().any(|m| m.degree() > 0) {
            1
        } else {
            0
        }
    }

    /// Substitution `v -> -v`: negates every monomial containing `v`.
    pub fn negate_var(&self, v: &Var) -> Self {
        let mut out = Self::zero();
        for (m, &c) in &self.terms {
            let c = if m.contains(v) { -c } else { c };
            out.add_term(m.clone(), c);
        }
        out
    }

    /// Applies `f` to each monomial's coefficient, dropping zeros.
    pub fn map_coefficients(&self, mut f: impl FnMut(&Monomial, i64) -> i64) -> Self {
        let mut out = Self::zero();
        for (m, &c) in &self.terms {
            out.add_term(m.clone(), f(m, c));
        }
        out
    }
}

impl fmt::Display for MultilinearPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, &c) in &self.terms {
            let mag = c.unsigned_abs();
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
                first = false;
            } else if c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.degree() == 0 {
                write!(f, "{mag}")?;
            } else if mag == 1 {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}
