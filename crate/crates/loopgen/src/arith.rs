//! Exact number tower: big integers, rationals, factorials and root-rationals.
//!
//! A [`RootRational`] is a value `c * sqrt(r)` with `c` an exact rational and
//! `r` a square-free positive integer. This field is closed under
//! multiplication and contains every quantity the symbol pipeline produces:
//! triangle coefficients, factorial-ratio square roots and the symbol values
//! themselves. Square roots are never evaluated in floating point; radicands
//! are kept square-free by prime bookkeeping on factorials (Legendre's
//! formula) and by gcd splitting on products.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("cannot add root-rationals with different radicands: sqrt({0}) vs sqrt({1})")]
    RadicandMismatch(BigUint, BigUint),
    #[error("factorial of negative argument {0}")]
    NegativeFactorial(i64),
    #[error("invalid root-rational literal: {0}")]
    Parse(String),
}

/// `n!` as an exact big integer.
pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    acc
}

/// Binomial coefficient `C(n, k)`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut p = 2;
    while p * p <= n {
        if sieve[p] {
            let mut q = p * p;
            while q <= n {
                sieve[q] = false;
                q += p;
            }
        }
        p += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(i, &is_p)| is_p.then_some(i as u64))
        .collect()
}

/// Exponent of the prime `p` in `n!` (Legendre's formula).
fn legendre_exponent(n: u64, p: u64) -> i64 {
    let mut e = 0i64;
    let mut q = p;
    loop {
        e += (n / q) as i64;
        match q.checked_mul(p) {
            Some(next) if next <= n => q = next,
            _ => break,
        }
    }
    e
}

/// Exact value of the form `coeff * sqrt(radicand)`.
///
/// Canonical form: `radicand` is a square-free positive integer, `1` for pure
/// rationals; zero is uniquely `0 * sqrt(1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RootRational {
    coeff: BigRational,
    radicand: BigUint,
}

impl RootRational {
    pub fn zero() -> Self {
        RootRational {
            coeff: BigRational::zero(),
            radicand: BigUint::one(),
        }
    }

    pub fn one() -> Self {
        RootRational {
            coeff: BigRational::one(),
            radicand: BigUint::one(),
        }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(coeff: BigRational) -> Self {
        RootRational {
            coeff,
            radicand: BigUint::one(),
        }
    }

    /// `coeff * sqrt(radicand)` where `radicand` may carry square factors;
    /// they are extracted into the coefficient.
    pub fn new(coeff: BigRational, radicand: BigUint) -> Self {
        if radicand.is_zero() {
            return Self::zero();
        }
        if coeff.is_zero() || radicand.is_one() {
            return RootRational {
                coeff,
                radicand: BigUint::one(),
            };
        }
        let (square, free) = split_square(&radicand);
        let r = RootRational {
            coeff: coeff * BigRational::from_integer(BigInt::from(square)),
            radicand: free,
        };
        if r.coeff.is_zero() {
            Self::zero()
        } else {
            r
        }
    }

    /// Exact square root of a non-negative rational, e.g. `sqrt(1/3) = 1/3 * sqrt(3)`.
    pub fn sqrt_rational(r: &BigRational) -> Self {
        assert!(!r.is_negative(), "square root of negative rational");
        if r.is_zero() {
            return Self::zero();
        }
        let num = r.numer().magnitude().clone();
        let den = r.denom().magnitude().clone();
        // sqrt(n/d) = sqrt(n d) / d
        let coeff = BigRational::new(BigInt::one(), BigInt::from(den.clone()));
        Self::new(coeff, num * den)
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn coeff(&self) -> &BigRational {
        &self.coeff
    }

    pub fn radicand(&self) -> &BigUint {
        &self.radicand
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        // sqrt(r) sqrt(s) = g sqrt((r/g)(s/g)) with g = gcd(r, s); both factors
        // square-free and coprime, so the product is square-free already.
        let g = self.radicand.gcd(&other.radicand);
        let rad = (&self.radicand / &g) * (&other.radicand / &g);
        RootRational {
            coeff: &self.coeff * &other.coeff * BigRational::from_integer(BigInt::from(g)),
            radicand: rad,
        }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        RootRational {
            coeff: &self.coeff * q,
            radicand: self.radicand.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        RootRational {
            coeff: -self.coeff.clone(),
            radicand: self.radicand.clone(),
        }
    }

    /// Addition is only defined inside one quadratic extension; mismatched
    /// radicands signal a logic error in the caller.
    pub fn add(&self, other: &Self) -> Result<Self, ArithError> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.radicand != other.radicand {
            return Err(ArithError::RadicandMismatch(
                self.radicand.clone(),
                other.radicand.clone(),
            ));
        }
        let coeff = &self.coeff + &other.coeff;
        if coeff.is_zero() {
            Ok(Self::zero())
        } else {
            Ok(RootRational {
                coeff,
                radicand: self.radicand.clone(),
            })
        }
    }

    /// The exact square, always a plain rational.
    pub fn square(&self) -> BigRational {
        &self.coeff * &self.coeff * BigRational::from_integer(BigInt::from(self.radicand.clone()))
    }

    /// Approximate value for display; never used in comparisons.
    pub fn to_f64(&self) -> f64 {
        let c = self.coeff.to_f64().unwrap_or(f64::NAN);
        let r = self.radicand.to_f64().unwrap_or(f64::NAN);
        c * r.sqrt()
    }
}

/// Largest square divisor split: returns `(s, f)` with `n = s^2 * f`, `f` square-free.
fn split_square(n: &BigUint) -> (BigUint, BigUint) {
    let mut rem = n.clone();
    let mut square_root = BigUint::one();
    let mut free = BigUint::one();
    // Trial division; radicands here come from small factorials.
    let mut p = BigUint::from(2u32);
    while (&p * &p) <= rem {
        let mut exp = 0u64;
        while (&rem % &p).is_zero() {
            rem /= &p;
            exp += 1;
        }
        if exp > 0 {
            square_root *= p.pow((exp / 2) as u32);
            if exp % 2 == 1 {
                free *= &p;
            }
        }
        p += 1u32;
    }
    // rem is 1 or a prime.
    free *= rem;
    (square_root, free)
}

impl fmt::Display for RootRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if self.radicand.is_one() {
            write!(f, "{}", self.coeff)
        } else {
            write!(f, "{} * sqrt({})", self.coeff, self.radicand)
        }
    }
}

impl FromStr for RootRational {
    type Err = ArithError;

    /// Parses `p/q * sqrt(r/s)` with every piece optional except the leading
    /// rational (or a bare `sqrt(...)`), canonicalizing the result.
    fn from_str(s: &str) -> Result<Self, ArithError> {
        let bad = || ArithError::Parse(s.to_string());
        let t = s.trim();
        if t.is_empty() {
            return Err(bad());
        }
        let (rat_part, root_part) = match t.split_once('*') {
            Some((a, b)) => (a.trim(), Some(b.trim())),
            None => {
                if t.starts_with("sqrt(") || t.starts_with("-sqrt(") {
                    ("", Some(t))
                } else {
                    (t, None)
                }
            }
        };
        let mut coeff = if rat_part.is_empty() {
            BigRational::one()
        } else {
            parse_rational(rat_part).ok_or_else(bad)?
        };
        let mut value = RootRational::from_rational(BigRational::one());
        if let Some(root) = root_part {
            let mut root = root;
            if let Some(stripped) = root.strip_prefix('-') {
                coeff = -coeff;
                root = stripped.trim_start();
            }
            let inner = root
                .strip_prefix("sqrt(")
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(bad)?;
            let rad = parse_rational(inner).ok_or_else(bad)?;
            if rad.is_negative() {
                return Err(bad());
            }
            value = RootRational::sqrt_rational(&rad);
        }
        Ok(value.scale(&coeff))
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

/// Exact `sqrt( prod(num_i!) / prod(den_j!) )` via prime factorization of the
/// factorials, never through floating point.
pub fn sqrt_factorial_ratio(num: &[u64], den: &[u64]) -> RootRational {
    let max = num.iter().chain(den.iter()).copied().max().unwrap_or(0);
    let primes = primes_up_to(max);
    let mut coeff_num = BigUint::one();
    let mut coeff_den = BigUint::one();
    let mut rad = BigUint::one();
    for p in primes {
        let mut e: i64 = num.iter().map(|&n| legendre_exponent(n, p)).sum();
        e -= den.iter().map(|&n| legendre_exponent(n, p)).sum::<i64>();
        // e = 2q + r with r in {0,1}: floor division keeps the radicand integral.
        let q = e.div_euclid(2);
        let r = e.rem_euclid(2);
        let bp = BigUint::from(p);
        if q >= 0 {
            coeff_num *= bp.pow(q as u32);
        } else {
            coeff_den *= bp.pow((-q) as u32);
        }
        if r == 1 {
            rad *= bp;
        }
    }
    RootRational {
        coeff: BigRational::new(BigInt::from(coeff_num), BigInt::from(coeff_den)),
        radicand: rad,
    }
}

/// Triangle condition on doubled half-integers, including integer-sum parity.
pub fn triangle_ok(ta: i32, tb: i32, tc: i32) -> bool {
    ta >= 0
        && tb >= 0
        && tc >= 0
        && (ta + tb + tc) % 2 == 0
        && ta + tb - tc >= 0
        && tb + tc - ta >= 0
        && tc + ta - tb >= 0
}

/// Triangle coefficient `sqrt((a+b-c)! (b+c-a)! (c+a-b)! / (a+b+c+1)!)` on
/// doubled arguments; `None` signals a vanishing symbol (triangle or parity
/// violation), not an error.
pub fn delta(ta: i32, tb: i32, tc: i32) -> Option<RootRational> {
    if !triangle_ok(ta, tb, tc) {
        return None;
    }
    let x = ((ta + tb - tc) / 2) as u64;
    let y = ((tb + tc - ta) / 2) as u64;
    let z = ((tc + ta - tb) / 2) as u64;
    let s = ((ta + tb + tc) / 2) as u64;
    Some(sqrt_factorial_ratio(&[x, y, z], &[s + 1]))
}

/// `(-1)^k` for an integer exponent.
pub fn parity_sign(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), BigInt::one());
        assert_eq!(factorial(5), BigInt::from(120));
        assert_eq!(binomial(6, 3), BigInt::from(20));
        assert_eq!(binomial(3, 5), BigInt::zero());
    }

    #[test]
    fn sqrt_factorial_ratio_examples() {
        // sqrt(2!/0!) = sqrt(2)
        let r = sqrt_factorial_ratio(&[2], &[0]);
        assert_eq!(r, RootRational::new(BigRational::one(), BigUint::from(2u32)));
        // sqrt(4!/2!) = sqrt(12) = 2 sqrt(3)
        let r = sqrt_factorial_ratio(&[4], &[2]);
        assert_eq!(r.coeff(), &rat(2, 1));
        assert_eq!(r.radicand(), &BigUint::from(3u32));
        // sqrt(3! 1!) = sqrt(6)
        let r = sqrt_factorial_ratio(&[3, 1], &[]);
        assert_eq!(r.coeff(), &rat(1, 1));
        assert_eq!(r.radicand(), &BigUint::from(6u32));
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta(0, 0, 0), Some(RootRational::one()));
        // delta(1,1,1) = sqrt(1/24): doubled arguments (2,2,2)
        let d = delta(2, 2, 2).unwrap();
        assert_eq!(d.square(), rat(1, 24));
        // parity violation: (2, 1, 1/2) doubled = (4, 2, 1)
        assert_eq!(delta(4, 2, 1), None);
        // plain triangle violation
        assert_eq!(delta(4, 0, 0), None);
    }

    #[test]
    fn delta_symmetric() {
        for &(a, b, c) in &[(2, 3, 3), (1, 1, 2), (4, 2, 2), (0, 3, 3)] {
            let base = delta(a, b, c);
            for &(x, y, z) in &[(a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
                assert_eq!(delta(x, y, z), base);
            }
        }
    }

    #[test]
    fn radicand_collapse() {
        let s2 = RootRational::new(BigRational::one(), BigUint::from(2u32));
        assert_eq!(s2.mul(&s2), RootRational::from_integer(2));
        let x = RootRational::new(rat(1, 2), BigUint::from(6u32));
        let y = RootRational::sqrt_rational(&rat(2, 3)).scale(&rat(1, 3));
        // (1/2) sqrt(6) * (1/3) sqrt(2/3): square is 1/9, value positive -> 1/3
        let p = x.mul(&y);
        assert_eq!(p.square(), rat(1, 9));
        assert_eq!(p, RootRational::from_rational(rat(1, 3)));
    }

    #[test]
    fn add_identity_and_mismatch() {
        let x = RootRational::new(rat(3, 5), BigUint::from(7u32));
        assert_eq!(x.add(&RootRational::zero()).unwrap(), x);
        let y = RootRational::new(rat(1, 2), BigUint::from(3u32));
        assert!(matches!(x.add(&y), Err(ArithError::RadicandMismatch(_, _))));
        assert_eq!(x.add(&x.neg()).unwrap(), RootRational::zero());
    }

    #[test]
    fn display_round_trip() {
        for s in [
            "0",
            "1",
            "-2/3",
            "1/2 * sqrt(6)",
            "-7 * sqrt(2)",
            "5/3 * sqrt(30)",
        ] {
            let v: RootRational = s.parse().unwrap();
            assert_eq!(v.to_string(), s);
        }
        // non-canonical inputs normalize
        let v: RootRational = "1 * sqrt(1/3)".parse().unwrap();
        assert_eq!(v.to_string(), "1/3 * sqrt(3)");
        let v: RootRational = "sqrt(8)".parse().unwrap();
        assert_eq!(v.to_string(), "2 * sqrt(2)");
    }

    proptest! {
        #[test]
        fn square_consistent(n in -50i64..50, d in 1i64..30, r in 1u64..400) {
            let x = RootRational::new(rat(n, d), BigUint::from(r));
            let direct = rat(n * n, d * d) * BigRational::from_integer(BigInt::from(r));
            prop_assert_eq!(x.square(), direct);
        }

        #[test]
        fn mul_commutative_associative(
            a in 1u64..60, b in 1u64..60, c in 1u64..60,
            na in -9i64..9, nb in -9i64..9, nc in -9i64..9,
        ) {
            let x = RootRational::new(rat(na, 1), BigUint::from(a));
            let y = RootRational::new(rat(nb, 2), BigUint::from(b));
            let z = RootRational::new(rat(nc, 3), BigUint::from(c));
            prop_assert_eq!(x.mul(&y), y.mul(&x));
            prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        }

        #[test]
        fn parse_display_round_trip(n in -40i64..40, d in 1i64..20, r in 1u64..200) {
            let x = RootRational::new(rat(n, d), BigUint::from(r));
            let s = x.to_string();
            let back: RootRational = s.parse().unwrap();
            prop_assert_eq!(back, x);
        }
    }
}
