//! Exact integer/rational helpers: p-adic valuations, squarefree and
//! perfect-square tests, trial-division factorization.
//!
//! [`Rational`] is `num_rational::BigRational`, which keeps every value
//! reduced with a positive denominator, so equality and valuations are
//! computed on canonical representatives.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Default trial-division ceiling.
pub const DEFAULT_FACTOR_CEILING: u64 = 10_000_000;

/// `v_p(x)`; `Infinite` only for `x = 0`.
///
/// Ordered so that every finite value compares below `Infinite`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Valuation::Infinite
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("INFINITE"),
        }
    }
}

// Finite valuations serialize as JSON numbers, the zero case as "INFINITE".
impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => s.serialize_i64(*v),
            Valuation::Infinite => s.serialize_str("INFINITE"),
        }
    }
}

impl<'de> Deserialize<'de> for Valuation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(Valuation::Finite(v)),
            Raw::Str(s) if s == "INFINITE" => Ok(Valuation::Infinite),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("bad valuation {s:?}"))),
        }
    }
}

/// Deterministic primality by trial division; fine for the primes that
/// divide desk-scale `k` and `l`.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::validation(format!("{p} is not prime")))
    }
}

/// Exponent of `p` in a nonzero integer. Caller guarantees `p` prime.
pub(crate) fn vp_integer_unchecked(n: &BigInt, p: u64) -> Valuation {
    if n.is_zero() {
        return Valuation::Infinite;
    }
    let p = BigUint::from(p);
    let mut m = n.magnitude().clone();
    let mut v = 0i64;
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            break;
        }
        m = q;
        v += 1;
    }
    Valuation::Finite(v)
}

/// `v_p(n)` for an integer.
pub fn vp_integer(n: &BigInt, p: u64) -> Result<Valuation> {
    check_prime(p)?;
    Ok(vp_integer_unchecked(n, p))
}

/// `v_p(x)`: for `x = p^k (u/v)` with `p` dividing neither `u` nor `v`,
/// returns `k`. Zero maps to [`Valuation::Infinite`].
pub fn vp(x: &Rational, p: u64) -> Result<Valuation> {
    check_prime(p)?;
    Ok(vp_unchecked(x, p))
}

pub(crate) fn vp_unchecked(x: &Rational, p: u64) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    // Reduced, so at most one of numer/denom is divisible by p.
    let num = vp_integer_unchecked(x.numer(), p).finite().unwrap_or(0);
    let den = vp_integer_unchecked(x.denom(), p).finite().unwrap_or(0);
    Valuation::Finite(num - den)
}

/// A rational is integral iff its reduced denominator is 1.
pub fn is_integral(x: &Rational) -> bool {
    x.denom().is_one()
}

pub fn is_perfect_square(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    // Squares mod 16 are 0, 1, 4, 9.
    let low = n.magnitude().iter_u32_digits().next().unwrap_or(0) & 15;
    if !matches!(low, 0 | 1 | 4 | 9) {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Integer square root test on machine words; used by the hot scan loop.
pub(crate) fn is_perfect_square_u128(n: u128) -> Option<u128> {
    if !matches!(n & 15, 0 | 1 | 4 | 9) {
        return None;
    }
    let r = n.isqrt();
    (r * r == n).then_some(r)
}

/// Trial-division factorizer that refuses to run past `ceiling`.
///
/// If a cofactor remains whose smallest prime factor could exceed the
/// ceiling, factorization stops with [`Error::Capacity`] rather than
/// guessing that the cofactor is prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Factorizer {
    pub ceiling: u64,
}

impl Default for Factorizer {
    fn default() -> Self {
        Factorizer { ceiling: DEFAULT_FACTOR_CEILING }
    }
}

impl Factorizer {
    pub fn new(ceiling: u64) -> Self {
        Factorizer { ceiling }
    }

    /// Prime factorization of `n >= 1` as `(prime, exponent)` pairs with
    /// strictly increasing primes.
    pub fn factorize(&self, n: &BigInt) -> Result<Vec<(BigUint, u32)>> {
        if n.sign() != Sign::Plus {
            return Err(Error::validation(format!("cannot factorize {n}: need n >= 1")));
        }
        let mut rest = n.magnitude().clone();
        let mut out = Vec::new();
        let mut d = 2u64;
        loop {
            if rest.is_one() {
                break;
            }
            // Once rest fits in a machine word, finish there.
            if let Some(small) = rest.to_u128() {
                self.factor_small(small, d, &mut out)?;
                break;
            }
            if d > self.ceiling {
                return Err(self.capacity_error(&rest));
            }
            let mut e = 0u32;
            loop {
                let (q, r) = rest.div_rem(&BigUint::from(d));
                if !r.is_zero() {
                    break;
                }
                rest = q;
                e += 1;
            }
            if e > 0 {
                out.push((BigUint::from(d), e));
            }
            d = if d == 2 { 3 } else { d + 2 };
        }
        Ok(out)
    }

    fn factor_small(&self, mut n: u128, mut d: u64, out: &mut Vec<(BigUint, u32)>) -> Result<()> {
        while n > 1 {
            let dd = d as u128;
            if dd * dd > n {
                out.push((BigUint::from(n), 1));
                return Ok(());
            }
            if d > self.ceiling {
                return Err(self.capacity_error(&BigUint::from(n)));
            }
            let mut e = 0u32;
            while n.is_multiple_of(dd) {
                n /= dd;
                e += 1;
            }
            if e > 0 {
                out.push((BigUint::from(d), e));
            }
            d = if d == 2 { 3 } else { d + 2 };
        }
        Ok(())
    }

    fn capacity_error(&self, rest: &BigUint) -> Error {
        Error::Capacity(format!(
            "trial division ceiling {} reached with unfactored cofactor {rest}",
            self.ceiling
        ))
    }
}

/// Factorization with the default ceiling.
pub fn prime_factorize(n: &BigInt) -> Result<Vec<(BigUint, u32)>> {
    Factorizer::default().factorize(n)
}

pub fn is_squarefree(n: &BigInt) -> Result<bool> {
    if n.sign() != Sign::Plus {
        return Err(Error::validation(format!("squarefree test needs n >= 1, got {n}")));
    }
    Ok(prime_factorize(n)?.iter().all(|(_, e)| *e == 1))
}

/// All positive divisors from a factorization, ascending.
pub fn divisors(factors: &[(BigUint, u32)]) -> Vec<BigUint> {
    let mut out = vec![BigUint::one()];
    for (p, e) in factors {
        let mut next = Vec::with_capacity(out.len() * (*e as usize + 1));
        for d in &out {
            let mut pk = d.clone();
            for _ in 0..=*e {
                next.push(pk.clone());
                pk *= p;
            }
        }
        out = next;
    }
    out.sort();
    out
}

/// Parses `"n"` or `"n/d"` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::validation(format!("not an exact rational: {s:?}"));
    match s.split_once('/') {
        None => BigInt::from_str(s).map(Rational::from_integer).map_err(|_| bad()),
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::validation(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(n, d))
        }
    }
}

/// `"num/den"`, or just `"num"` when the denominator is 1.
pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub(crate) fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

pub(crate) fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}
