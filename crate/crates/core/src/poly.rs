//! Dense univariate polynomials over `Z`, coefficients stored constant term
//! first with no trailing zeros.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

// Above this many coefficient products a multiplication is split across
// output coefficients on the rayon pool.
#[cfg(feature = "parallel")]
const PAR_MUL_THRESHOLD: usize = 64 * 64;

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(c: &[i64]) -> Self {
        IntPoly::new(c.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigInt) -> Self {
        IntPoly::new(vec![c])
    }

    /// `c x^n`
    pub fn monomial(c: BigInt, n: usize) -> Self {
        let mut v = vec![BigInt::zero(); n + 1];
        v[n] = c;
        IntPoly::new(v)
    }

    pub fn x() -> Self {
        IntPoly::monomial(BigInt::one(), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    /// Coefficient of `x^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Every coefficient divisible by `d`.
    pub fn divisible_by(&self, d: &BigInt) -> bool {
        self.coeffs.iter().all(|c| c.is_multiple_of(d))
    }

    /// `self / d` if `d` divides every coefficient.
    pub fn exact_div_scalar(&self, d: &BigInt) -> Option<IntPoly> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (q, r) = c.div_rem(d);
            if !r.is_zero() {
                return None;
            }
            out.push(q);
        }
        Some(IntPoly::new(out))
    }

    /// `self / divisor` for a monic divisor, if the remainder is zero.
    pub fn exact_div_monic(&self, divisor: &IntPoly) -> Option<IntPoly> {
        let dd = divisor.degree()?;
        assert!(divisor.leading_coeff().is_one(), "divisor must be monic");
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        let n = self.degree()?;
        if n < dd {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); n - dd + 1];
        for i in (0..=n - dd).rev() {
            let c = std::mem::take(&mut rem[i + dd]);
            if c.is_zero() {
                continue;
            }
            for j in 0..dd {
                rem[i + j] -= &c * &divisor.coeffs[j];
            }
            quot[i] = c;
        }
        rem.iter().all(Zero::is_zero).then(|| IntPoly::new(quot))
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Value at `w/z` times `z^deg`, i.e. the homogenized form
    /// `sum c_i w^i z^(deg - i)`, as an integer.
    pub fn eval_homogeneous(&self, w: &BigInt, z: &BigInt, deg: usize) -> BigInt {
        assert!(self.degree().is_none_or(|d| d <= deg));
        // Horner in w with z-powers folded in: ((c_n w + c_{n-1} z) w + c_{n-2} z^2) ...
        let mut acc = BigInt::zero();
        let mut zpow = BigInt::one();
        for i in (0..=deg).rev() {
            acc *= w;
            acc += self.coeff(i) * &zpow;
            zpow *= z;
        }
        acc
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let Some(deg) = self.degree() else {
            return Rational::zero();
        };
        let num = self.eval_homogeneous(x.numer(), x.denom(), deg);
        Rational::new(num, x.denom().pow(deg as u32))
    }

    pub fn mul_ref(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let n = self.coeffs.len() + other.coeffs.len() - 1;
        let coeff_at = |k: usize| -> BigInt {
            let lo = k.saturating_sub(other.coeffs.len() - 1);
            let hi = k.min(self.coeffs.len() - 1);
            let mut s = BigInt::zero();
            for i in lo..=hi {
                s += &self.coeffs[i] * &other.coeffs[k - i];
            }
            s
        };
        #[cfg(feature = "parallel")]
        if self.coeffs.len() * other.coeffs.len() >= PAR_MUL_THRESHOLD {
            use rayon::prelude::*;
            return IntPoly::new((0..n).into_par_iter().map(coeff_at).collect());
        }
        IntPoly::new((0..n).map(coeff_at).collect())
    }

    pub fn pow(&self, e: u32) -> IntPoly {
        let mut out = IntPoly::constant(BigInt::one());
        for _ in 0..e {
            out = out.mul_ref(self);
        }
        out
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, o: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, o: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, o: &IntPoly) -> IntPoly {
        self.mul_ref(o)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let m = c.abs();
            match (i, m.is_one()) {
                (0, _) => write!(f, "{m}")?,
                (1, true) => f.write_str("x")?,
                (1, false) => write!(f, "{m}x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{m}x^{i}")?,
            }
        }
        Ok(())
    }
}
