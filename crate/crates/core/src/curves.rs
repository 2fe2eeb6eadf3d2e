//! Curve parameters, points on `H` and `E`, and integral-point search.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::{self, format_rational, int, is_perfect_square, Rational};
use crate::error::{Error, Result};
use crate::exec::Strategy;

/// One reason a `(k, l)` pair is not admissible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParamViolation {
    NotPositive { name: char, value: i64 },
    Equal,
    NotCoprime { gcd: i64 },
    NotSquarefree { name: char, value: i64 },
}

impl fmt::Display for ParamViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamViolation::NotPositive { name, value } => {
                write!(f, "{name} = {value} is not positive")
            }
            ParamViolation::Equal => f.write_str("k = l"),
            ParamViolation::NotCoprime { gcd } => write!(f, "not coprime (gcd {gcd})"),
            ParamViolation::NotSquarefree { value, .. } => write!(f, "{value} not squarefree"),
        }
    }
}

/// Every constraint the pair violates, in the order positivity, distinctness,
/// coprimality, squarefreeness. Empty means valid.
pub fn param_violations(k: i64, l: i64) -> Vec<ParamViolation> {
    let mut out = Vec::new();
    for (name, v) in [('k', k), ('l', l)] {
        if v < 1 {
            out.push(ParamViolation::NotPositive { name, value: v });
        }
    }
    if !out.is_empty() {
        return out;
    }
    if k == l {
        out.push(ParamViolation::Equal);
    }
    let g = k.gcd(&l);
    if g != 1 {
        out.push(ParamViolation::NotCoprime { gcd: g });
    }
    for (name, v) in [('k', k), ('l', l)] {
        // k, l >= 1 here, so the squarefree test cannot fail on its input.
        if !arith::is_squarefree(&int(v)).unwrap_or(false) {
            out.push(ParamViolation::NotSquarefree { name, value: v });
        }
    }
    out
}

/// Distinct, positive, coprime, squarefree `(k, l)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HolmParams {
    k: u64,
    l: u64,
}

impl HolmParams {
    pub fn new(k: i64, l: i64) -> Result<Self> {
        let v = param_violations(k, l);
        if let Some(first) = v.first() {
            return Err(Error::validation(format!("invalid (k, l) = ({k}, {l}): {first}")));
        }
        Ok(HolmParams { k: k as u64, l: l as u64 })
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn l(&self) -> u64 {
        self.l
    }

    pub fn k_big(&self) -> BigInt {
        BigInt::from(self.k)
    }

    pub fn l_big(&self) -> BigInt {
        BigInt::from(self.l)
    }

    /// `k^2 l^2`, which divides both curve coefficients.
    pub fn kl_squared(&self) -> BigInt {
        let kl = self.k_big() * self.l_big();
        &kl * &kl
    }

    /// Distinct primes dividing `kl`, ascending.
    pub fn primes_dividing_kl(&self) -> Vec<u64> {
        let kl = self.k_big() * self.l_big();
        arith::prime_factorize(&kl)
            .expect("kl is a positive desk-scale integer")
            .into_iter()
            .map(|(p, _)| p.to_u64().expect("prime of a u64 product fits in u64"))
            .collect()
    }

    /// `k(y^3 - y) = l(x^3 - x)`.
    pub fn contains(&self, p: &HPoint) -> bool {
        let k = Rational::from_integer(self.k_big());
        let l = Rational::from_integer(self.l_big());
        let cub = |t: &Rational| t * t * t - t;
        k * cub(&p.y) == l * cub(&p.x)
    }
}

impl fmt::Display for HolmParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(k, l) = ({}, {})", self.k, self.l)
    }
}

/// `y^2 = x^3 + ax + b` with nonzero discriminant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeierstrassCurve {
    a: BigInt,
    b: BigInt,
    params: Option<HolmParams>,
}

impl WeierstrassCurve {
    pub fn new(a: BigInt, b: BigInt) -> Result<Self> {
        let c = WeierstrassCurve { a, b, params: None };
        if c.disc_core().is_zero() {
            return Err(Error::validation(format!(
                "singular curve: 4a^3 + 27b^2 = 0 for a = {}, b = {}",
                c.a, c.b
            )));
        }
        Ok(c)
    }

    /// `a = -3k^2l^2`, `b = k^2l^2(k^2 + l^2)`.
    pub fn from_params(params: &HolmParams) -> Self {
        let k2 = params.k_big().pow(2);
        let l2 = params.l_big().pow(2);
        let k2l2 = &k2 * &l2;
        let a = -3 * &k2l2;
        let b = &k2l2 * (&k2 + &l2);
        let c = WeierstrassCurve { a, b, params: Some(*params) };
        // 4a^3 + 27b^2 = 27 k^4 l^4 (k^2 - l^2)^2, nonzero since k != l.
        debug_assert!(!c.disc_core().is_zero());
        c
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn params(&self) -> Option<&HolmParams> {
        self.params.as_ref()
    }

    pub fn is_holm(&self) -> bool {
        self.params.is_some()
    }

    fn disc_core(&self) -> BigInt {
        4 * self.a.pow(3) + 27 * self.b.pow(2)
    }

    /// `-16(4a^3 + 27b^2)`.
    pub fn discriminant(&self) -> BigInt {
        -16 * self.disc_core()
    }

    /// `x^3 + ax + b`.
    pub fn rhs(&self, x: &Rational) -> Rational {
        let a = Rational::from_integer(self.a.clone());
        let b = Rational::from_integer(self.b.clone());
        x * x * x + a * x + b
    }

    pub fn rhs_int(&self, x: &BigInt) -> BigInt {
        x * x * x + &self.a * x + &self.b
    }

    pub fn contains(&self, p: &EPoint) -> bool {
        match p {
            EPoint::Infinity => true,
            EPoint::Affine { x, y } => y * y == self.rhs(x),
        }
    }

    /// Errors unless `p` is on the curve.
    pub fn check_point(&self, p: &EPoint) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::validation(format!("{p} is not on {self}")))
        }
    }
}

impl fmt::Display for WeierstrassCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = x^3 + ({})x + ({})", self.a, self.b)
    }
}

/// Same as [`WeierstrassCurve::from_params`].
pub fn curve_from_params(params: &HolmParams) -> WeierstrassCurve {
    WeierstrassCurve::from_params(params)
}

pub fn on_e(curve: &WeierstrassCurve, p: &EPoint) -> bool {
    curve.contains(p)
}

pub fn on_h(params: &HolmParams, p: &HPoint) -> bool {
    params.contains(p)
}

/// A point of `E(Q)`: the identity at infinity or an affine point.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum EPoint {
    Infinity,
    Affine { x: Rational, y: Rational },
}

impl EPoint {
    pub fn affine(x: Rational, y: Rational) -> Self {
        EPoint::Affine { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        EPoint::Affine { x: arith::rat(x), y: arith::rat(y) }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, EPoint::Infinity)
    }

    pub fn x(&self) -> Option<&Rational> {
        match self {
            EPoint::Affine { x, .. } => Some(x),
            EPoint::Infinity => None,
        }
    }

    pub fn y(&self) -> Option<&Rational> {
        match self {
            EPoint::Affine { y, .. } => Some(y),
            EPoint::Infinity => None,
        }
    }

    /// Both reduced coordinates are integers. Infinity is not integral.
    pub fn is_integral(&self) -> bool {
        match self {
            EPoint::Affine { x, y } => arith::is_integral(x) && arith::is_integral(y),
            EPoint::Infinity => false,
        }
    }
}

impl fmt::Display for EPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EPoint::Infinity => f.write_str("INFINITY"),
            EPoint::Affine { x, y } => {
                write!(f, "({}, {})", format_rational(x), format_rational(y))
            }
        }
    }
}

/// A point of `H(Q)`. `(0, 0)` is the group identity, so there is no
/// separate point at infinity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HPoint {
    pub x: Rational,
    pub y: Rational,
}

impl HPoint {
    pub fn new(x: Rational, y: Rational) -> Self {
        HPoint { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        HPoint { x: arith::rat(x), y: arith::rat(y) }
    }

    pub fn identity() -> Self {
        HPoint::from_ints(0, 0)
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }
}

impl fmt::Display for HPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", format_rational(&self.x), format_rational(&self.y))
    }
}

/// `max(10^4, 4 k^2 l^2 (k^2 + l^2))`, which always contains `x = k^2, l^2`.
pub fn default_x_bound(params: &HolmParams) -> BigInt {
    let b = WeierstrassCurve::from_params(params).b().clone();
    (BigInt::from(4) * b).max(int(10_000))
}

const SCAN_CHUNK: usize = 4096;

/// All points with integer `x` in `[-x_bound, x_bound]` and integer `y`,
/// sorted by `x` then `y`; `+-y` both listed, `y = 0` once.
pub fn find_integral_points(
    curve: &WeierstrassCurve,
    x_bound: &BigInt,
    strategy: Strategy,
) -> Result<Vec<EPoint>> {
    if !x_bound.is_positive() {
        return Err(Error::validation(format!("x_bound must be >= 1, got {x_bound}")));
    }
    let fast = FastCubic::new(curve, x_bound);
    let lo = -x_bound.clone();
    let width = (BigInt::from(2) * x_bound + 1u8)
        .to_usize()
        .ok_or_else(|| Error::Capacity(format!("scan width for bound {x_bound} too large")))?;
    let chunks = width.div_ceil(SCAN_CHUNK);

    let ys = strategy.flat_map_range(0..chunks, |c| {
        let start = c * SCAN_CHUNK;
        let end = (start + SCAN_CHUNK).min(width);
        let mut found = Vec::new();
        for off in start..end {
            let x = &lo + off;
            let root = match &fast {
                Some(fc) => fc.square_root_at(x.to_i64().expect("bounded by fast path")),
                None => is_perfect_square(&curve.rhs_int(&x)),
            };
            if let Some(y) = root {
                found.push((x, y));
            }
        }
        found
    });

    let mut out = Vec::with_capacity(ys.len() * 2);
    for (x, y) in ys {
        let xr = Rational::from_integer(x);
        if y.is_zero() {
            out.push(EPoint::affine(xr, Rational::zero()));
        } else {
            out.push(EPoint::affine(xr.clone(), Rational::from_integer(-y.clone())));
            out.push(EPoint::affine(xr, Rational::from_integer(y)));
        }
    }
    Ok(out)
}

/// i128 evaluation of `x^3 + ax + b` when every term provably fits.
struct FastCubic {
    a: i128,
    b: i128,
}

impl FastCubic {
    fn new(curve: &WeierstrassCurve, x_bound: &BigInt) -> Option<Self> {
        // |x^3|, |ax| <= 2^90 and |b| <= 2^100, so the sum fits in i128.
        x_bound.to_i128().filter(|b| *b <= 1 << 30)?;
        let a = curve.a.to_i128().filter(|a| a.abs() <= 1 << 60)?;
        let b = curve.b.to_i128().filter(|b| b.abs() <= 1 << 100)?;
        Some(FastCubic { a, b })
    }

    fn square_root_at(&self, x: i64) -> Option<BigInt> {
        let x = x as i128;
        let v = x * x * x + self.a * x + self.b;
        if v < 0 {
            return None;
        }
        arith::is_perfect_square_u128(v as u128).map(BigInt::from)
    }
}

/// Something found on a Holm-derived curve that the torsion-freeness
/// argument says cannot exist.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Finding {
    ZeroX(EPoint),
    ZeroY(EPoint),
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finding::ZeroX(p) => write!(f, "rational point with x = 0: {p}"),
            Finding::ZeroY(p) => write!(f, "rational point with y = 0: {p}"),
        }
    }
}

/// Points with a zero coordinate on a Holm-derived curve. Empty for
/// non-Holm curves.
pub fn holm_findings(curve: &WeierstrassCurve, points: &[EPoint]) -> Vec<Finding> {
    if !curve.is_holm() {
        return Vec::new();
    }
    let mut out = Vec::new();
    for p in points {
        if let EPoint::Affine { x, y } = p {
            if x.is_zero() {
                out.push(Finding::ZeroX(p.clone()));
            }
            if y.is_zero() {
                out.push(Finding::ZeroY(p.clone()));
            }
        }
    }
    out
}

/// `(k^2, +-k(k^2 - l^2))` and `(l^2, +-l(l^2 - k^2))`: the images of
/// `(+-1, 0)` and `(0, +-1)` on `H`.
pub fn canonical_points(params: &HolmParams) -> [EPoint; 4] {
    let k = params.k_big();
    let l = params.l_big();
    let k2 = &k * &k;
    let l2 = &l * &l;
    let yk = &k * (&k2 - &l2);
    let yl = &l * (&l2 - &k2);
    let r = Rational::from_integer;
    [
        EPoint::affine(r(k2.clone()), r(yk.clone())),
        EPoint::affine(r(k2), r(-yk)),
        EPoint::affine(r(l2.clone()), r(yl.clone())),
        EPoint::affine(r(l2), r(-yl)),
    ]
}
