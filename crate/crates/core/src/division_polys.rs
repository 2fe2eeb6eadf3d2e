//! Division polynomials `psi_n`, `phi_n`, `omega_n` in the coordinate ring
//! `Z[x, y] / (y^2 - x^3 - ax - b)`, and the closed forms they imply.
//!
//! For an affine point `P = (x, y)` and `n >= 2`,
//! `nP = (phi_n(P) / psi_n(P)^2, omega_n(P) / psi_n(P)^3)` with
//!
//! ```text
//! phi_n   = x psi_n^2 - psi_{n-1} psi_{n+1}
//! omega_n = (psi_{n-1}^2 psi_{n+2} - psi_{n-2} psi_{n+1}^2) / (4y)
//! ```
//!
//! The `omega_n` normalization is used exactly as written, with no sign or
//! scale correction: at `n = 2` it reduces to the closed-form `y(2P)`
//! numerator over `8y^3`, and the group-law comparison tests in this module
//! pin that down for larger `n`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{format_rational, Rational};
use crate::curves::{EPoint, WeierstrassCurve};
use crate::error::{Error, Result};
use crate::poly::IntPoly;

/// `f(x) + y g(x)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CurvePoly {
    pub f: IntPoly,
    pub g: IntPoly,
}

impl CurvePoly {
    pub fn new(f: IntPoly, g: IntPoly) -> Self {
        CurvePoly { f, g }
    }

    pub fn from_x(f: IntPoly) -> Self {
        CurvePoly { f, g: IntPoly::zero() }
    }

    pub fn from_y(g: IntPoly) -> Self {
        CurvePoly { f: IntPoly::zero(), g }
    }

    pub fn is_zero(&self) -> bool {
        self.f.is_zero() && self.g.is_zero()
    }

    /// The `x`-only polynomial, if the `y`-part vanishes.
    pub fn as_x_poly(&self) -> Option<&IntPoly> {
        self.g.is_zero().then_some(&self.f)
    }

    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        self.f.eval(x) + y * self.g.eval(x)
    }
}

/// Arithmetic in `Z[x, y] / (y^2 - x^3 - ax - b)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordinateRing {
    cubic: IntPoly,
}

impl CoordinateRing {
    pub fn new(curve: &WeierstrassCurve) -> Self {
        let cubic = IntPoly::new(vec![
            curve.b().clone(),
            curve.a().clone(),
            BigInt::zero(),
            BigInt::one(),
        ]);
        CoordinateRing { cubic }
    }

    /// `x^3 + ax + b`, the value of `y^2`.
    pub fn cubic(&self) -> &IntPoly {
        &self.cubic
    }

    pub fn add(&self, p: &CurvePoly, q: &CurvePoly) -> CurvePoly {
        CurvePoly::new(&p.f + &q.f, &p.g + &q.g)
    }

    pub fn sub(&self, p: &CurvePoly, q: &CurvePoly) -> CurvePoly {
        CurvePoly::new(&p.f - &q.f, &p.g - &q.g)
    }

    pub fn mul(&self, p: &CurvePoly, q: &CurvePoly) -> CurvePoly {
        let mut f = &p.f * &q.f;
        if !p.g.is_zero() && !q.g.is_zero() {
            f = &f + &(&(&p.g * &q.g) * &self.cubic);
        }
        let g = &(&p.f * &q.g) + &(&p.g * &q.f);
        CurvePoly::new(f, g)
    }

    pub fn square(&self, p: &CurvePoly) -> CurvePoly {
        self.mul(p, p)
    }

    pub fn cube(&self, p: &CurvePoly) -> CurvePoly {
        self.mul(&self.square(p), p)
    }

    /// `(f + y g) / (c y) = g / c + y f / (c (x^3 + ax + b))`, when exact.
    pub fn div_by_scaled_y(&self, p: &CurvePoly, c: &BigInt) -> Option<CurvePoly> {
        let f = p.g.exact_div_scalar(c)?;
        let g = p.f.exact_div_monic(&self.cubic)?.exact_div_scalar(c)?;
        Some(CurvePoly::new(f, g))
    }
}

/// Memoized `psi_n`, `phi_n`, `omega_n` for one curve.
///
/// Filling takes `&mut self`; a filled cache can be shared read-only through
/// [`DivPolyCache::psi_cached`] and friends.
#[derive(Debug, Clone)]
pub struct DivPolyCache {
    curve: WeierstrassCurve,
    ring: CoordinateRing,
    psi: Vec<CurvePoly>,
    phi: HashMap<u64, CurvePoly>,
    omega: HashMap<u64, CurvePoly>,
}

impl DivPolyCache {
    pub fn new(curve: &WeierstrassCurve) -> Self {
        let ring = CoordinateRing::new(curve);
        let a = curve.a();
        let b = curve.b();
        let c = |v: BigInt| v;
        let psi3 = IntPoly::new(vec![
            c(-(a * a)),
            c(12 * b),
            c(6 * a),
            BigInt::zero(),
            BigInt::from(3),
        ]);
        let psi4 = IntPoly::new(vec![
            c(-4 * a.pow(3) - 32 * b * b),
            c(-16 * a * b),
            c(-20 * a * a),
            c(80 * b),
            c(20 * a),
            BigInt::zero(),
            BigInt::from(4),
        ]);
        let psi = vec![
            CurvePoly::default(),
            CurvePoly::from_x(IntPoly::constant(BigInt::one())),
            CurvePoly::from_y(IntPoly::constant(BigInt::from(2))),
            CurvePoly::from_x(psi3),
            CurvePoly::from_y(psi4),
        ];
        DivPolyCache {
            curve: curve.clone(),
            ring,
            psi,
            phi: HashMap::new(),
            omega: HashMap::new(),
        }
    }

    pub fn curve(&self) -> &WeierstrassCurve {
        &self.curve
    }

    pub fn ring(&self) -> &CoordinateRing {
        &self.ring
    }

    /// Highest `n` with `psi_n` computed.
    pub fn filled_to(&self) -> u64 {
        self.psi.len() as u64 - 1
    }

    /// Computes `psi_m` for every `m <= n`.
    pub fn fill_to(&mut self, n: u64) -> Result<()> {
        while self.filled_to() < n {
            let m = self.psi.len();
            let next = self.psi_from_recurrence(m)?;
            self.psi.push(next);
        }
        Ok(())
    }

    fn psi_from_recurrence(&self, m: usize) -> Result<CurvePoly> {
        debug_assert!(m >= 5);
        let r = &self.ring;
        let p = &self.psi;
        let h = m / 2;
        if m % 2 == 1 {
            // psi_{2h+1} = psi_{h+2} psi_h^3 - psi_{h-1} psi_{h+1}^3
            let lhs = r.mul(&p[h + 2], &r.cube(&p[h]));
            let rhs = r.mul(&p[h - 1], &r.cube(&p[h + 1]));
            Ok(r.sub(&lhs, &rhs))
        } else {
            // psi_{2h} = psi_h (psi_{h+2} psi_{h-1}^2 - psi_{h-2} psi_{h+1}^2) / (2y)
            let inner = r.sub(
                &r.mul(&p[h + 2], &r.square(&p[h - 1])),
                &r.mul(&p[h - 2], &r.square(&p[h + 1])),
            );
            let num = r.mul(&p[h], &inner);
            r.div_by_scaled_y(&num, &BigInt::from(2)).ok_or_else(|| {
                Error::internal(format!("psi_{m}: numerator not divisible by 2y"))
            })
        }
    }

    pub fn psi(&mut self, n: u64) -> Result<&CurvePoly> {
        self.fill_to(n)?;
        Ok(&self.psi[n as usize])
    }

    pub fn psi_cached(&self, n: u64) -> Option<&CurvePoly> {
        self.psi.get(n as usize)
    }

    /// `psi_n^2` as a polynomial in `x` alone.
    pub fn psi_squared(&mut self, n: u64) -> Result<IntPoly> {
        self.fill_to(n)?;
        let sq = self.ring.square(&self.psi[n as usize]);
        sq.as_x_poly()
            .cloned()
            .ok_or_else(|| Error::internal(format!("psi_{n}^2 has a nonzero y-part")))
    }

    pub fn phi(&mut self, n: u64) -> Result<&CurvePoly> {
        if n < 1 {
            return Err(Error::validation("phi_n is defined for n >= 1"));
        }
        if !self.phi.contains_key(&n) {
            self.fill_to(n + 1)?;
            let r = &self.ring;
            let i = n as usize;
            let x = CurvePoly::from_x(IntPoly::x());
            let v = r.sub(
                &r.mul(&x, &r.square(&self.psi[i])),
                &r.mul(&self.psi[i - 1], &self.psi[i + 1]),
            );
            if v.as_x_poly().is_none() {
                return Err(Error::internal(format!("phi_{n} has a nonzero y-part")));
            }
            self.phi.insert(n, v);
        }
        Ok(&self.phi[&n])
    }

    /// `phi_n` as a polynomial in `x`.
    pub fn phi_poly(&mut self, n: u64) -> Result<IntPoly> {
        Ok(self.phi(n)?.f.clone())
    }

    pub fn omega(&mut self, n: u64) -> Result<&CurvePoly> {
        if n < 2 {
            return Err(Error::validation("omega_n is defined for n >= 2"));
        }
        if !self.omega.contains_key(&n) {
            self.fill_to(n + 2)?;
            let r = &self.ring;
            let i = n as usize;
            let p = &self.psi;
            let num = r.sub(
                &r.mul(&r.square(&p[i - 1]), &p[i + 2]),
                &r.mul(&p[i - 2], &r.square(&p[i + 1])),
            );
            let v = r.div_by_scaled_y(&num, &BigInt::from(4)).ok_or_else(|| {
                Error::internal(format!("omega_{n}: numerator not divisible by 4y"))
            })?;
            self.omega.insert(n, v);
        }
        Ok(&self.omega[&n])
    }

    pub fn phi_cached(&self, n: u64) -> Option<&CurvePoly> {
        self.phi.get(&n)
    }

    pub fn omega_cached(&self, n: u64) -> Option<&CurvePoly> {
        self.omega.get(&n)
    }
}

/// `nP` from division-polynomial values.
///
/// Fails with [`Error::TorsionDenominator`] exactly when `psi_n(P) = 0`,
/// which is exactly when the group law gives `nP = O`.
pub fn mul_via_divpolys(cache: &mut DivPolyCache, n: u64, p: &EPoint) -> Result<EPoint> {
    if n < 2 {
        return Err(Error::validation("division-polynomial multiplication needs n >= 2"));
    }
    let (x, y) = match p {
        EPoint::Affine { x, y } => (x, y),
        EPoint::Infinity => {
            return Err(Error::validation("division-polynomial multiplication needs an affine point"))
        }
    };
    cache.curve.check_point(p)?;
    let psi = cache.psi(n)?.eval(x, y);
    if psi.is_zero() {
        return Err(Error::TorsionDenominator { n, x: format_rational(x) });
    }
    let phi = cache.phi(n)?.eval(x, y);
    let omega = cache.omega(n)?.eval(x, y);
    let psi2 = &psi * &psi;
    let psi3 = &psi2 * &psi;
    Ok(EPoint::affine(phi / psi2, omega / psi3))
}

/// `2P` from the closed forms
/// `x(2P) = (x^4 - 2ax^2 - 8bx + a^2) / 4y^2` and
/// `y(2P) = (x^6 + 5ax^4 + 20bx^3 - 5a^2x^2 - 4abx - a^3 - 8b^2) / 8y^3`.
pub fn double_closed_form(curve: &WeierstrassCurve, p: &EPoint) -> Result<EPoint> {
    let (x, y) = match p {
        EPoint::Affine { x, y } => (x, y),
        EPoint::Infinity => return Ok(EPoint::Infinity),
    };
    if y.is_zero() {
        return Err(Error::TorsionDenominator { n: 2, x: format_rational(x) });
    }
    let a = curve.a();
    let b = curve.b();
    let xn = IntPoly::new(vec![a * a, -8 * b, -2 * a, BigInt::zero(), BigInt::one()]);
    let yn = IntPoly::new(vec![
        -a.pow(3) - 8 * b * b,
        -4 * a * b,
        -5 * a * a,
        20 * b,
        5 * a,
        BigInt::zero(),
        BigInt::one(),
    ]);
    let y2 = y * y;
    let four = Rational::from_integer(BigInt::from(4));
    let eight = Rational::from_integer(BigInt::from(8));
    let nx = xn.eval(x) / (&four * &y2);
    let ny = yn.eval(x) / (eight * &y2 * y);
    Ok(EPoint::affine(nx, ny))
}

/// The degree-9 numerator of `x(3P)`, coefficients constant term first.
fn triple_numerator(curve: &WeierstrassCurve) -> IntPoly {
    let a = curve.a();
    let b = curve.b();
    let a3 = a.pow(3);
    let b2 = b * b;
    IntPoly::new(vec![
        8 * b * (&a3 + 8 * &b2),
        3 * a * (3 * &a3 + 32 * &b2),
        48 * a * a * b,
        12 * (3 * &a3 + 4 * &b2),
        -24 * a * b,
        30 * a * a,
        -96 * b,
        -12 * a,
        BigInt::zero(),
        BigInt::one(),
    ])
}

/// `x(3P)` from the degree-9 numerator over `(3x^4 + 6ax^2 + 12bx - a^2)^2`.
pub fn x_triple_closed_form(curve: &WeierstrassCurve, x: &Rational) -> Result<Rational> {
    let a = curve.a();
    let b = curve.b();
    let den = IntPoly::new(vec![-(a * a), 12 * b, 6 * a, BigInt::zero(), BigInt::from(3)]);
    let d = den.eval(x);
    if d.is_zero() {
        return Err(Error::TorsionDenominator { n: 3, x: format_rational(x) });
    }
    Ok(triple_numerator(curve).eval(x) / (&d * &d))
}

/// Degree / leading-coefficient facts about `psi_n^2` and `phi_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeCheck {
    pub n: u64,
    /// `deg psi_n^2 = n^2 - 1` with leading coefficient `n^2`.
    pub psi_sq_degree_and_lead: bool,
    /// `deg phi_n = n^2` with leading coefficient 1.
    pub phi_degree_and_lead: bool,
    /// Coefficient of `x^(n^2-2)` in `psi_n^2` and of `x^(n^2-1)` in `phi_n` vanish.
    pub subleading_vanish: bool,
}

impl DegreeCheck {
    pub fn all_hold(&self) -> bool {
        self.psi_sq_degree_and_lead && self.phi_degree_and_lead && self.subleading_vanish
    }
}

pub fn check_degrees(cache: &mut DivPolyCache, n: u64) -> Result<DegreeCheck> {
    if n < 1 {
        return Err(Error::validation("degree checks need n >= 1"));
    }
    let n2 = (n * n) as usize;
    let n2_big = BigInt::from(n * n);
    let psi_sq = cache.psi_squared(n)?;
    let phi = cache.phi_poly(n)?;
    let psi_ok = psi_sq.degree() == Some(n2 - 1) && psi_sq.leading_coeff() == n2_big;
    let phi_ok = phi.degree() == Some(n2) && phi.leading_coeff().is_one();
    let psi_sub = n2 < 2 || psi_sq.coeff(n2 - 2).is_zero();
    let phi_sub = phi.coeff(n2 - 1).is_zero();
    Ok(DegreeCheck {
        n,
        psi_sq_degree_and_lead: psi_ok,
        phi_degree_and_lead: phi_ok,
        subleading_vanish: psi_sub && phi_sub,
    })
}

fn check_common_divisor(curve: &WeierstrassCurve, d: &BigInt) -> Result<()> {
    check_divides_coeffs(curve.a(), curve.b(), d)
}

fn check_divides_coeffs(a: &BigInt, b: &BigInt, d: &BigInt) -> Result<()> {
    use num_integer::Integer;
    use num_traits::Signed;
    if !d.is_positive() {
        return Err(Error::validation(format!("d must be positive, got {d}")));
    }
    if !a.is_multiple_of(d) || !b.is_multiple_of(d) {
        return Err(Error::validation(format!(
            "d = {d} does not divide both a = {a} and b = {b}"
        )));
    }
    Ok(())
}

/// `psi_n^2 - n^2 x^(n^2-1)` and `phi_n - x^(n^2)`.
fn tails(cache: &mut DivPolyCache, n: u64) -> Result<(IntPoly, IntPoly)> {
    let n2 = (n * n) as usize;
    let psi_tail = &cache.psi_squared(n)? - &IntPoly::monomial(BigInt::from(n * n), n2 - 1);
    let phi_tail = &cache.phi_poly(n)? - &IntPoly::monomial(BigInt::one(), n2);
    Ok((psi_tail, phi_tail))
}

/// Whether `d` divides every coefficient of `psi_n^2 - n^2 x^(n^2-1)` and
/// of `phi_n - x^(n^2)`. Requires `d | a` and `d | b`.
pub fn check_divisibility(cache: &mut DivPolyCache, n: u64, d: &BigInt) -> Result<bool> {
    if n < 1 {
        return Err(Error::validation("divisibility check needs n >= 1"));
    }
    check_common_divisor(&cache.curve, d)?;
    let (psi_tail, phi_tail) = tails(cache, n)?;
    Ok(psi_tail.divisible_by(d) && phi_tail.divisible_by(d))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledIntegrality {
    /// `z^(n^2-3) (psi_n^2 - n^2 x^(n^2-1))` at `x = w/z`.
    pub psi_part: BigInt,
    /// `z^(n^2-2) (phi_n - x^(n^2))` at `x = w/z`.
    pub phi_part: BigInt,
    /// Whether `d` divides each part, when a `d` was supplied.
    pub divisible: Option<(bool, bool)>,
}

impl ScaledIntegrality {
    pub fn divisible_by_d(&self) -> bool {
        self.divisible.is_some_and(|(a, b)| a && b)
    }
}

/// The two tails for a fixed `n`, detached from the cache so they can be
/// evaluated from many threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledTails {
    n: u64,
    a: BigInt,
    b: BigInt,
    psi_tail: IntPoly,
    phi_tail: IntPoly,
}

impl ScaledTails {
    pub fn new(cache: &mut DivPolyCache, n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::validation("scaled integrality needs n >= 2"));
        }
        let (psi_tail, phi_tail) = tails(cache, n)?;
        Ok(ScaledTails {
            n,
            a: cache.curve.a().clone(),
            b: cache.curve.b().clone(),
            psi_tail,
            phi_tail,
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Evaluates the `z`-scaled tails at `x = w/z`. A non-integral result
    /// is an [`Error::Internal`].
    pub fn evaluate(&self, w: &BigInt, z: &BigInt, d: Option<&BigInt>) -> Result<ScaledIntegrality> {
        use num_integer::Integer;
        if w.is_zero() || z.is_zero() {
            return Err(Error::validation("scaled integrality needs w, z != 0"));
        }
        if let Some(d) = d {
            check_divides_coeffs(&self.a, &self.b, d)?;
        }
        let n = self.n;
        let n2 = (n * n) as i32;
        let x = Rational::new(w.clone(), z.clone());
        let zr = Rational::from_integer(z.clone());
        let psi_val = self.psi_tail.eval(&x) * zr.pow(n2 - 3);
        let phi_val = self.phi_tail.eval(&x) * zr.pow(n2 - 2);
        let integer = |v: Rational, what: &str| -> Result<BigInt> {
            if v.denom().is_one() {
                Ok(v.numer().clone())
            } else {
                Err(Error::internal(format!(
                    "{what} at n = {n}, x = {w}/{z} is {}, not an integer",
                    format_rational(&v)
                )))
            }
        };
        let psi_part = integer(psi_val, "scaled psi tail")?;
        let phi_part = integer(phi_val, "scaled phi tail")?;
        let divisible = d.map(|d| (psi_part.is_multiple_of(d), phi_part.is_multiple_of(d)));
        Ok(ScaledIntegrality { psi_part, phi_part, divisible })
    }

    /// `x(nQ)` for `x(Q) = w/z`, reassembled from the scaled tails:
    /// `(z^2 phi_part + w^(n^2)) / (z (z^2 psi_part + n^2 w^(n^2-1)))`.
    pub fn reassemble_x(&self, w: &BigInt, z: &BigInt, s: &ScaledIntegrality) -> Option<Rational> {
        let n2 = (self.n * self.n) as u32;
        let z2 = z * z;
        let num = &z2 * &s.phi_part + w.pow(n2);
        let den = z * (&z2 * &s.psi_part + BigInt::from(n2) * w.pow(n2 - 1));
        (!den.is_zero()).then(|| Rational::new(num, den))
    }
}

/// Evaluates the `z`-scaled tails at `x = w/z` for a single `(n, w, z)`.
pub fn scaled_integrality(
    cache: &mut DivPolyCache,
    n: u64,
    w: &BigInt,
    z: &BigInt,
    d: Option<&BigInt>,
) -> Result<ScaledIntegrality> {
    ScaledTails::new(cache, n)?.evaluate(w, z, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::curves::{canonical_points, HolmParams};
    use crate::group_law;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(int(n), int(d))
    }

    fn holm(k: i64, l: i64) -> WeierstrassCurve {
        WeierstrassCurve::from_params(&HolmParams::new(k, l).unwrap())
    }

    #[test]
    fn base_cases() {
        let mut c = DivPolyCache::new(&holm(1, 2));
        assert_eq!(c.psi(0).unwrap(), &CurvePoly::default());
        assert_eq!(c.psi(1).unwrap(), &CurvePoly::from_x(IntPoly::from_i64s(&[1])));
        assert_eq!(c.psi(2).unwrap(), &CurvePoly::from_y(IntPoly::from_i64s(&[2])));
        assert_eq!(
            c.psi(3).unwrap(),
            &CurvePoly::from_x(IntPoly::from_i64s(&[-144, 240, -72, 0, 3]))
        );
    }

    #[test]
    fn psi5_from_recurrence() {
        let curve = holm(1, 2);
        let mut c = DivPolyCache::new(&curve);
        let r = CoordinateRing::new(&curve);
        let p = |i: u64, c: &mut DivPolyCache| c.psi(i).unwrap().clone();
        let expect = r.sub(
            &r.mul(&p(4, &mut c), &r.cube(&p(2, &mut c))),
            &r.mul(&p(1, &mut c), &r.cube(&p(3, &mut c))),
        );
        assert_eq!(c.psi(5).unwrap(), &expect);
        let sq = c.psi_squared(5).unwrap();
        assert_eq!(sq.degree(), Some(24));
        assert_eq!(sq.leading_coeff(), int(25));
    }

    #[test]
    fn phi_examples() {
        let mut c = DivPolyCache::new(&holm(1, 2));
        assert_eq!(c.phi_poly(1).unwrap(), IntPoly::x());
        // x^4 - 2ax^2 - 8bx + a^2 at (a, b) = (-12, 20)
        assert_eq!(c.phi_poly(2).unwrap(), IntPoly::from_i64s(&[144, -160, 24, 0, 1]));
        assert!(c.phi(0).is_err());
    }

    #[test]
    fn low_index_definitions_agree_with_closed_forms() {
        // phi_2 fixes psi_3 and omega_2 = psi_4 / 4y fixes psi_4, against the
        // x(2P), y(2P) numerators.
        for (k, l) in [(1, 2), (3, 1), (5, 6)] {
            let curve = holm(k, l);
            let (a, b) = (curve.a().clone(), curve.b().clone());
            let mut c = DivPolyCache::new(&curve);
            let xn = IntPoly::new(vec![&a * &a, -8 * &b, -2 * &a, int(0), int(1)]);
            assert_eq!(c.phi_poly(2).unwrap(), xn);
            let yn = IntPoly::new(vec![
                -a.pow(3) - 8 * &b * &b,
                -4 * &a * &b,
                -5 * &a * &a,
                20 * &b,
                5 * &a,
                int(0),
                int(1),
            ]);
            assert_eq!(c.omega(2).unwrap(), &CurvePoly::from_x(yn));
        }
    }

    #[test]
    fn omega_normalization_matches_group_law() {
        let curve = holm(1, 2);
        let mut c = DivPolyCache::new(&curve);
        let p = EPoint::from_ints(1, -3);
        let omega = c.omega(2).unwrap().eval(&rat(1), &rat(-3));
        assert_eq!(omega, rat(-891));
        let psi = c.psi(2).unwrap().eval(&rat(1), &rat(-3));
        assert_eq!(&omega / psi.pow(3), q(33, 8));
        assert_eq!(mul_via_divpolys(&mut c, 2, &p).unwrap(), EPoint::affine(q(1, 4), q(33, 8)));
        // n = 3 on both signs of y
        for p in canonical_points(&HolmParams::new(1, 2).unwrap()) {
            assert_eq!(
                mul_via_divpolys(&mut c, 3, &p).unwrap(),
                group_law::scalar_mul(&curve, 3, &p)
            );
        }
    }

    #[test]
    fn divpoly_multiples_match_group_law() {
        for (k, l) in [(1, 2), (3, 1), (2, 5)] {
            let params = HolmParams::new(k, l).unwrap();
            let curve = WeierstrassCurve::from_params(&params);
            let mut c = DivPolyCache::new(&curve);
            for p in canonical_points(&params) {
                for n in 2..=8 {
                    let lhs = mul_via_divpolys(&mut c, n, &p).unwrap();
                    assert_eq!(lhs, group_law::scalar_mul(&curve, n as i64, &p), "n={n}");
                }
            }
        }
    }

    #[test]
    fn mul_preconditions() {
        let mut c = DivPolyCache::new(&holm(1, 2));
        assert!(matches!(mul_via_divpolys(&mut c, 2, &EPoint::Infinity), Err(Error::Validation(_))));
        assert!(matches!(
            mul_via_divpolys(&mut c, 2, &EPoint::from_ints(1, 2)),
            Err(Error::Validation(_))
        ));
        assert!(mul_via_divpolys(&mut c, 1, &EPoint::from_ints(1, 3)).is_err());
    }

    #[test]
    fn torsion_denominator_exactly_when_group_law_hits_infinity() {
        // y^2 = x^3 + 1: (2, 3) has order 6.
        let curve = WeierstrassCurve::new(int(0), int(1)).unwrap();
        let mut c = DivPolyCache::new(&curve);
        let p = EPoint::from_ints(2, 3);
        for n in 2..=13u64 {
            let gl = group_law::scalar_mul(&curve, n as i64, &p);
            match mul_via_divpolys(&mut c, n, &p) {
                Err(Error::TorsionDenominator { n: m, .. }) => {
                    assert_eq!(m, n);
                    assert!(gl.is_infinity(), "n={n}");
                }
                Ok(v) => assert_eq!(v, gl, "n={n}"),
                Err(e) => panic!("{e}"),
            }
        }
        assert!(matches!(mul_via_divpolys(&mut c, 6, &p), Err(Error::TorsionDenominator { .. })));
    }

    #[test]
    fn closed_form_doubling() {
        let curve = holm(1, 2);
        assert_eq!(
            double_closed_form(&curve, &EPoint::from_ints(1, -3)).unwrap(),
            EPoint::affine(q(1, 4), q(33, 8))
        );
        assert_eq!(
            double_closed_form(&curve, &EPoint::from_ints(4, 6)).unwrap(),
            EPoint::from_ints(1, 3)
        );
    }

    #[test]
    fn closed_form_tripling() {
        let c31 = holm(3, 1);
        let p = EPoint::from_ints(9, 24);
        let gl = group_law::scalar_mul(&c31, 3, &p);
        assert_eq!(&x_triple_closed_form(&c31, &rat(9)).unwrap(), gl.x().unwrap());
        let c12 = holm(1, 2);
        let gl = group_law::scalar_mul(&c12, 3, &EPoint::from_ints(1, -3));
        assert_eq!(&x_triple_closed_form(&c12, &rat(1)).unwrap(), gl.x().unwrap());
    }

    #[test]
    fn closed_form_tripling_is_phi3_over_psi3_squared() {
        // as rational functions: N * psi_3^2 == phi_3 * D^2, with D = psi_3
        for (k, l) in [(1, 2), (3, 5)] {
            let curve = holm(k, l);
            let mut c = DivPolyCache::new(&curve);
            let psi3 = c.psi(3).unwrap().f.clone();
            let phi3 = c.phi_poly(3).unwrap();
            let num = triple_numerator(&curve);
            assert_eq!(num, phi3);
            assert_eq!(&num * &c.psi_squared(3).unwrap(), &phi3 * &(&psi3 * &psi3));
        }
    }

    #[test]
    fn divisibility_examples() {
        let mut c = DivPolyCache::new(&holm(1, 2));
        assert!(check_divisibility(&mut c, 3, &int(4)).unwrap());
        assert!(check_divisibility(&mut c, 7, &int(1)).unwrap());
        assert!(matches!(check_divisibility(&mut c, 3, &int(3)), Err(Error::Validation(_))));
        let mut c = DivPolyCache::new(&holm(3, 1));
        assert!(check_divisibility(&mut c, 5, &int(9)).unwrap());
    }

    #[test]
    fn scaled_integrality_examples() {
        let mut c = DivPolyCache::new(&holm(1, 2));
        let s = scaled_integrality(&mut c, 2, &int(1), &int(4), Some(&int(4))).unwrap();
        // z (4a x + 4b) at x = 1/4: 4(-12) + 4*20*4 = 272
        assert_eq!(s.psi_part, int(272));
        assert!(s.divisible_by_d());

        let mut c = DivPolyCache::new(&holm(3, 1));
        let s = scaled_integrality(&mut c, 3, &int(9), &int(1), Some(&int(9))).unwrap();
        let (pt, ft) = tails(&mut c, 3).unwrap();
        assert_eq!(s.psi_part, pt.eval_int(&int(9)));
        assert_eq!(s.phi_part, ft.eval_int(&int(9)));
        assert!(s.divisible_by_d());

        let mut c = DivPolyCache::new(&holm(1, 3));
        for (w, z) in [(2, 3), (-5, 7), (11, -4)] {
            let s = scaled_integrality(&mut c, 5, &int(w), &int(z), Some(&int(9))).unwrap();
            assert!(s.divisible_by_d(), "w/z = {w}/{z}");
        }
        assert!(scaled_integrality(&mut c, 5, &int(0), &int(1), None).is_err());
    }

    #[test]
    fn reassembled_multiple_matches_group_law() {
        let params = HolmParams::new(5, 1).unwrap();
        let curve = WeierstrassCurve::from_params(&params);
        let mut c = DivPolyCache::new(&curve);
        let tails5 = ScaledTails::new(&mut c, 5).unwrap();
        let p3 = group_law::scalar_mul(&curve, 3, &EPoint::from_ints(25, 120));
        let x3 = p3.x().unwrap();
        let s = tails5.evaluate(x3.numer(), x3.denom(), Some(&params.kl_squared())).unwrap();
        assert!(s.divisible_by_d());
        let x15 = group_law::scalar_mul(&curve, 15, &EPoint::from_ints(25, 120));
        assert_eq!(tails5.reassemble_x(x3.numer(), x3.denom(), &s).as_ref(), x15.x());
    }

    #[test]
    fn degree_facts_small_n() {
        let mut c = DivPolyCache::new(&holm(2, 3));
        for n in 1..=8 {
            assert!(check_degrees(&mut c, n).unwrap().all_hold(), "n={n}");
        }
    }

    #[test]
    fn psi_parity() {
        let mut c = DivPolyCache::new(&holm(1, 2));
        for n in 1..=14u64 {
            let p = c.psi(n).unwrap();
            if n % 2 == 0 {
                assert!(p.f.is_zero() && !p.g.is_zero());
            } else {
                assert!(p.g.is_zero() && !p.f.is_zero());
            }
        }
    }
}
