//! Chord-tangent group law on `E(Q)`, scalar multiplication, and the group
//! law on `H(Q)` transported through [`gamma`](crate::isomorphism::gamma).

use num_bigint::BigInt;
use num_traits::Zero;

use crate::arith::Rational;
use crate::curves::{EPoint, HPoint, HolmParams, WeierstrassCurve};
use crate::error::Result;
use crate::isomorphism::{gamma, gamma_inv};

/// Bound on the order of a rational torsion point over `Q`.
pub const MAZUR_BOUND: u32 = 12;

pub fn negate(p: &EPoint) -> EPoint {
    match p {
        EPoint::Infinity => EPoint::Infinity,
        EPoint::Affine { x, y } => EPoint::affine(x.clone(), -y),
    }
}

pub fn add(curve: &WeierstrassCurve, p: &EPoint, q: &EPoint) -> EPoint {
    let (x1, y1, x2, y2) = match (p, q) {
        (EPoint::Infinity, _) => return q.clone(),
        (_, EPoint::Infinity) => return p.clone(),
        (EPoint::Affine { x: x1, y: y1 }, EPoint::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
    };
    let slope = if x1 != x2 {
        (y2 - y1) / (x2 - x1)
    } else if y1 == y2 && !y1.is_zero() {
        tangent_slope(curve, x1, y1)
    } else {
        // vertical chord, or tangent at a 2-torsion point
        return EPoint::Infinity;
    };
    chord_point(&slope, x1, y1, x2)
}

pub fn double(curve: &WeierstrassCurve, p: &EPoint) -> EPoint {
    match p {
        EPoint::Infinity => EPoint::Infinity,
        EPoint::Affine { y, .. } if y.is_zero() => EPoint::Infinity,
        EPoint::Affine { x, y } => chord_point(&tangent_slope(curve, x, y), x, y, x),
    }
}

fn tangent_slope(curve: &WeierstrassCurve, x: &Rational, y: &Rational) -> Rational {
    let a = Rational::from_integer(curve.a().clone());
    (Rational::from_integer(BigInt::from(3)) * x * x + a) / (y + y)
}

fn chord_point(slope: &Rational, x1: &Rational, y1: &Rational, x2: &Rational) -> EPoint {
    let x3 = slope * slope - x1 - x2;
    let y3 = slope * (x1 - &x3) - y1;
    EPoint::affine(x3, y3)
}

/// `n * p` by left-to-right double-and-add; negative `n` negates first.
pub fn scalar_mul(curve: &WeierstrassCurve, n: i64, p: &EPoint) -> EPoint {
    let base = if n < 0 { negate(p) } else { p.clone() };
    let m = n.unsigned_abs();
    if m == 0 {
        return EPoint::Infinity;
    }
    let mut acc = base.clone();
    for bit in (0..(63 - m.leading_zeros())).rev() {
        acc = double(curve, &acc);
        if (m >> bit) & 1 == 1 {
            acc = add(curve, &acc, &base);
        }
    }
    acc
}

/// Least `m` in `1..=max_order` with `m p = O`.
pub fn order_upto(curve: &WeierstrassCurve, p: &EPoint, max_order: u32) -> Option<u32> {
    let mut acc = p.clone();
    for m in 1..=max_order {
        if acc.is_infinity() {
            return Some(m);
        }
        acc = add(curve, &acc, p);
    }
    None
}

pub fn h_add(params: &HolmParams, p: &HPoint, q: &HPoint) -> Result<HPoint> {
    let curve = WeierstrassCurve::from_params(params);
    let s = add(&curve, &gamma(params, p)?, &gamma(params, q)?);
    gamma_inv(params, &s)
}

pub fn h_negate(params: &HolmParams, p: &HPoint) -> Result<HPoint> {
    gamma_inv(params, &negate(&gamma(params, p)?))
}

pub fn h_scalar_mul(params: &HolmParams, n: i64, p: &HPoint) -> Result<HPoint> {
    let curve = WeierstrassCurve::from_params(params);
    gamma_inv(params, &scalar_mul(&curve, n, &gamma(params, p)?))
}
