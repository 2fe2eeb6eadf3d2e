//! The group isomorphism `gamma: H(Q) -> E(Q)` and its inverse.
//!
//! ```text
//! gamma(x, y)     = ( kl(kx - ly) / (lx - ky),  kl(k^2 - l^2) / (lx - ky) )
//! gamma^-1(x, y)  = ( k(x - l^2) / y,           l(x - k^2) / y )
//! ```
//!
//! `(0, 0)` on `H` corresponds to the point at infinity on `E`.
//!
//! On `H`, `lx = ky` only at `(0, 0)`: substituting `y = lx/k` into
//! `k(y^3 - y) = l(x^3 - x)` leaves `l(l^2 - k^2) x^3 / k^2 = 0`, and
//! `k != l`, so `x = 0` and then `y = 0`. Hitting a zero denominator at any
//! other point is reported as [`Error::Internal`].

use num_traits::Zero;

use crate::arith::Rational;
use crate::curves::{EPoint, HPoint, HolmParams};
use crate::error::{Error, Result};

pub fn gamma(params: &HolmParams, p: &HPoint) -> Result<EPoint> {
    if !params.contains(p) {
        return Err(Error::validation(format!("{p} is not on the Holm curve {params}")));
    }
    if p.is_identity() {
        return Ok(EPoint::Infinity);
    }
    let k = Rational::from_integer(params.k_big());
    let l = Rational::from_integer(params.l_big());
    let den = &l * &p.x - &k * &p.y;
    if den.is_zero() {
        return Err(Error::internal(format!(
            "lx - ky vanished at the non-identity point {p} of {params}"
        )));
    }
    let kl = &k * &l;
    let x = &kl * (&k * &p.x - &l * &p.y) / &den;
    let y = &kl * (&k * &k - &l * &l) / &den;
    Ok(EPoint::affine(x, y))
}

pub fn gamma_inv(params: &HolmParams, p: &EPoint) -> Result<HPoint> {
    let (x, y) = match p {
        EPoint::Infinity => return Ok(HPoint::identity()),
        EPoint::Affine { x, y } => (x, y),
    };
    let curve = crate::curves::WeierstrassCurve::from_params(params);
    if !curve.contains(p) {
        return Err(Error::validation(format!("{p} is not on {curve}")));
    }
    if y.is_zero() {
        return Err(Error::contradiction(format!(
            "rational point {p} with y = 0 on the curve of {params}"
        )));
    }
    let k = Rational::from_integer(params.k_big());
    let l = Rational::from_integer(params.l_big());
    let hx = &k * (x - &l * &l) / y;
    let hy = &l * (x - &k * &k) / y;
    Ok(HPoint::new(hx, hy))
}
