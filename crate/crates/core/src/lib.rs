//! Exact arithmetic on the Holm curve `k(y^3 - y) = l(x^3 - x)` and its
//! short Weierstrass model `y^2 = x^3 - 3k^2l^2 x + k^2l^2(k^2 + l^2)`.
//!
//! The crate provides the birational group isomorphism between the two
//! curves, the chord-tangent group law, division polynomials over the
//! coordinate ring, p-adic valuations, and a certifier that proves, one
//! `(k, l)` pair at a time, that the rational points of the Holm curve have
//! no torsion.
//!
//! Everything is computed over exact integers and rationals. There is no
//! floating-point path.
//!
//! Data-parallel loops (integral-point scans, candidate certification,
//! lemma batteries) run on rayon when the `parallel` feature is enabled and
//! fall back to plain iterators otherwise; see [`Strategy`].

pub mod arith;
pub mod curves;
pub mod division_polys;
pub mod error;
pub mod exec;
pub mod group_law;
pub mod isomorphism;
pub mod poly;
pub mod torsion;

pub use arith::{Rational, Valuation};
pub use curves::{EPoint, HPoint, HolmParams, WeierstrassCurve};
pub use division_polys::{CurvePoly, DivPolyCache};
pub use error::{Error, Result};
pub use exec::Strategy;
pub use torsion::{Conclusion, LemmaReport, TorsionCertificate};
