//! Valuation verifiers for the three non-integrality lemmas, Nagell–Lutz
//! candidate enumeration, and the per-`(k, l)` torsion-freeness certificate.
//!
//! Every rational torsion point of `E` is integral (Nagell–Lutz), so it is
//! enough to show that each integral point has a non-integral multiple:
//!
//! | lemma | hypothesis         | observed quantity  | relation                                  | witness      |
//! |-------|--------------------|--------------------|-------------------------------------------|--------------|
//! | 1     | `2 \| kl`          | `v_2(x(2P))`       | `0 / 2 / -2` for `v_2(x) >= 2 / = 1 / = 0` | `8P`         |
//! | 2     | odd `p \| kl`      | `v_p(x(3P))`       | `<= -2` if `p = 3`, else `<= 0`           | `3P` (p = 3) |
//! | 3     | `p >= 5`, `p \| kl`| `v_p(x(3pP))`      | `<= -2`                                   | `3pP`        |

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, format_rational, Factorizer, Rational, Valuation};
use crate::curves::{self, EPoint, HolmParams, WeierstrassCurve};
use crate::division_polys::{self, DivPolyCache, ScaledTails};
use crate::error::{Error, Result};
use crate::exec::Strategy;
use crate::group_law::{self, MAZUR_BOUND};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LemmaId {
    One,
    Two,
    Three,
}

impl LemmaId {
    pub fn number(self) -> u8 {
        match self {
            LemmaId::One => 1,
            LemmaId::Two => 2,
            LemmaId::Three => 3,
        }
    }
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lemma {}", self.number())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Confirmed,
    Violated,
}

impl Verdict {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Confirmed
        } else {
            Verdict::Violated
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Confirmed => "CONFIRMED",
            Verdict::Violated => "VIOLATED",
        })
    }
}

/// The relation a lemma asserts about the observed valuation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Claim {
    Exactly(i64),
    AtMost(i64),
}

impl Claim {
    pub fn holds(self, v: Valuation) -> bool {
        match (self, v) {
            (_, Valuation::Infinite) => false,
            (Claim::Exactly(c), Valuation::Finite(v)) => v == c,
            (Claim::AtMost(c), Valuation::Finite(v)) => v <= c,
        }
    }

    pub fn value(self) -> i64 {
        match self {
            Claim::Exactly(c) | Claim::AtMost(c) => c,
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Claim::Exactly(c) => write!(f, "= {c}"),
            Claim::AtMost(c) => write!(f, "<= {c}"),
        }
    }
}

/// `mP` offered as evidence that `P` has a non-integral multiple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub multiple: u64,
    pub point: EPoint,
    /// `v_prime(x(mP))`; `None` when `mP` is the point at infinity.
    pub valuation: Option<Valuation>,
}

impl Witness {
    fn new(multiple: u64, point: EPoint, prime: u64) -> Self {
        let valuation = point.x().map(|x| arith::vp_unchecked(x, prime));
        Witness { multiple, point, valuation }
    }

    pub fn is_non_integral(&self) -> bool {
        !self.point.is_infinity() && !self.point.is_integral()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaReport {
    pub lemma: LemmaId,
    pub point: EPoint,
    pub prime: u64,
    /// The multiple whose `x`-coordinate the claim is about (2, 3 or 3p).
    pub multiple_used: u64,
    pub observed_valuation: Valuation,
    pub claim: Claim,
    pub verdict: Verdict,
    /// The non-integral multiple the lemma's corollary promises, if any.
    pub witness: Option<Witness>,
    /// For lemma 3, whether the scaled division-polynomial tails at
    /// `x(3P)` were integral, divisible by `k^2 l^2`, and reassembled
    /// to `x(3pP)`.
    pub tails_crosscheck: Option<bool>,
}

impl LemmaReport {
    /// Valuation relation holds, the promised witness (if any) is
    /// non-integral, and any cross-check passed.
    pub fn confirmed(&self) -> bool {
        self.verdict == Verdict::Confirmed
            && self.witness.as_ref().is_none_or(Witness::is_non_integral)
            && self.tails_crosscheck != Some(false)
    }

    pub fn to_document(&self) -> LemmaDoc {
        LemmaDoc {
            lemma: self.lemma.number(),
            point: PointDoc::from(&self.point),
            prime: self.prime.to_string(),
            multiple_used: self.multiple_used.to_string(),
            observed_valuation: self.observed_valuation,
            claim: self.claim.to_string(),
            verdict: self.verdict,
            witness_multiple: self.witness.as_ref().map(|w| w.multiple.to_string()),
            witness_x: self.witness.as_ref().map(|w| point_x_string(&w.point)),
            witness_non_integral: self.witness.as_ref().map(Witness::is_non_integral),
            tails_crosscheck: self.tails_crosscheck,
            confirmed: self.confirmed(),
        }
    }
}

fn point_x_string(p: &EPoint) -> String {
    p.x().map_or_else(|| "INFINITY".to_string(), format_rational)
}

fn holm_params(curve: &WeierstrassCurve) -> Result<HolmParams> {
    curve
        .params()
        .copied()
        .ok_or_else(|| Error::validation(format!("{curve} is not derived from Holm parameters")))
}

fn check_integral_on_curve(curve: &WeierstrassCurve, p: &EPoint) -> Result<()> {
    curve.check_point(p)?;
    if !p.is_integral() {
        return Err(Error::validation(format!("{p} is not an integral point")));
    }
    Ok(())
}

fn x_of(p: &EPoint, what: &str) -> Result<Rational> {
    p.x().cloned().ok_or_else(|| {
        Error::contradiction(format!("{what} is the point at infinity (a torsion point)"))
    })
}

/// Expected `v_2(x(2P))` from `v_2(x)`.
pub fn lemma1_expected(v2_x: Valuation) -> i64 {
    match v2_x {
        Valuation::Finite(0) => -2,
        Valuation::Finite(1) => 2,
        _ => 0,
    }
}

pub fn lemma1_check(curve: &WeierstrassCurve, p: &EPoint) -> Result<LemmaReport> {
    let params = holm_params(curve)?;
    if (params.k() * params.l()) % 2 != 0 {
        return Err(Error::validation(format!("Lemma 1 needs 2 | kl, got {params}")));
    }
    check_integral_on_curve(curve, p)?;
    let x = p.x().expect("integral points are affine");
    let expected = lemma1_expected(arith::vp_unchecked(x, 2));
    let x2 = x_of(&group_law::double(curve, p), "2P")?;
    let observed = arith::vp_unchecked(&x2, 2);
    let claim = Claim::Exactly(expected);
    let p8 = group_law::scalar_mul(curve, 8, p);
    Ok(LemmaReport {
        lemma: LemmaId::One,
        point: p.clone(),
        prime: 2,
        multiple_used: 2,
        observed_valuation: observed,
        claim,
        verdict: Verdict::from_bool(claim.holds(observed)),
        witness: Some(Witness::new(8, p8, 2)),
        tails_crosscheck: None,
    })
}

fn check_prime_divides(params: &HolmParams, q: u64) -> Result<()> {
    if !arith::is_prime(q) {
        return Err(Error::validation(format!("{q} is not prime")));
    }
    if !(params.k() * params.l()).is_multiple_of(q) {
        return Err(Error::validation(format!("{q} does not divide kl for {params}")));
    }
    Ok(())
}

pub fn lemma2_check(curve: &WeierstrassCurve, p: &EPoint, q: u64) -> Result<LemmaReport> {
    let params = holm_params(curve)?;
    if q.is_multiple_of(2) {
        return Err(Error::validation(format!("Lemma 2 needs an odd prime, got {q}")));
    }
    check_prime_divides(&params, q)?;
    check_integral_on_curve(curve, p)?;
    let p3 = group_law::scalar_mul(curve, 3, p);
    let x3 = x_of(&p3, "3P")?;
    let closed = division_polys::x_triple_closed_form(curve, p.x().expect("affine"))?;
    if closed != x3 {
        return Err(Error::internal(format!(
            "x(3P) for P = {p}: group law gives {}, closed form gives {}",
            format_rational(&x3),
            format_rational(&closed)
        )));
    }
    let observed = arith::vp_unchecked(&x3, q);
    let claim = Claim::AtMost(if q == 3 { -2 } else { 0 });
    Ok(LemmaReport {
        lemma: LemmaId::Two,
        point: p.clone(),
        prime: q,
        multiple_used: 3,
        observed_valuation: observed,
        claim,
        verdict: Verdict::from_bool(claim.holds(observed)),
        witness: (q == 3).then(|| Witness::new(3, p3, q)),
        tails_crosscheck: None,
    })
}

pub fn lemma3_check(curve: &WeierstrassCurve, p: &EPoint, q: u64) -> Result<LemmaReport> {
    lemma3_inner(curve, p, q, None)
}

/// [`lemma3_check`] plus a cross-check through the scaled division
/// polynomial tails for `n = q` evaluated at `x(3P)`.
pub fn lemma3_check_with_tails(
    curve: &WeierstrassCurve,
    p: &EPoint,
    q: u64,
    tails: &ScaledTails,
) -> Result<LemmaReport> {
    if tails.n() != q {
        return Err(Error::validation(format!("tails are for n = {}, not {q}", tails.n())));
    }
    lemma3_inner(curve, p, q, Some(tails))
}

fn lemma3_inner(
    curve: &WeierstrassCurve,
    p: &EPoint,
    q: u64,
    tails: Option<&ScaledTails>,
) -> Result<LemmaReport> {
    let params = holm_params(curve)?;
    if q < 5 {
        return Err(Error::validation(format!("Lemma 3 needs a prime >= 5, got {q}")));
    }
    check_prime_divides(&params, q)?;
    check_integral_on_curve(curve, p)?;
    let m = 3 * q;
    let pm = group_law::scalar_mul(curve, m as i64, p);
    let xm = x_of(&pm, "3pP")?;
    let observed = arith::vp_unchecked(&xm, q);
    let claim = Claim::AtMost(-2);

    let tails_crosscheck = match tails {
        None => None,
        Some(t) => {
            let x3 = x_of(&group_law::scalar_mul(curve, 3, p), "3P")?;
            let (w, z) = (x3.numer(), x3.denom());
            let s = t.evaluate(w, z, Some(&params.kl_squared()))?;
            let rebuilt = t.reassemble_x(w, z, &s);
            Some(s.divisible_by_d() && rebuilt.as_ref() == Some(&xm))
        }
    };

    Ok(LemmaReport {
        lemma: LemmaId::Three,
        point: p.clone(),
        prime: q,
        multiple_used: m,
        observed_valuation: observed,
        claim,
        verdict: Verdict::from_bool(claim.holds(observed)),
        witness: Some(Witness::new(m, pm, q)),
        tails_crosscheck,
    })
}

/// Which lemma certifies non-integrality for this `(k, l)`: Lemma 1 if
/// `2 | kl`, else Lemma 2 with `p = 3` if `3 | kl`, else Lemma 3 with the
/// smallest prime `>= 5` dividing `kl`.
pub fn dispatch(params: &HolmParams) -> (LemmaId, u64) {
    let primes = params.primes_dividing_kl();
    if primes.contains(&2) {
        (LemmaId::One, 2)
    } else if primes.contains(&3) {
        (LemmaId::Two, 3)
    } else {
        // kl >= 2 because k != l, so some prime divides it.
        let q = *primes.iter().find(|&&p| p >= 5).expect("kl >= 2 has a prime factor");
        (LemmaId::Three, q)
    }
}

/// Runs the given lemma at `p` with `prime`.
pub fn run_lemma(
    curve: &WeierstrassCurve,
    p: &EPoint,
    lemma: LemmaId,
    prime: u64,
) -> Result<LemmaReport> {
    match lemma {
        LemmaId::One => lemma1_check(curve, p),
        LemmaId::Two => lemma2_check(curve, p, prime),
        LemmaId::Three => lemma3_check(curve, p, prime),
    }
}

/// Integer roots of `x^3 + ax + c`, ascending.
///
/// All real roots lie in `[-B, B]` with `B = 1 + max(|a|, |c|)`. The cubic
/// is monotone on `[-B, -t-1]`, `[-t, t]` and `[t+1, B]` where `t` is the
/// largest integer with `3t^2 <= -a` (one interval when `a >= 0`), so each
/// piece is binary searched.
pub fn integer_roots_depressed_cubic(a: &BigInt, c: &BigInt) -> Vec<BigInt> {
    let f = |x: &BigInt| x * x * x + a * x + c;
    let bound = BigInt::from(1) + a.abs().max(c.abs());
    let mut pieces: Vec<(BigInt, BigInt, bool)> = Vec::new();
    if !a.is_negative() {
        pieces.push((-bound.clone(), bound, true));
    } else {
        let t: BigInt = (-a / BigInt::from(3)).sqrt();
        pieces.push((-bound.clone(), -&t - 1, true));
        pieces.push((-t.clone(), t.clone(), false));
        pieces.push((t + 1, bound, true));
    }
    let mut roots = Vec::new();
    for (lo, hi, increasing) in pieces {
        if lo > hi {
            continue;
        }
        let (mut lo, mut hi) = (lo, hi);
        while lo <= hi {
            let mid: BigInt = (&lo + &hi).div_floor(&BigInt::from(2));
            let v = f(&mid);
            if v.is_zero() {
                roots.push(mid);
                break;
            }
            if v.is_negative() == increasing {
                lo = mid + 1;
            } else {
                hi = mid - 1;
            }
        }
    }
    roots.sort();
    roots.dedup();
    roots
}

/// Integral points with `y = 0` or `y^2 | Δ`, `Δ = -16(4a^3 + 27b^2)`.
/// Every rational torsion point is among them. Sorted by `x` then `y`.
pub fn nagell_lutz_candidates(curve: &WeierstrassCurve) -> Result<Vec<EPoint>> {
    nagell_lutz_candidates_with(curve, &Factorizer::default())
}

pub fn nagell_lutz_candidates_with(
    curve: &WeierstrassCurve,
    factorizer: &Factorizer,
) -> Result<Vec<EPoint>> {
    let disc = curve.discriminant().abs();
    let factors = factorizer.factorize(&disc)?;
    // y^2 | Δ  <=>  y | prod p^(e/2)
    let halved: Vec<_> = factors.iter().map(|(p, e)| (p.clone(), e / 2)).collect();
    let mut ys: Vec<BigInt> = vec![BigInt::zero()];
    ys.extend(arith::divisors(&halved).into_iter().map(BigInt::from));

    let mut out = Vec::new();
    for y in ys {
        let c = curve.b() - &y * &y;
        for x in integer_roots_depressed_cubic(curve.a(), &c) {
            let xr = Rational::from_integer(x);
            if y.is_zero() {
                out.push(EPoint::affine(xr, Rational::zero()));
            } else {
                out.push(EPoint::affine(xr.clone(), Rational::from_integer(-y.clone())));
                out.push(EPoint::affine(xr, Rational::from_integer(y.clone())));
            }
        }
    }
    out.sort_by(|p, q| (p.x(), p.y()).cmp(&(q.x(), q.y())));
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Conclusion {
    TorsionFreeConfirmed,
    CounterexampleFound,
}

impl fmt::Display for Conclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Conclusion::TorsionFreeConfirmed => "TORSION_FREE_CONFIRMED",
            Conclusion::CounterexampleFound => "COUNTEREXAMPLE_FOUND",
        })
    }
}

/// Evidence for one Nagell–Lutz candidate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateEvidence {
    pub point: EPoint,
    pub lemma: LemmaId,
    pub prime: u64,
    /// `Err` holds the message when the lemma check itself hit a
    /// contradiction (e.g. a multiple collapsed to infinity).
    pub report: std::result::Result<LemmaReport, String>,
    /// Least order `<= max_order`, if the point is torsion of small order.
    pub order: Option<u32>,
}

impl CandidateEvidence {
    pub fn certified(&self) -> bool {
        self.order.is_none() && self.report.as_ref().is_ok_and(LemmaReport::confirmed)
    }

    pub fn witness(&self) -> Option<&Witness> {
        self.report.as_ref().ok().and_then(|r| r.witness.as_ref())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CertifyOptions {
    pub max_order: u32,
    pub strategy: Strategy,
    pub factorizer: Factorizer,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            max_order: MAZUR_BOUND,
            strategy: Strategy::default(),
            factorizer: Factorizer::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsionCertificate {
    pub params: HolmParams,
    pub curve: WeierstrassCurve,
    pub discriminant: BigInt,
    pub max_order: u32,
    pub candidates: Vec<CandidateEvidence>,
    pub conclusion: Conclusion,
}

pub fn certify_torsion_free(params: &HolmParams) -> Result<TorsionCertificate> {
    certify_torsion_free_with(params, &CertifyOptions::default())
}

pub fn certify_torsion_free_with(
    params: &HolmParams,
    opts: &CertifyOptions,
) -> Result<TorsionCertificate> {
    let curve = WeierstrassCurve::from_params(params);
    let candidates = nagell_lutz_candidates_with(&curve, &opts.factorizer)?;
    let (lemma, prime) = dispatch(params);

    let evidence = opts.strategy.try_map(&candidates, |p| -> Result<CandidateEvidence> {
        let report = match run_lemma(&curve, p, lemma, prime) {
            Ok(r) => Ok(r),
            Err(Error::Contradiction(msg)) => Err(msg),
            Err(e) => return Err(e),
        };
        let order = group_law::order_upto(&curve, p, opts.max_order);
        Ok(CandidateEvidence { point: p.clone(), lemma, prime, report, order })
    })?;

    let conclusion = if evidence.iter().all(CandidateEvidence::certified) {
        Conclusion::TorsionFreeConfirmed
    } else {
        Conclusion::CounterexampleFound
    };
    Ok(TorsionCertificate {
        params: *params,
        discriminant: curve.discriminant(),
        curve,
        max_order: opts.max_order,
        candidates: evidence,
        conclusion,
    })
}

/// Runs every applicable lemma on every integral point with `|x| <= x_bound`.
///
/// Lemma 1 when `2 | kl`; Lemma 2 for each odd prime dividing `kl`; Lemma 3
/// (with the division-polynomial cross-check) for each prime `>= 5`.
/// Reports are ordered by point, then lemma, then prime.
pub fn lemma_battery(
    params: &HolmParams,
    x_bound: &BigInt,
    strategy: Strategy,
) -> Result<Vec<LemmaReport>> {
    let curve = WeierstrassCurve::from_params(params);
    let points = curves::find_integral_points(&curve, x_bound, strategy)?;
    let primes = params.primes_dividing_kl();

    let mut cache = DivPolyCache::new(&curve);
    let tails: Vec<ScaledTails> = primes
        .iter()
        .filter(|&&q| q >= 5)
        .map(|&q| ScaledTails::new(&mut cache, q))
        .collect::<Result<_>>()?;

    let per_point = strategy.try_map(&points, |p| -> Result<Vec<LemmaReport>> {
        let mut out = Vec::new();
        if primes.contains(&2) {
            out.push(lemma1_check(&curve, p)?);
        }
        for &q in primes.iter().filter(|&&q| q != 2) {
            out.push(lemma2_check(&curve, p, q)?);
        }
        for t in &tails {
            out.push(lemma3_check_with_tails(&curve, p, t.n(), t)?);
        }
        Ok(out)
    })?;
    Ok(per_point.into_iter().flatten().collect())
}

// ---------------------------------------------------------------------------
// Serialized forms. All integers travel as decimal strings.

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointDoc {
    Affine { x: String, y: String },
    Infinity(String),
}

impl From<&EPoint> for PointDoc {
    fn from(p: &EPoint) -> Self {
        match p {
            EPoint::Infinity => PointDoc::Infinity("INFINITY".into()),
            EPoint::Affine { x, y } => PointDoc::Affine {
                x: format_rational(x),
                y: format_rational(y),
            },
        }
    }
}

impl PointDoc {
    pub fn to_point(&self) -> Result<EPoint> {
        match self {
            PointDoc::Infinity(s) if s == "INFINITY" => Ok(EPoint::Infinity),
            PointDoc::Infinity(s) => Err(Error::validation(format!("bad point {s:?}"))),
            PointDoc::Affine { x, y } => {
                Ok(EPoint::affine(arith::parse_rational(x)?, arith::parse_rational(y)?))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaDoc {
    pub lemma: u8,
    pub point: PointDoc,
    pub prime: String,
    pub multiple_used: String,
    pub observed_valuation: Valuation,
    pub claim: String,
    pub verdict: Verdict,
    pub witness_multiple: Option<String>,
    pub witness_x: Option<String>,
    pub witness_non_integral: Option<bool>,
    pub tails_crosscheck: Option<bool>,
    pub confirmed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsDoc {
    pub k: String,
    pub l: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateDoc {
    pub point: PointDoc,
    pub lemma: u8,
    pub prime: String,
    pub witness_multiple: Option<String>,
    /// `x(mP)` as an exact fraction, or `"INFINITY"`.
    pub witness_x: Option<String>,
    /// `v_prime(x(mP))`.
    pub valuation: Option<Valuation>,
    /// The valuation the lemma itself constrains.
    pub lemma_valuation: Option<Valuation>,
    pub verdict: Option<Verdict>,
    pub order: Option<u32>,
    pub failure: Option<String>,
    pub certified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub params: ParamsDoc,
    pub a: String,
    pub b: String,
    pub discriminant: String,
    pub max_order: u32,
    pub candidates: Vec<CandidateDoc>,
    pub conclusion: Conclusion,
}

impl TorsionCertificate {
    pub fn is_confirmed(&self) -> bool {
        self.conclusion == Conclusion::TorsionFreeConfirmed
    }

    pub fn to_document(&self) -> CertificateDoc {
        let candidates = self
            .candidates
            .iter()
            .map(|c| {
                let r = c.report.as_ref().ok();
                let w = c.witness();
                CandidateDoc {
                    point: PointDoc::from(&c.point),
                    lemma: c.lemma.number(),
                    prime: c.prime.to_string(),
                    witness_multiple: w.map(|w| w.multiple.to_string()),
                    witness_x: w.map(|w| point_x_string(&w.point)),
                    valuation: w.and_then(|w| w.valuation),
                    lemma_valuation: r.map(|r| r.observed_valuation),
                    verdict: r.map(|r| r.verdict),
                    order: c.order,
                    failure: c.report.as_ref().err().cloned(),
                    certified: c.certified(),
                }
            })
            .collect();
        CertificateDoc {
            params: ParamsDoc {
                k: self.params.k().to_string(),
                l: self.params.l().to_string(),
            },
            a: self.curve.a().to_string(),
            b: self.curve.b().to_string(),
            discriminant: self.discriminant.to_string(),
            max_order: self.max_order,
            candidates,
            conclusion: self.conclusion,
        }
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("certificate serializes")
    }
}

impl CertificateDoc {
    /// Recomputes what can be recomputed cheaply: the curve from `(k, l)`,
    /// candidate points on the curve, witness `x` values non-integral when
    /// marked certified.
    pub fn validate(&self) -> Result<()> {
        let parse = |s: &str| -> Result<i64> {
            s.parse().map_err(|_| Error::validation(format!("bad integer {s:?}")))
        };
        let params = HolmParams::new(parse(&self.params.k)?, parse(&self.params.l)?)?;
        let curve = WeierstrassCurve::from_params(&params);
        if curve.a().to_string() != self.a
            || curve.b().to_string() != self.b
            || curve.discriminant().to_string() != self.discriminant
        {
            return Err(Error::validation("curve coefficients do not match (k, l)"));
        }
        for c in &self.candidates {
            let p = c.point.to_point()?;
            curve.check_point(&p)?;
            if c.certified {
                let wx = c
                    .witness_x
                    .as_deref()
                    .ok_or_else(|| Error::validation("certified candidate without witness"))?;
                if arith::is_integral(&arith::parse_rational(wx)?) {
                    return Err(Error::validation(format!("witness x {wx} is integral")));
                }
            }
        }
        Ok(())
    }
}

/// Parses a non-negative integer literal that must fit in `u64`.
pub fn parse_u64(s: &str) -> Option<u64> {
    s.parse::<BigInt>().ok()?.to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    fn holm(k: i64, l: i64) -> (HolmParams, WeierstrassCurve) {
        let p = HolmParams::new(k, l).unwrap();
        (p, WeierstrassCurve::from_params(&p))
    }

    #[test]
    fn lemma1_examples() {
        let (_, c) = holm(1, 2);
        let r = lemma1_check(&c, &EPoint::from_ints(1, -3)).unwrap();
        assert_eq!(r.observed_valuation, Valuation::Finite(-2));
        assert_eq!(r.claim, Claim::Exactly(-2));
        assert!(r.confirmed());
        let r = lemma1_check(&c, &EPoint::from_ints(4, 6)).unwrap();
        assert_eq!(r.observed_valuation, Valuation::Finite(0));
        assert!(r.confirmed());
        assert!(r.witness.as_ref().unwrap().is_non_integral());
    }

    #[test]
    fn lemma1_table() {
        assert_eq!(lemma1_expected(Valuation::Finite(0)), -2);
        assert_eq!(lemma1_expected(Valuation::Finite(1)), 2);
        assert_eq!(lemma1_expected(Valuation::Finite(2)), 0);
        assert_eq!(lemma1_expected(Valuation::Finite(7)), 0);
    }

    #[test]
    fn lemma_preconditions() {
        let (_, c) = holm(1, 3);
        assert!(matches!(lemma1_check(&c, &EPoint::from_ints(1, 1)), Err(Error::Validation(_))));
        let (_, c) = holm(1, 2);
        // off curve
        assert!(matches!(lemma1_check(&c, &EPoint::from_ints(1, 1)), Err(Error::Validation(_))));
        // not integral
        let half = group_law::double(&c, &EPoint::from_ints(1, -3));
        assert!(matches!(lemma1_check(&c, &half), Err(Error::Validation(_))));
        assert!(matches!(lemma2_check(&c, &EPoint::from_ints(1, -3), 3), Err(Error::Validation(_))));
        let (_, c) = holm(5, 1);
        assert!(matches!(lemma3_check(&c, &EPoint::from_ints(25, 120), 3), Err(Error::Validation(_))));
        assert!(matches!(lemma3_check(&c, &EPoint::from_ints(25, 120), 7), Err(Error::Validation(_))));
        let plain = WeierstrassCurve::new(int(-12), int(20)).unwrap();
        assert!(matches!(lemma1_check(&plain, &EPoint::from_ints(1, -3)), Err(Error::Validation(_))));
    }

    #[test]
    fn lemma2_examples() {
        let (_, c) = holm(3, 1);
        let r = lemma2_check(&c, &EPoint::from_ints(9, 24), 3).unwrap();
        assert!(r.observed_valuation <= Valuation::Finite(-2));
        assert!(r.confirmed());
        let (_, c) = holm(5, 1);
        let r = lemma2_check(&c, &EPoint::from_ints(25, 120), 5).unwrap();
        assert!(r.observed_valuation <= Valuation::Finite(0));
        assert!(r.witness.is_none());
        assert!(r.confirmed());
    }

    #[test]
    fn lemma3_examples() {
        let (_, c) = holm(5, 1);
        let r = lemma3_check(&c, &EPoint::from_ints(25, 120), 5).unwrap();
        assert_eq!(r.multiple_used, 15);
        assert!(r.observed_valuation <= Valuation::Finite(-2));
        assert!(r.confirmed());

        let (_, c) = holm(7, 1);
        let p = EPoint::from_ints(49, 7 * 48);
        assert!(c.contains(&p));
        let mut cache = DivPolyCache::new(&c);
        let t = ScaledTails::new(&mut cache, 7).unwrap();
        let r = lemma3_check_with_tails(&c, &p, 7, &t).unwrap();
        assert_eq!(r.multiple_used, 21);
        assert!(r.observed_valuation <= Valuation::Finite(-2));
        assert_eq!(r.tails_crosscheck, Some(true));
        assert!(r.confirmed());
    }

    #[test]
    fn cubic_roots() {
        // (x - 1)(x - 2)(x + 3) = x^3 - 7x + 6
        assert_eq!(integer_roots_depressed_cubic(&int(-7), &int(6)), vec![int(-3), int(1), int(2)]);
        // x^3 - 1
        assert_eq!(integer_roots_depressed_cubic(&int(0), &int(-1)), vec![int(1)]);
        // x^3 - 12x + 20 has no integer root
        assert!(integer_roots_depressed_cubic(&int(-12), &int(20)).is_empty());
        // x^3 - 3x + 2 = (x - 1)^2 (x + 2)
        assert_eq!(integer_roots_depressed_cubic(&int(-3), &int(2)), vec![int(-2), int(1)]);
        assert_eq!(integer_roots_depressed_cubic(&int(0), &int(0)), vec![int(0)]);
    }

    #[test]
    fn cubic_roots_against_scan() {
        for a in -40i64..=40 {
            for c in [-90i64, -17, -8, 0, 1, 6, 20, 64, 90] {
                let brute: Vec<BigInt> = (-200i64..=200)
                    .filter(|x| x * x * x + a * x + c == 0)
                    .map(int)
                    .collect();
                assert_eq!(integer_roots_depressed_cubic(&int(a), &int(c)), brute, "a={a} c={c}");
            }
        }
    }

    #[test]
    fn nagell_lutz_examples() {
        let (_, c) = holm(1, 2);
        assert_eq!(c.discriminant(), int(-62208));
        let cands = nagell_lutz_candidates(&c).unwrap();
        assert!(cands.iter().all(|p| !p.y().unwrap().is_zero()));
        for p in &cands {
            assert!(c.contains(p));
            let y = p.y().unwrap().numer().clone();
            assert!((int(62208) % (&y * &y)).is_zero());
        }
        for q in [(1, 3), (1, -3), (4, 6), (4, -6)] {
            assert!(cands.contains(&EPoint::from_ints(q.0, q.1)));
        }
        let c = WeierstrassCurve::new(int(0), int(-1)).unwrap();
        assert!(nagell_lutz_candidates(&c).unwrap().contains(&EPoint::from_ints(1, 0)));
    }

    #[test]
    fn nagell_lutz_finds_all_torsion_on_known_curve() {
        // y^2 = x^3 + 1 has torsion Z/6: (-1,0), (0,+-1), (2,+-3).
        let c = WeierstrassCurve::new(int(0), int(1)).unwrap();
        let cands = nagell_lutz_candidates(&c).unwrap();
        for q in [(-1, 0), (0, 1), (0, -1), (2, 3), (2, -3)] {
            assert!(cands.contains(&EPoint::from_ints(q.0, q.1)));
        }
    }

    #[test]
    fn nagell_lutz_capacity_error() {
        let (_, c) = holm(1, 2);
        let err = nagell_lutz_candidates_with(&c, &Factorizer::new(1)).unwrap_err();
        assert!(matches!(err, Error::Capacity(_)));
    }

    #[test]
    fn dispatch_rule() {
        let d = |k, l| dispatch(&HolmParams::new(k, l).unwrap());
        assert_eq!(d(1, 2), (LemmaId::One, 2));
        assert_eq!(d(1, 6), (LemmaId::One, 2));
        assert_eq!(d(3, 5), (LemmaId::Two, 3));
        assert_eq!(d(5, 7), (LemmaId::Three, 5));
        assert_eq!(d(1, 11), (LemmaId::Three, 11));
    }

    #[test]
    fn certify_examples() {
        let cert = certify_torsion_free(&HolmParams::new(1, 2).unwrap()).unwrap();
        assert_eq!(cert.conclusion, Conclusion::TorsionFreeConfirmed);
        assert!(!cert.candidates.is_empty());
        let cert = certify_torsion_free(&HolmParams::new(3, 5).unwrap()).unwrap();
        assert!(cert.is_confirmed());
        assert!(HolmParams::new(2, 4).is_err());
    }

    #[test]
    fn certificate_detects_torsion_when_present() {
        // Fake a "certificate" on y^2 = x^3 + 1 by running the order scan
        // the certifier uses: the candidates do have small order.
        let c = WeierstrassCurve::new(int(0), int(1)).unwrap();
        let orders: Vec<_> = nagell_lutz_candidates(&c)
            .unwrap()
            .iter()
            .map(|p| group_law::order_upto(&c, p, MAZUR_BOUND))
            .collect();
        assert!(orders.iter().all(Option::is_some));
    }

    #[test]
    fn certificate_json_round_trip() {
        let cert = certify_torsion_free(&HolmParams::new(2, 3).unwrap()).unwrap();
        let json = cert.to_json_pretty();
        let doc: CertificateDoc = serde_json::from_str(&json).unwrap();
        assert_eq!(doc, cert.to_document());
        doc.validate().unwrap();
        assert_eq!(doc.conclusion, Conclusion::TorsionFreeConfirmed);
        assert!(json.contains("\"TORSION_FREE_CONFIRMED\""));
        assert!(json.contains("\"discriminant\": \""));
    }

    #[test]
    fn battery_sequential_matches_parallel() {
        let p = HolmParams::new(1, 6).unwrap();
        let b = int(2000);
        let s = lemma_battery(&p, &b, Strategy::Sequential).unwrap();
        let q = lemma_battery(&p, &b, Strategy::Parallel).unwrap();
        assert_eq!(s, q);
        assert!(!s.is_empty());
        assert!(s.iter().all(LemmaReport::confirmed));
    }
}
