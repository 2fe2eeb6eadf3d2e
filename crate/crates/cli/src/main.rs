//! `holm`: command-line driver for holm-core.
//!
//! Exit codes: 0 ok / confirmed, 1 validation or capacity error, 2 a
//! finding that contradicts torsion-freeness (violated lemma, torsion
//! denominator, counterexample), 3 internal inconsistency.

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use holm_core::arith::{self, format_rational, parse_rational};
use holm_core::curves::{
    self, default_x_bound, param_violations, EPoint, HPoint, HolmParams, WeierstrassCurve,
};
use holm_core::division_polys::{self, CurvePoly, DivPolyCache};
use holm_core::group_law;
use holm_core::isomorphism::{gamma, gamma_inv};
use holm_core::poly::IntPoly;
use holm_core::torsion::{self, CertifyOptions, PointDoc};
use holm_core::{Error, Strategy};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "holm", version, about = "Holm curves, their Weierstrass models, and torsion certificates")]
struct Cli {
    /// Run scans on a single thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Pair {
    #[arg(allow_hyphen_values = true)]
    k: String,
    #[arg(allow_hyphen_values = true)]
    l: String,
}

#[derive(Args)]
struct JsonOut {
    /// Write JSON to PATH, or to stdout (instead of text) when PATH is omitted.
    #[arg(long, value_name = "PATH", num_args = 0..=1, default_missing_value = "-")]
    json: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Check the constraints on (k, l).
    Validate {
        #[command(flatten)]
        pair: Pair,
        #[command(flatten)]
        out: JsonOut,
    },
    /// Map a point between the Holm curve and its Weierstrass model.
    Map {
        #[command(flatten)]
        pair: Pair,
        /// Holm point to Weierstrass point.
        #[arg(long, conflicts_with = "to_h", required_unless_present = "to_h")]
        to_e: bool,
        /// Weierstrass point to Holm point.
        #[arg(long)]
        to_h: bool,
        /// x-coordinate, or INFINITY.
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: Option<String>,
        #[command(flatten)]
        out: JsonOut,
    },
    /// Compute n*P on the Weierstrass model.
    Mul {
        #[command(flatten)]
        pair: Pair,
        #[arg(allow_hyphen_values = true)]
        n: String,
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: Option<String>,
        #[arg(long, value_enum, default_value_t = Method::Grouplaw)]
        method: Method,
        #[command(flatten)]
        out: JsonOut,
    },
    /// Print psi_n, phi_n, omega_n as f + y*g coefficient lists, constant term first.
    Divpoly {
        #[command(flatten)]
        pair: Pair,
        n: String,
        #[command(flatten)]
        out: JsonOut,
    },
    /// Run every applicable lemma check on the integral points up to --bound.
    Lemmas {
        #[command(flatten)]
        pair: Pair,
        /// Scan |x| <= BOUND (default max(10000, 4b)).
        #[arg(long)]
        bound: Option<String>,
        #[command(flatten)]
        out: JsonOut,
    },
    /// Certify that the curve has no rational torsion.
    Certify {
        #[arg(allow_hyphen_values = true, required_unless_present = "range")]
        k: Option<String>,
        #[arg(allow_hyphen_values = true, required_unless_present = "range")]
        l: Option<String>,
        /// Certify every valid pair with 1 <= k < l <= MAX instead.
        #[arg(long, value_name = "MAX", conflicts_with_all = ["k", "l"])]
        range: Option<String>,
        /// Orders up to this are ruled out by direct multiplication.
        #[arg(long, default_value = "12")]
        max_order: String,
        #[command(flatten)]
        out: JsonOut,
    },
    /// List integral points with |x| <= --bound and flag impossible ones.
    SearchIntegral {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        bound: Option<String>,
        #[command(flatten)]
        out: JsonOut,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Grouplaw,
    Divpoly,
    Both,
}

const OK: u8 = 0;
const VALIDATION: u8 = 1;
const CONTRADICTION: u8 = 2;
const INTERNAL: u8 = 3;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Validation(_) | Error::Capacity(_) => VALIDATION,
        Error::Contradiction(_) | Error::TorsionDenominator { .. } => CONTRADICTION,
        Error::Internal(_) => INTERNAL,
    }
}

/// Text and JSON renderings of one command's result plus its exit code.
struct Output {
    text: String,
    json: Value,
    code: u8,
}

type Res<T> = Result<T, Error>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { VALIDATION } else { OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let strategy = if cli.sequential { Strategy::Sequential } else { Strategy::default() };
    let json_target = match &cli.command {
        Command::Validate { out, .. }
        | Command::Map { out, .. }
        | Command::Mul { out, .. }
        | Command::Divpoly { out, .. }
        | Command::Lemmas { out, .. }
        | Command::Certify { out, .. }
        | Command::SearchIntegral { out, .. } => out.json.clone(),
    };
    let result = match cli.command {
        Command::Validate { pair, .. } => cmd_validate(&pair),
        Command::Map { pair, to_e, x, y, .. } => cmd_map(&pair, to_e, &x, y.as_deref()),
        Command::Mul { pair, n, x, y, method, .. } => cmd_mul(&pair, &n, &x, y.as_deref(), method),
        Command::Divpoly { pair, n, .. } => cmd_divpoly(&pair, &n),
        Command::Lemmas { pair, bound, .. } => cmd_lemmas(&pair, bound.as_deref(), strategy),
        Command::Certify { k, l, range, max_order, .. } => {
            cmd_certify(k.as_deref(), l.as_deref(), range.as_deref(), &max_order, strategy)
        }
        Command::SearchIntegral { pair, bound, .. } => {
            cmd_search(&pair, bound.as_deref(), strategy)
        }
    };
    match result {
        Ok(out) => match emit(&out, json_target.as_deref()) {
            Ok(()) => ExitCode::from(out.code),
            Err(e) => fail(&e),
        },
        Err(e) => fail(&e),
    }
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(exit_code(e))
}

fn emit(out: &Output, json_target: Option<&str>) -> Res<()> {
    let pretty = serde_json::to_string_pretty(&out.json)
        .map_err(|e| Error::Internal(format!("json: {e}")))?;
    match json_target {
        Some("-") => println!("{pretty}"),
        Some(path) => {
            print!("{}", out.text);
            std::fs::write(path, pretty + "\n")
                .map_err(|e| Error::Validation(format!("cannot write {path}: {e}")))?;
        }
        None => print!("{}", out.text),
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Argument parsing. Every number goes through the exact rational parser.

fn parse_int(name: &str, s: &str) -> Res<BigInt> {
    let q = parse_rational(s)?;
    if !q.is_integer() {
        return Err(Error::Validation(format!("{name} must be an integer, got {s}")));
    }
    Ok(q.to_integer())
}

fn parse_i64(name: &str, s: &str) -> Res<i64> {
    parse_int(name, s)?
        .to_i64()
        .ok_or_else(|| Error::Validation(format!("{name} = {s} is out of range")))
}

fn parse_pair(k: &str, l: &str) -> Res<(i64, i64)> {
    Ok((parse_i64("k", k)?, parse_i64("l", l)?))
}

fn params(pair: &Pair) -> Res<HolmParams> {
    let (k, l) = parse_pair(&pair.k, &pair.l)?;
    HolmParams::new(k, l)
}

fn is_infinity(s: &str) -> bool {
    matches!(s.to_ascii_uppercase().as_str(), "INFINITY" | "INF" | "O")
}

fn parse_e_point(x: &str, y: Option<&str>) -> Res<EPoint> {
    match y {
        None if is_infinity(x) => Ok(EPoint::Infinity),
        None => Err(Error::Validation("expected X Y or INFINITY".into())),
        Some(y) => Ok(EPoint::affine(parse_rational(x)?, parse_rational(y)?)),
    }
}

fn parse_bound(params: &HolmParams, bound: Option<&str>) -> Res<BigInt> {
    match bound {
        None => Ok(default_x_bound(params)),
        Some(s) => {
            let b = parse_int("bound", s)?;
            if !b.is_positive() {
                return Err(Error::Validation(format!("bound must be >= 1, got {s}")));
            }
            Ok(b)
        }
    }
}

fn point_json(p: &EPoint) -> Value {
    serde_json::to_value(PointDoc::from(p)).expect("point serializes")
}

fn h_point_json(p: &HPoint) -> Value {
    json!({ "x": format_rational(&p.x), "y": format_rational(&p.y) })
}

// ---------------------------------------------------------------------------
// Commands

fn cmd_validate(pair: &Pair) -> Res<Output> {
    let (k, l) = parse_pair(&pair.k, &pair.l)?;
    let violations: Vec<String> = param_violations(k, l).iter().map(ToString::to_string).collect();
    let text = if violations.is_empty() {
        "valid\n".to_string()
    } else {
        format!("invalid: {}\n", violations.join("; "))
    };
    Ok(Output {
        text,
        json: json!({
            "k": k.to_string(),
            "l": l.to_string(),
            "valid": violations.is_empty(),
            "violations": violations,
        }),
        code: if violations.is_empty() { OK } else { VALIDATION },
    })
}

fn cmd_map(pair: &Pair, to_e: bool, x: &str, y: Option<&str>) -> Res<Output> {
    let params = params(pair)?;
    let (input, image, text) = if to_e {
        let y = y.ok_or_else(|| Error::Validation("expected X Y".into()))?;
        let h = HPoint::new(parse_rational(x)?, parse_rational(y)?);
        let e = gamma(&params, &h)?;
        (h_point_json(&h), point_json(&e), e.to_string())
    } else {
        let e = parse_e_point(x, y)?;
        let h = gamma_inv(&params, &e)?;
        (point_json(&e), h_point_json(&h), h.to_string())
    };
    Ok(Output {
        text: text + "\n",
        json: json!({
            "k": params.k().to_string(),
            "l": params.l().to_string(),
            "direction": if to_e { "to-e" } else { "to-h" },
            "input": input,
            "image": image,
        }),
        code: OK,
    })
}

/// `n*P` via division polynomials, extended to `n < 2` through the
/// identity, `P` itself and negation.
fn divpoly_mul(cache: &mut DivPolyCache, n: i64, p: &EPoint) -> Res<EPoint> {
    if p.is_infinity() {
        return Ok(EPoint::Infinity);
    }
    let m = n.unsigned_abs();
    let q = match m {
        0 => EPoint::Infinity,
        1 => p.clone(),
        _ => division_polys::mul_via_divpolys(cache, m, p)?,
    };
    Ok(if n < 0 { group_law::negate(&q) } else { q })
}

fn cmd_mul(pair: &Pair, n: &str, x: &str, y: Option<&str>, method: Method) -> Res<Output> {
    let params = params(pair)?;
    let curve = WeierstrassCurve::from_params(&params);
    let n_val = parse_i64("n", n)?;
    let p = parse_e_point(x, y)?;
    curve.check_point(&p)?;

    let by_group = (method != Method::Divpoly).then(|| group_law::scalar_mul(&curve, n_val, &p));
    let by_div = if method != Method::Grouplaw {
        let mut cache = DivPolyCache::new(&curve);
        Some(divpoly_mul(&mut cache, n_val, &p)?)
    } else {
        None
    };
    let result = by_group.clone().or_else(|| by_div.clone()).expect("some method ran");
    let matched = match (&by_group, &by_div) {
        (Some(a), Some(b)) => Some(a == b),
        _ => None,
    };

    let mut text = String::new();
    match (&by_group, &by_div) {
        (Some(a), Some(b)) => {
            let _ = writeln!(text, "grouplaw: {a}");
            let _ = writeln!(text, "divpoly:  {b}");
            let _ = writeln!(text, "{}", if a == b { "MATCH" } else { "MISMATCH" });
        }
        _ => {
            let _ = writeln!(text, "{result}");
        }
    }
    let mut vals = Vec::new();
    if let Some(rx) = result.x() {
        for q in params.primes_dividing_kl() {
            let v = arith::vp(rx, q)?;
            let _ = writeln!(text, "v_{q}(x) = {v}");
            vals.push(json!({ "prime": q.to_string(), "valuation": v }));
        }
    }
    Ok(Output {
        text,
        json: json!({
            "k": params.k().to_string(),
            "l": params.l().to_string(),
            "n": n_val.to_string(),
            "point": point_json(&p),
            "grouplaw": by_group.as_ref().map(point_json),
            "divpoly": by_div.as_ref().map(point_json),
            "match": matched,
            "valuations": vals,
        }),
        code: if matched == Some(false) { INTERNAL } else { OK },
    })
}

fn coeff_list(p: &IntPoly) -> String {
    let parts: Vec<String> = p.coeffs().iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(", "))
}

fn coeff_json(p: &IntPoly) -> Value {
    Value::Array(p.coeffs().iter().map(|c| Value::String(c.to_string())).collect())
}

fn cmd_divpoly(pair: &Pair, n: &str) -> Res<Output> {
    let params = params(pair)?;
    let curve = WeierstrassCurve::from_params(&params);
    let n = parse_i64("n", n)?;
    let n = u64::try_from(n).map_err(|_| Error::Validation(format!("n must be >= 0, got {n}")))?;
    let mut cache = DivPolyCache::new(&curve);
    let entries: [(&str, u64, Option<CurvePoly>); 3] = [
        ("psi", 0, Some(cache.psi(n)?.clone())),
        ("phi", 1, if n >= 1 { Some(cache.phi(n)?.clone()) } else { None }),
        ("omega", 2, if n >= 2 { Some(cache.omega(n)?.clone()) } else { None }),
    ];
    let mut text = format!("{curve}\n");
    let mut doc = serde_json::Map::new();
    doc.insert("k".into(), json!(params.k().to_string()));
    doc.insert("l".into(), json!(params.l().to_string()));
    doc.insert("n".into(), json!(n.to_string()));
    for (name, min_n, poly) in entries {
        match poly {
            Some(p) => {
                let _ = writeln!(text, "{name}_{n}: f = {}, g = {}", coeff_list(&p.f), coeff_list(&p.g));
                doc.insert(name.into(), json!({ "f": coeff_json(&p.f), "g": coeff_json(&p.g) }));
            }
            None => {
                let _ = writeln!(text, "{name}_{n}: undefined (n >= {min_n})");
                doc.insert(name.into(), Value::Null);
            }
        }
    }
    Ok(Output { text, json: Value::Object(doc), code: OK })
}

fn cmd_lemmas(pair: &Pair, bound: Option<&str>, strategy: Strategy) -> Res<Output> {
    let params = params(pair)?;
    let bound = parse_bound(&params, bound)?;
    let reports = torsion::lemma_battery(&params, &bound, strategy)?;
    let all = reports.iter().all(|r| r.confirmed());

    let rows: Vec<[String; 7]> = reports
        .iter()
        .map(|r| {
            [
                r.point.to_string(),
                r.lemma.to_string(),
                r.prime.to_string(),
                format!("{}P", r.multiple_used),
                format!("v_{}(x) = {}", r.prime, r.observed_valuation),
                r.claim.to_string(),
                if r.confirmed() { "CONFIRMED".into() } else { r.verdict.to_string() },
            ]
        })
        .collect();
    let header = ["point", "lemma", "p", "multiple", "valuation", "claim", "verdict"].map(String::from);
    let mut text = format!("{}\nscan |x| <= {bound}\n", WeierstrassCurve::from_params(&params));
    text += &table(&header, &rows);
    let _ = writeln!(
        text,
        "{} checks, {}",
        reports.len(),
        if all { "all CONFIRMED" } else { "VIOLATIONS FOUND" }
    );
    Ok(Output {
        text,
        json: json!({
            "k": params.k().to_string(),
            "l": params.l().to_string(),
            "bound": bound.to_string(),
            "reports": reports.iter().map(|r| r.to_document()).collect::<Vec<_>>(),
            "all_confirmed": all,
        }),
        code: if all { OK } else { CONTRADICTION },
    })
}

fn table<const N: usize>(header: &[String; N], rows: &[[String; N]]) -> String {
    let mut width = header.clone().map(|h| h.len());
    for r in rows {
        for (w, c) in width.iter_mut().zip(r) {
            *w = (*w).max(c.len());
        }
    }
    let mut out = String::new();
    for r in std::iter::once(header).chain(rows) {
        let cells: Vec<String> = r.iter().zip(&width).map(|(c, w)| format!("{c:<w$}")).collect();
        let _ = writeln!(out, "{}", cells.join("  ").trim_end());
    }
    out
}

fn certify_one(params: &HolmParams, opts: &CertifyOptions) -> Res<(String, Value, bool)> {
    let cert = torsion::certify_torsion_free_with(params, opts)?;
    let (lemma, prime) = torsion::dispatch(params);
    let mut text = String::new();
    let _ = writeln!(text, "(k, l) = ({}, {})", params.k(), params.l());
    let _ = writeln!(text, "curve: {}", cert.curve);
    let _ = writeln!(text, "discriminant: {}", cert.discriminant);
    let _ = writeln!(text, "lemma: {lemma}, p = {prime}");
    let _ = writeln!(text, "candidates: {}", cert.candidates.len());
    for c in &cert.candidates {
        let evidence = match (&c.report, c.witness()) {
            (Err(e), _) => format!("FAILED: {e}"),
            (Ok(_), Some(w)) => format!(
                "{}P has x = {}, v_{} = {}",
                w.multiple,
                w.point.x().map_or("INFINITY".into(), format_rational),
                c.prime,
                w.valuation.map_or("-".into(), |v| v.to_string())
            ),
            (Ok(_), None) => "no witness".into(),
        };
        let order = match c.order {
            Some(o) => format!("order {o}"),
            None => format!("order > {}", cert.max_order),
        };
        let status = if c.certified() { "certified" } else { "NOT CERTIFIED" };
        let _ = writeln!(text, "  {}: {evidence}; {order}; {status}", c.point);
    }
    let _ = writeln!(text, "conclusion: {}", cert.conclusion);
    let doc = serde_json::to_value(cert.to_document()).expect("certificate serializes");
    Ok((text, doc, cert.is_confirmed()))
}

fn cmd_certify(
    k: Option<&str>,
    l: Option<&str>,
    range: Option<&str>,
    max_order: &str,
    strategy: Strategy,
) -> Res<Output> {
    let max_order = parse_i64("max-order", max_order)?
        .to_u32()
        .filter(|&m| m >= 1)
        .ok_or_else(|| Error::Validation(format!("max-order must be in 1..=2^32-1, got {max_order}")))?;
    let opts = CertifyOptions { max_order, strategy, ..CertifyOptions::default() };

    let Some(range) = range else {
        let (k, l) = parse_pair(k.expect("required by clap"), l.expect("required by clap"))?;
        let (text, doc, ok) = certify_one(&HolmParams::new(k, l)?, &opts)?;
        return Ok(Output { text, json: doc, code: if ok { OK } else { CONTRADICTION } });
    };

    let max = parse_i64("range", range)?;
    if max < 2 {
        return Err(Error::Validation(format!("range must be >= 2, got {max}")));
    }
    let mut text = String::new();
    let mut docs = Vec::new();
    let mut all = true;
    for k in 1..max {
        for l in k + 1..=max {
            let Ok(params) = HolmParams::new(k, l) else { continue };
            let (_, doc, ok) = certify_one(&params, &opts)?;
            all &= ok;
            let _ = writeln!(text, "({k}, {l}): {}", doc["conclusion"].as_str().unwrap_or("?"));
            docs.push(doc);
        }
    }
    let _ = writeln!(text, "{} pairs, {}", docs.len(), if all { "all confirmed" } else { "COUNTEREXAMPLE FOUND" });
    Ok(Output { text, json: Value::Array(docs), code: if all { OK } else { CONTRADICTION } })
}

fn cmd_search(pair: &Pair, bound: Option<&str>, strategy: Strategy) -> Res<Output> {
    let params = params(pair)?;
    let curve = WeierstrassCurve::from_params(&params);
    let bound = parse_bound(&params, bound)?;
    let points = curves::find_integral_points(&curve, &bound, strategy)?;
    let findings = curves::holm_findings(&curve, &points);
    let mut text = format!("{curve}\nscan |x| <= {bound}\n");
    for p in &points {
        let _ = writeln!(text, "{p}");
    }
    let _ = writeln!(text, "{} integral points", points.len());
    for f in &findings {
        let _ = writeln!(text, "FINDING: {f}");
    }
    Ok(Output {
        text,
        json: json!({
            "k": params.k().to_string(),
            "l": params.l().to_string(),
            "bound": bound.to_string(),
            "points": points.iter().map(point_json).collect::<Vec<_>>(),
            "findings": findings.iter().map(ToString::to_string).collect::<Vec<_>>(),
        }),
        code: if findings.is_empty() { OK } else { CONTRADICTION },
    })
}
