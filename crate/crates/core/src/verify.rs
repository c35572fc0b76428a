//! The per-prime verification pipeline behind the command-line tool:
//! count, reconstruct `L`, take the Newton polygon, compare with the
//! expectation from a catalog entry, and render reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::count::{count_points, count_sequence, CountError, CountOptions};
use crate::curves::{
    factor_integer, family_of, integer_discriminant, CatalogEntry, FamilyLabel, SuperellipticCurve,
};
use crate::ff::{is_prime, PrimeModulus, PRIME_BOUND};
use crate::galois::{field_specs, CyclicFieldSpec, QQ_ZETA9, QQ_ZETA9_PLUS_I, QQ_ZETA9_PLUS_ZETA5};
use crate::newton::{newton_polygon, valuation_supersingular, Slope};
use crate::zeta::{l_polynomial_from_counts, validate_weil, LPolynomial, WeilReport};
use crate::{Error, Result};

/// Default bound on `p^{g+1}` for the extra zeta cross-check count.
pub const DEFAULT_CROSSCHECK_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub count: CountOptions,
    pub crosscheck_limit: u64,
    /// Run per-prime tasks on the rayon pool.
    pub parallel: bool,
    pub timings: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            count: CountOptions::default(),
            crosscheck_limit: DEFAULT_CROSSCHECK_LIMIT,
            parallel: true,
            timings: true,
        }
    }
}

/// An exact integer, emitted as a JSON number when it fits in `i128` and as a
/// decimal string otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Int(pub BigInt);

impl Serialize for Int {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_i128() {
            Some(v) => s.serialize_i128(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "SKIPPED")]
    Skipped,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Skipped => "SKIPPED",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurveDescriptor {
    pub family: FamilyLabel,
    pub name: String,
    pub m: u32,
    /// Right-hand side of the smooth model, integer coefficients low degree first.
    pub f_integer: Vec<i64>,
    pub p: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GaloisData {
    pub field: CyclicFieldSpec,
    pub ramified: bool,
    pub frobenius_order: Option<u64>,
    pub even_order: Option<bool>,
    pub splitting_count: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZetaCrosscheck {
    pub k: usize,
    pub predicted: Int,
    pub counted: u64,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Checks {
    pub weil: WeilReport,
    pub hull_endpoints: bool,
    pub slope_symmetry: bool,
    pub valuation_test_agrees: bool,
    pub zeta_crosscheck: Option<ZetaCrosscheck>,
}

impl Checks {
    pub fn passed(&self) -> bool {
        self.weil.passed()
            && self.hull_endpoints
            && self.slope_symmetry
            && self.valuation_test_agrees
            && self.zeta_crosscheck.as_ref().is_none_or(|z| z.agrees)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Timings {
    pub count_ms: f64,
    pub zeta_ms: f64,
    pub newton_ms: f64,
    pub crosscheck_ms: f64,
    pub total_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub curve: CurveDescriptor,
    pub genus: Option<u32>,
    pub counts: Vec<u64>,
    pub l_polynomial: Vec<Int>,
    pub slopes: Vec<Slope>,
    pub supersingular: Option<bool>,
    pub p_rank: Option<u32>,
    pub galois: Option<GaloisData>,
    pub checks: Option<Checks>,
    pub expected_supersingular: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

impl VerificationReport {
    fn empty(curve: CurveDescriptor) -> Self {
        VerificationReport {
            curve,
            genus: None,
            counts: Vec::new(),
            l_polynomial: Vec::new(),
            slopes: Vec::new(),
            supersingular: None,
            p_rank: None,
            galois: None,
            checks: None,
            expected_supersingular: None,
            verdict: None,
            reason: None,
            timings: None,
        }
    }
}

fn ms(t: Instant) -> f64 {
    (t.elapsed().as_secs_f64() * 1e6).round() / 1e3
}

fn field_for(label: FamilyLabel) -> Option<CyclicFieldSpec> {
    let name = match label {
        FamilyLabel::M6 => QQ_ZETA9,
        FamilyLabel::M8 => QQ_ZETA9_PLUS_I,
        FamilyLabel::M16 => QQ_ZETA9_PLUS_ZETA5,
        FamilyLabel::Other => return None,
    };
    field_specs().into_iter().find(|s| s.name == name)
}

fn galois_data(label: FamilyLabel, p: u32) -> Option<GaloisData> {
    let field = field_for(label)?;
    let p = p as u64;
    Some(match field.frobenius_order(p) {
        Ok(t) => GaloisData {
            ramified: false,
            frobenius_order: Some(t),
            even_order: Some(t % 2 == 0),
            splitting_count: Some(field.degree / t),
            field,
        },
        Err(_) => GaloisData {
            field,
            ramified: true,
            frobenius_order: None,
            even_order: None,
            splitting_count: None,
        },
    })
}

/// Runs the full pipeline on one curve and fills in everything but the verdict.
pub fn analyze(
    curve: &SuperellipticCurve,
    descriptor: CurveDescriptor,
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut timings = Timings::default();
    let mut report = VerificationReport::empty(descriptor);
    let g = curve.genus();
    report.genus = Some(g);
    report.galois = galois_data(report.curve.family, curve.prime().get());

    let t = Instant::now();
    let counts = if g == 0 {
        Vec::new()
    } else {
        count_sequence(curve, g as usize, &opts.count)?.counts
    };
    timings.count_ms = ms(t);

    let t = Instant::now();
    let l = if g == 0 {
        LPolynomial::from_coefficients(curve.prime(), vec![BigInt::from(1)])
    } else {
        l_polynomial_from_counts(curve.prime(), g, &counts)?
    };
    let weil = validate_weil(&l);
    timings.zeta_ms = ms(t);

    let t = Instant::now();
    let np = newton_polygon(&l);
    let supersingular = np.is_supersingular();
    let two_g = 2 * g as usize;
    let hull_endpoints = np.vertices.first() == Some(&(0, 0))
        && np.vertices.last() == Some(&(two_g, g))
        && np.total_multiplicity() == two_g as u32;
    timings.newton_ms = ms(t);

    let t = Instant::now();
    let k = g as usize + 1;
    let q_next = (curve.prime().get() as u64).checked_pow(k as u32);
    let zeta_crosscheck = match q_next {
        Some(q) if g > 0 && q <= opts.crosscheck_limit => {
            let counted = count_points(curve, k, &opts.count)?;
            let predicted = l.predicted_count(k);
            Some(ZetaCrosscheck {
                k,
                agrees: predicted == BigInt::from(counted),
                predicted: Int(predicted),
                counted,
            })
        }
        _ => None,
    };
    timings.crosscheck_ms = ms(t);

    report.checks = Some(Checks {
        weil,
        hull_endpoints,
        slope_symmetry: np.is_symmetric(),
        valuation_test_agrees: valuation_supersingular(&l) == supersingular,
        zeta_crosscheck,
    });
    report.counts = counts;
    report.l_polynomial = l.coefficients().iter().cloned().map(Int).collect();
    report.p_rank = Some(np.p_rank());
    report.slopes = np.slopes;
    report.supersingular = Some(supersingular);
    timings.total_ms = ms(start);
    if opts.timings {
        report.timings = Some(timings);
    }
    Ok(report)
}

/// Primes in `[pmin, pmax]` within the supported range.
pub fn primes_in(pmin: u64, pmax: u64) -> Vec<u32> {
    (pmin.max(2)..=pmax.min(PRIME_BOUND - 1))
        .filter(|&p| is_prime(p))
        .map(|p| p as u32)
        .collect()
}

/// Checks one catalog entry at one prime against `expected`.
pub fn verify_at(
    entry: &CatalogEntry,
    p: u32,
    expected: bool,
    opts: &VerifyOptions,
) -> VerificationReport {
    let descriptor = CurveDescriptor {
        family: entry.label,
        name: entry.name.clone(),
        m: entry.m,
        f_integer: entry.model_polynomial(p),
        p,
    };
    let pm = PrimeModulus::new(p as u64).expect("caller passes primes");
    let curve = match entry.curve_at(pm) {
        Ok(c) => c,
        Err(e) => {
            let mut r = VerificationReport::empty(descriptor);
            r.expected_supersingular = Some(expected);
            // Bad reduction outside the prime condition carries no claim.
            r.verdict = Some(if expected {
                Verdict::Fail
            } else {
                Verdict::Skipped
            });
            r.reason = Some(format!("bad reduction: {e}"));
            return r;
        }
    };
    match analyze(&curve, descriptor.clone(), opts) {
        Ok(mut r) => {
            r.expected_supersingular = Some(expected);
            let checks_ok = r.checks.as_ref().is_some_and(Checks::passed);
            let matches = r.supersingular == Some(expected);
            r.verdict = Some(if checks_ok && matches {
                Verdict::Pass
            } else {
                Verdict::Fail
            });
            if !matches {
                r.reason = Some(format!(
                    "expected supersingular = {expected}, slopes {}",
                    format_slopes(&r.slopes)
                ));
            } else if !checks_ok {
                r.reason = Some("internal consistency check failed".into());
            }
            r
        }
        Err(e) => {
            let mut r = VerificationReport::empty(descriptor);
            r.genus = Some(curve.genus());
            r.galois = galois_data(entry.label, p);
            r.expected_supersingular = Some(expected);
            let skipped = matches!(e, Error::Count(CountError::BudgetExceeded { .. }));
            r.verdict = Some(if skipped {
                Verdict::Skipped
            } else {
                Verdict::Fail
            });
            r.reason = Some(e.to_string());
            r
        }
    }
}

/// The expectation at `p`: supersingular under the congruence condition,
/// ordinary-ish (not supersingular) outside it when the entry asks for the converse.
pub fn expectation(entry: &CatalogEntry, p: u32) -> Option<bool> {
    if entry.prime_condition.holds(p) {
        Some(true)
    } else if entry.converse {
        Some(false)
    } else {
        None
    }
}

/// Verifies an entry over every prime in `[pmin, pmax]` that carries an
/// expectation. Reports come back in ascending `p`.
pub fn verify_entry(
    entry: &CatalogEntry,
    pmin: u64,
    pmax: u64,
    opts: &VerifyOptions,
) -> Vec<VerificationReport> {
    let tasks: Vec<(u32, bool)> = primes_in(pmin, pmax)
        .into_iter()
        .filter_map(|p| expectation(entry, p).map(|e| (p, e)))
        .collect();
    if opts.parallel {
        tasks
            .par_iter()
            .map(|&(p, e)| verify_at(entry, p, e, opts))
            .collect()
    } else {
        tasks
            .iter()
            .map(|&(p, e)| verify_at(entry, p, e, opts))
            .collect()
    }
}

/// Report for an arbitrary curve `y^m = f(x)` over `F_p`; no verdict.
pub fn inspect(m: u32, f: &[i64], p: u64, opts: &VerifyOptions) -> Result<VerificationReport> {
    let pm = PrimeModulus::new(p)?;
    let curve = SuperellipticCurve::from_integer(pm, m, f)?;
    let descriptor = CurveDescriptor {
        family: family_of(&curve),
        name: "inspect".into(),
        m,
        f_integer: f.to_vec(),
        p: pm.get(),
    };
    analyze(&curve, descriptor, opts)
}

/// Parses `"m:c0,c1,..."` (coefficients low degree first, signed).
pub fn parse_curve_spec(spec: &str) -> std::result::Result<(u32, Vec<i64>), String> {
    let (m, coeffs) = spec
        .split_once(':')
        .ok_or_else(|| format!("expected m:c0,c1,..., got {spec:?}"))?;
    let m: u32 = m
        .trim()
        .parse()
        .map_err(|e| format!("bad exponent {m:?}: {e}"))?;
    let coeffs = coeffs
        .split(',')
        .map(|c| {
            c.trim()
                .parse::<i64>()
                .map_err(|e| format!("bad coefficient {c:?}: {e}"))
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok((m, coeffs))
}

pub fn load_catalog(path: &Path) -> Result<Vec<CatalogEntry>> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Catalog(format!("{}: {e}", path.display())))
}

/// One row of the Frobenius table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GaloisRow {
    pub p: u64,
    pub field: String,
    pub n: u64,
    pub frobenius_order: u64,
    pub even_order: bool,
    pub splitting_count: u64,
    /// `p mod 3`, `p mod 4`, `p mod 5`.
    pub residues: [u64; 3],
    /// Violated congruence equivalences, if any.
    pub violations: Vec<String>,
}

/// Frobenius data for every unramified prime in range and each of the three fields,
/// checked against the congruence descriptions of the parity.
pub fn galois_table(pmin: u64, pmax: u64) -> Vec<GaloisRow> {
    let specs = field_specs();
    let mut rows = Vec::new();
    for p in primes_in(pmin, pmax) {
        let p = p as u64;
        for spec in &specs {
            let Ok(t) = spec.frobenius_order(p) else {
                continue;
            };
            let even = t % 2 == 0;
            let split = spec.degree / t;
            let mut violations = Vec::new();
            match spec.n {
                9 => {
                    if even != (p % 3 == 2) {
                        violations.push("even order <=> p = 2 mod 3".to_string());
                    }
                    if [1, 3].contains(&split) != (p % 3 != 1) {
                        violations.push("splitting in {1,3} <=> p != 1 mod 3".to_string());
                    }
                }
                36 => {
                    if even != (p % 4 == 3) {
                        violations.push("even order <=> p = 3 mod 4".to_string());
                    }
                }
                45 => {
                    if [2, 3, 4].contains(&(p % 5)) && !even {
                        violations.push("p = 2,3,4 mod 5 => even order".to_string());
                    }
                }
                _ => {}
            }
            rows.push(GaloisRow {
                p,
                field: spec.name.clone(),
                n: spec.n,
                frobenius_order: t,
                even_order: even,
                splitting_count: split,
                residues: [p % 3, p % 4, p % 5],
                violations,
            });
        }
    }
    rows
}

/// Discriminant and its factorization for each catalog polynomial (informational).
pub fn discriminant_summary(entry: &CatalogEntry) -> String {
    let mut out = String::new();
    let mut polys: BTreeMap<String, Vec<i64>> = BTreeMap::new();
    polys.insert("generic".into(), entry.f_integer.clone());
    for e in &entry.exceptional_primes {
        polys.insert(format!("p={}", e.p), e.f_integer.clone());
    }
    for (tag, f) in polys {
        let d = integer_discriminant(&f);
        let factors: Vec<String> = factor_integer(&d)
            .into_iter()
            .map(|(q, e)| {
                if e == 1 {
                    q.to_string()
                } else {
                    format!("{q}^{e}")
                }
            })
            .collect();
        let sign = if d < BigInt::from(0) { "-" } else { "" };
        let _ = writeln!(
            out,
            "{} [{tag}] disc({}) = {d} = {sign}{}",
            entry.name,
            format_integer_poly(&f),
            factors.join(" * ")
        );
    }
    out
}

pub fn format_integer_poly(f: &[i64]) -> String {
    let mut terms = Vec::new();
    for (i, &c) in f.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mag = c.unsigned_abs();
        let body = match (i, mag) {
            (0, m) => m.to_string(),
            (1, 1) => "x".into(),
            (1, m) => format!("{m}x"),
            (i, 1) => format!("x^{i}"),
            (i, m) => format!("{m}x^{i}"),
        };
        if terms.is_empty() {
            terms.push(if c < 0 { format!("-{body}") } else { body });
        } else {
            terms.push(format!("{} {body}", if c < 0 { "-" } else { "+" }));
        }
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" ")
    }
}

pub fn format_slopes(slopes: &[Slope]) -> String {
    let parts: Vec<String> = slopes.iter().map(|s| s.to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}

fn join<T: ToString>(xs: &[T], sep: &str) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

fn int_list(xs: &[Int]) -> Vec<String> {
    xs.iter().map(|x| x.0.to_string()).collect()
}

/// One JSON object per line, keys in declaration order.
pub fn render_jsonl(reports: &[VerificationReport]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&serde_json::to_string(r).expect("reports serialize"));
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct CsvRow<'a> {
    family: String,
    name: &'a str,
    p: u32,
    m: u32,
    f_integer: String,
    genus: String,
    counts: String,
    l_polynomial: String,
    slopes: String,
    supersingular: String,
    p_rank: String,
    frobenius_order: String,
    expected_supersingular: String,
    verdict: String,
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn render_csv(reports: &[VerificationReport]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in reports {
        w.serialize(CsvRow {
            family: r.curve.family.to_string(),
            name: &r.curve.name,
            p: r.curve.p,
            m: r.curve.m,
            f_integer: join(&r.curve.f_integer, ";"),
            genus: opt(r.genus),
            counts: join(&r.counts, ";"),
            l_polynomial: int_list(&r.l_polynomial).join(";"),
            slopes: r
                .slopes
                .iter()
                .map(|s| format!("{}/{}x{}", s.num, s.den, s.mult))
                .collect::<Vec<_>>()
                .join(";"),
            supersingular: opt(r.supersingular),
            p_rank: opt(r.p_rank),
            frobenius_order: opt(r.galois.as_ref().and_then(|g| g.frobenius_order)),
            expected_supersingular: opt(r.expected_supersingular),
            verdict: opt(r.verdict),
        })
        .expect("csv rows serialize");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8")
}

pub fn render_table(reports: &[VerificationReport]) -> String {
    let mut rows: Vec<[String; 9]> = vec![[
        "family".into(),
        "p".into(),
        "g".into(),
        "N_1..N_g".into(),
        "slopes".into(),
        "ss".into(),
        "p-rank".into(),
        "frob".into(),
        "verdict".into(),
    ]];
    for r in reports {
        let frob = r
            .galois
            .as_ref()
            .map_or(String::new(), |g| match g.frobenius_order {
                Some(t) => format!("{t} ({})", if t % 2 == 0 { "even" } else { "odd" }),
                None => "ramified".into(),
            });
        let verdict = match (&r.verdict, &r.reason) {
            (Some(v), Some(why)) => format!("{v}: {why}"),
            (Some(v), None) => v.to_string(),
            (None, _) => String::new(),
        };
        rows.push([
            r.curve.family.to_string(),
            r.curve.p.to_string(),
            opt(r.genus),
            join(&r.counts, ","),
            format_slopes(&r.slopes),
            opt(r.supersingular),
            opt(r.p_rank),
            frob,
            verdict,
        ]);
    }
    let mut widths = [0usize; 9];
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    for row in &rows {
        let line: Vec<String> = row
            .iter()
            .zip(widths)
            .map(|(cell, w)| format!("{cell:<w$}"))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}
