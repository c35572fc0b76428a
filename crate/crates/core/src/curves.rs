//! Superelliptic models `y^m = f(x)` over `F_p`, family membership, the
//! `y^4 = u f(u)^2` to `y^2 = x f(x^2)` change of model, and the built-in
//! catalog of explicit supersingular curves.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ff::{FpPoly, PrimeModulus};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("InseparableModel: f = {f} has a repeated factor over F_{p}")]
    InseparableModel { f: String, p: u32 },
    #[error("WildCover: m = {m} is divisible by p = {p}")]
    WildCover { m: u32, p: u32 },
    #[error("UnsupportedInfinity: gcd(m, deg f) = {delta} is neither 1 nor m = {m}")]
    UnsupportedInfinity { m: u32, delta: u32 },
    #[error("ZeroConstantTerm: the cubic must not vanish at 0")]
    ZeroConstantTerm,
    #[error("InvalidModel: {0}")]
    InvalidModel(String),
}

/// A smooth superelliptic model `y^m = f(x)` over `F_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperellipticCurve {
    p: PrimeModulus,
    m: u32,
    f: FpPoly,
    degree: u32,
    delta: u32,
    genus: u32,
}

/// Validates the model and computes its ramification data.
pub fn make_curve(p: PrimeModulus, m: u32, f: FpPoly) -> Result<SuperellipticCurve, CurveError> {
    SuperellipticCurve::new(p, m, f)
}

impl SuperellipticCurve {
    pub fn new(p: PrimeModulus, m: u32, f: FpPoly) -> Result<Self, CurveError> {
        if m < 2 {
            return Err(CurveError::InvalidModel(format!(
                "m = {m} must be at least 2"
            )));
        }
        if f.modulus() != p {
            return Err(CurveError::InvalidModel(format!(
                "polynomial is over F_{} but the curve is over F_{p}",
                f.modulus()
            )));
        }
        let degree = match f.degree() {
            Some(d) if d >= 1 => d as u32,
            _ => {
                return Err(CurveError::InvalidModel(
                    "f must have degree at least 1".into(),
                ))
            }
        };
        if !f.is_separable() {
            return Err(CurveError::InseparableModel {
                f: f.to_string(),
                p: p.get(),
            });
        }
        if m % p.get() == 0 {
            return Err(CurveError::WildCover { m, p: p.get() });
        }
        let delta = m.gcd(&degree);
        if delta != 1 && delta != m {
            return Err(CurveError::UnsupportedInfinity { m, delta });
        }
        let genus = ((degree - 1) * (m - 1) + 1 - delta) / 2;
        Ok(SuperellipticCurve {
            p,
            m,
            f,
            degree,
            delta,
            genus,
        })
    }

    /// Reduces signed integer coefficients (low-to-high) mod `p` and builds the model.
    pub fn from_integer(p: PrimeModulus, m: u32, f: &[i64]) -> Result<Self, CurveError> {
        Self::new(p, m, FpPoly::from_signed(p, f))
    }

    pub fn prime(&self) -> PrimeModulus {
        self.p
    }

    pub fn exponent(&self) -> u32 {
        self.m
    }

    pub fn polynomial(&self) -> &FpPoly {
        &self.f
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// `gcd(m, deg f)`: 1 means one rational point at infinity, `m` means the
    /// points at infinity are the roots of `v^m = lc(f)`.
    pub fn delta(&self) -> u32 {
        self.delta
    }

    /// `((d - 1)(m - 1) + 1 - delta) / 2` by Riemann-Hurwitz.
    pub fn genus(&self) -> u32 {
        self.genus
    }

    /// The same curve after `x -> x + c`.
    pub fn translate(&self, c: u32) -> Result<Self, CurveError> {
        Self::new(self.p, self.m, self.f.shift(c))
    }
}

impl fmt::Display for SuperellipticCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^{} = {} over F_{}", self.m, self.f, self.p)
    }
}

pub fn genus(curve: &SuperellipticCurve) -> u32 {
    curve.genus()
}

/// The hyperelliptic model `y^2 = x f3(x^2)` of the quartic cover
/// `y^4 = u f3(u)^2`, obtained from `x = y^2 / f3(u)`, `u = x^2`.
pub fn m8_to_hyperelliptic(f3: &FpPoly, p: PrimeModulus) -> Result<SuperellipticCurve, CurveError> {
    if f3.modulus() != p {
        return Err(CurveError::InvalidModel(
            "cubic is over a different prime".into(),
        ));
    }
    if f3.degree() != Some(3) {
        return Err(CurveError::InvalidModel(format!(
            "expected a cubic, got degree {:?}",
            f3.degree()
        )));
    }
    if p.get() == 2 {
        return Err(CurveError::WildCover { m: 2, p: 2 });
    }
    if f3.coeff(0) == 0 {
        return Err(CurveError::ZeroConstantTerm);
    }
    if !f3.is_separable() {
        return Err(CurveError::InseparableModel {
            f: f3.to_string(),
            p: p.get(),
        });
    }
    make_curve(p, 2, f3.substitute_square().mul_x())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyLabel {
    M6,
    M8,
    M16,
    Other,
}

impl fmt::Display for FamilyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FamilyLabel::M6 => "M6",
            FamilyLabel::M8 => "M8",
            FamilyLabel::M16 => "M16",
            FamilyLabel::Other => "Other",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for FamilyLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().replace(['(', ')'], "").as_str() {
            "M6" => Ok(FamilyLabel::M6),
            "M8" => Ok(FamilyLabel::M8),
            "M16" => Ok(FamilyLabel::M16),
            "OTHER" => Ok(FamilyLabel::Other),
            _ => Err(format!("unknown family {s:?}")),
        }
    }
}

/// Which of the three special families a valid model falls in.
pub fn family_of(curve: &SuperellipticCurve) -> FamilyLabel {
    let f = curve.polynomial();
    match (curve.exponent(), curve.degree()) {
        (3, 4) => FamilyLabel::M6,
        (5, 4) | (5, 5) => FamilyLabel::M16,
        (2, 7) => {
            let odd_only = (0..=7).step_by(2).all(|i| f.coeff(i) == 0);
            if odd_only && f.coeff(1) != 0 {
                FamilyLabel::M8
            } else {
                FamilyLabel::Other
            }
        }
        _ => FamilyLabel::Other,
    }
}

/// `p mod modulus` lies in `residues`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceCondition {
    pub modulus: u32,
    pub residues: Vec<u32>,
}

impl CongruenceCondition {
    pub fn holds(&self, p: u32) -> bool {
        self.residues.contains(&(p % self.modulus))
    }
}

impl fmt::Display for CongruenceCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rs: Vec<String> = self.residues.iter().map(|r| r.to_string()).collect();
        write!(f, "p = {} mod {}", rs.join("|"), self.modulus)
    }
}

/// How `f_integer` of a catalog entry turns into a model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    /// `y^m = f(x)` directly.
    Superelliptic,
    /// `f` is the cubic of `y^4 = u f(u)^2`; the curve is `y^2 = x f(x^2)`.
    QuarticCover,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalPrime {
    pub p: u32,
    pub f_integer: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub label: FamilyLabel,
    pub name: String,
    pub model: ModelKind,
    pub m: u32,
    /// Integer coefficients, low degree first.
    pub f_integer: Vec<i64>,
    pub prime_condition: CongruenceCondition,
    #[serde(default)]
    pub exceptional_primes: Vec<ExceptionalPrime>,
    /// Also expect non-supersingular reduction at good primes outside the condition.
    #[serde(default)]
    pub converse: bool,
}

impl CatalogEntry {
    /// The integer polynomial used at `p`: the replacement at an exceptional prime,
    /// otherwise `f_integer`.
    pub fn polynomial_for(&self, p: u32) -> &[i64] {
        self.exceptional_primes
            .iter()
            .find(|e| e.p == p)
            .map_or(&self.f_integer, |e| &e.f_integer)
    }

    pub fn is_exceptional(&self, p: u32) -> bool {
        self.exceptional_primes.iter().any(|e| e.p == p)
    }

    pub fn curve_at(&self, p: PrimeModulus) -> Result<SuperellipticCurve, CurveError> {
        let f = FpPoly::from_signed(p, self.polynomial_for(p.get()));
        match self.model {
            ModelKind::Superelliptic => make_curve(p, self.m, f),
            ModelKind::QuarticCover => m8_to_hyperelliptic(&f, p),
        }
    }

    /// The integer polynomial on the right of the smooth model at `p`.
    pub fn model_polynomial(&self, p: u32) -> Vec<i64> {
        let f = self.polynomial_for(p);
        match self.model {
            ModelKind::Superelliptic => f.to_vec(),
            ModelKind::QuarticCover => {
                let mut out = vec![0i64; 2 * f.len()];
                for (i, &c) in f.iter().enumerate() {
                    out[2 * i + 1] = c;
                }
                out
            }
        }
    }
}

/// The three explicit curves: the Picard curve `y^3 = x^4 - x`, the genus-3
/// hyperelliptic curve from `f = u^3 + 6u^2 + 9u + 1`, and the cyclic plane
/// quintic `y^5 = x^4 - 24x^3 + 3x^2 + x`.
pub fn builtin_catalog() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            label: FamilyLabel::M6,
            name: "picard-x4-x".into(),
            model: ModelKind::Superelliptic,
            m: 3,
            f_integer: vec![0, -1, 0, 0, 1],
            prime_condition: CongruenceCondition {
                modulus: 3,
                residues: vec![2],
            },
            exceptional_primes: vec![],
            converse: true,
        },
        CatalogEntry {
            label: FamilyLabel::M8,
            name: "weng-u3-6u2-9u-1".into(),
            model: ModelKind::QuarticCover,
            m: 2,
            f_integer: vec![1, 9, 6, 1],
            prime_condition: CongruenceCondition {
                modulus: 4,
                residues: vec![3],
            },
            exceptional_primes: vec![ExceptionalPrime {
                p: 3,
                f_integer: vec![7, 14, 7, 1],
            }],
            converse: false,
        },
        CatalogEntry {
            label: FamilyLabel::M16,
            name: "somoza-cpq".into(),
            model: ModelKind::Superelliptic,
            m: 5,
            f_integer: vec![0, 1, 3, -24, 1],
            prime_condition: CongruenceCondition {
                modulus: 5,
                residues: vec![2, 3, 4],
            },
            exceptional_primes: vec![ExceptionalPrime {
                p: 3,
                f_integer: vec![0, 7, -7, 0, 1],
            }],
            converse: false,
        },
    ]
}

/// Discriminant of an integer polynomial, `(-1)^{n(n-1)/2} Res(f, f') / lc(f)`.
pub fn integer_discriminant(f: &[i64]) -> BigInt {
    let f: Vec<BigInt> = trim(f).iter().map(|&c| BigInt::from(c)).collect();
    let n = f.len().saturating_sub(1);
    if n == 0 {
        return BigInt::zero();
    }
    if n == 1 {
        return BigInt::one();
    }
    let df: Vec<BigInt> = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();
    let res = resultant(&f, &df);
    let sign = if (n * (n - 1) / 2) % 2 == 0 { 1 } else { -1 };
    let lead = f.last().unwrap();
    res * BigInt::from(sign) / lead
}

fn trim(f: &[i64]) -> &[i64] {
    let len = f.iter().rposition(|&c| c != 0).map_or(0, |i| i + 1);
    &f[..len]
}

/// Sylvester resultant by fraction-free (Bareiss) elimination.
fn resultant(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let da = a.len() - 1;
    let db = b.len() - 1;
    let size = da + db;
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    // Rows hold coefficients high-to-low, shifted.
    for r in 0..db {
        for (j, c) in a.iter().rev().enumerate() {
            mat[r][r + j] = c.clone();
        }
    }
    for r in 0..da {
        for (j, c) in b.iter().rev().enumerate() {
            mat[db + r][r + j] = c.clone();
        }
    }
    bareiss_determinant(mat)
}

fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Prime factorization `(prime, exponent)` of `|n|` by trial division.
pub fn factor_integer(n: &BigInt) -> Vec<(u64, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut d = 2u64;
    while BigInt::from(d) * BigInt::from(d) <= n {
        let bd = BigInt::from(d);
        let mut e = 0;
        while (&n % &bd).is_zero() {
            n /= &bd;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > BigInt::one() {
        let last: u64 = n.try_into().expect("cofactor fits after trial division");
        out.push((last, 1));
    }
    out
}
