//! Prime fields, extension fields `F_{p^k}` in a polynomial basis, and dense
//! univariate polynomials over `F_p`.
//!
//! Elements of `F_{p^k}` are plain coefficient arrays; all arithmetic goes
//! through the [`FqContext`] that owns the modulus polynomial. A context is
//! immutable once built and can be shared freely between threads.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::ToPrimitive;
use thiserror::Error;

/// Primes must stay below `2^20` so that sums of up to `2k` products of
/// residues fit in a `u64` accumulator.
pub const PRIME_BOUND: u64 = 1 << 20;

/// Largest supported extension degree.
pub const MAX_EXTENSION_DEGREE: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {0} is outside the supported range 2 <= p < 2^20")]
    PrimeOutOfRange(u64),
    #[error("extension degree {0} is outside the supported range 1..=12")]
    DegreeOutOfRange(usize),
    #[error("exponent m = {m} is divisible by the characteristic {p}")]
    WildCover { m: u64, p: u32 },
    #[error("m = {0} must be at least 2")]
    InvalidExponent(u64),
    #[error("field of order {0} is too large to enumerate or factor")]
    FieldTooLarge(BigUint),
}

/// Deterministic trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime factors of `n` in increasing order (trial division).
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// A prime `p` with `2 <= p < 2^20`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrimeModulus(u32);

impl PrimeModulus {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if !(2..PRIME_BOUND).contains(&p) {
            return Err(FieldError::PrimeOutOfRange(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(PrimeModulus(p as u32))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }
}

impl fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[inline]
fn mod_pow(base: u64, mut e: u64, p: u64) -> u64 {
    let mut b = base % p;
    let mut acc = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

#[inline]
fn mod_inv(a: u32, p: u32) -> u32 {
    debug_assert!(a % p != 0);
    mod_pow(a as u64, p as u64 - 2, p as u64) as u32
}

/// Dense polynomial over `F_p`, coefficients low-to-high, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpPoly {
    p: u32,
    coeffs: Vec<u32>,
}

impl FpPoly {
    /// Builds a polynomial from unsigned coefficients (low-to-high), reducing mod `p`.
    pub fn new(p: PrimeModulus, coeffs: &[u64]) -> Self {
        let p = p.get();
        let mut poly = FpPoly {
            p,
            coeffs: coeffs.iter().map(|&c| (c % p as u64) as u32).collect(),
        };
        poly.normalize();
        poly
    }

    /// Reduces signed integer coefficients to their representatives in `[0, p)`.
    pub fn from_signed(p: PrimeModulus, coeffs: &[i64]) -> Self {
        let pp = p.get() as i64;
        let reduced: Vec<u64> = coeffs.iter().map(|&c| c.rem_euclid(pp) as u64).collect();
        Self::new(p, &reduced)
    }

    pub fn zero(p: PrimeModulus) -> Self {
        FpPoly {
            p: p.get(),
            coeffs: Vec::new(),
        }
    }

    pub fn one(p: PrimeModulus) -> Self {
        Self::new(p, &[1])
    }

    /// The polynomial `x`.
    pub fn x(p: PrimeModulus) -> Self {
        Self::new(p, &[0, 1])
    }

    fn from_raw(p: u32, coeffs: Vec<u32>) -> Self {
        let mut poly = FpPoly { p, coeffs };
        poly.normalize();
        poly
    }

    fn normalize(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn modulus(&self) -> PrimeModulus {
        PrimeModulus(self.p)
    }

    pub fn coefficients(&self) -> &[u32] {
        &self.coeffs
    }

    /// Coefficient of `x^i`; zero past the degree.
    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading_coefficient(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coefficient() == 1
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| ((self.coeff(i) as u64 + other.coeff(i) as u64) % self.p as u64) as u32)
            .collect();
        Self::from_raw(self.p, coeffs)
    }

    pub fn neg(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| if c == 0 { 0 } else { self.p - c })
            .collect();
        Self::from_raw(self.p, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: u32) -> Self {
        let p = self.p as u64;
        let coeffs = self
            .coeffs
            .iter()
            .map(|&a| (a as u64 * (c as u64 % p) % p) as u32)
            .collect();
        Self::from_raw(self.p, coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::from_raw(self.p, Vec::new());
        }
        let p = self.p as u64;
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + a as u64 * b as u64) % p;
            }
        }
        Self::from_raw(self.p, out.into_iter().map(|c| c as u32).collect())
    }

    /// Euclidean division. Returns `None` when `divisor` is zero.
    pub fn div_rem(&self, divisor: &Self) -> Option<(Self, Self)> {
        let dd = divisor.degree()?;
        let p = self.p as u64;
        let inv_lead = mod_inv(divisor.leading_coefficient(), self.p) as u64;
        let mut rem: Vec<u64> = self.coeffs.iter().map(|&c| c as u64).collect();
        if rem.len() <= dd {
            return Some((Self::from_raw(self.p, Vec::new()), self.clone()));
        }
        let mut quot = vec![0u32; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i] % p * inv_lead % p;
            if c == 0 {
                continue;
            }
            quot[i - dd] = c as u32;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                let t = c * d as u64 % p;
                rem[i - dd + j] = (rem[i - dd + j] + p - t) % p;
            }
        }
        rem.truncate(dd);
        Some((
            Self::from_raw(self.p, quot),
            Self::from_raw(self.p, rem.into_iter().map(|c| c as u32).collect()),
        ))
    }

    pub fn rem(&self, divisor: &Self) -> Option<Self> {
        self.div_rem(divisor).map(|(_, r)| r)
    }

    /// Scales to leading coefficient 1; the zero polynomial is returned unchanged.
    pub fn to_monic(&self) -> Self {
        match self.leading_coefficient() {
            0 | 1 => self.clone(),
            lc => self.scale(mod_inv(lc, self.p)),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.to_monic()
    }

    pub fn derivative(&self) -> Self {
        let p = self.p as u64;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| ((i as u64 % p) * c as u64 % p) as u32)
            .collect();
        Self::from_raw(self.p, coeffs)
    }

    /// `gcd(f, f') = 1`. Constants count as separable, zero does not.
    pub fn is_separable(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// Horner evaluation at a point of `F_p`.
    pub fn eval(&self, x: u32) -> u32 {
        let p = self.p as u64;
        let x = x as u64 % p;
        self.coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| (acc * x + c as u64) % p) as u32
    }

    /// `f(x + c)`.
    pub fn shift(&self, c: u32) -> Self {
        let lin = Self::from_raw(self.p, vec![c % self.p, 1]);
        self.compose(&lin)
    }

    /// `f(g(x))` by Horner's rule.
    pub fn compose(&self, inner: &Self) -> Self {
        let mut acc = Self::from_raw(self.p, Vec::new());
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&Self::from_raw(self.p, vec![c]));
        }
        acc
    }

    /// `f(x^2)`.
    pub fn substitute_square(&self) -> Self {
        let mut coeffs = vec![0u32; self.coeffs.len() * 2];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[2 * i] = c;
        }
        Self::from_raw(self.p, coeffs)
    }

    /// `x * f(x)`.
    pub fn mul_x(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(0);
        coeffs.extend_from_slice(&self.coeffs);
        Self::from_raw(self.p, coeffs)
    }

    /// `self^e mod modulus`.
    pub fn pow_mod(&self, e: &BigUint, modulus: &Self) -> Self {
        let mut acc = Self::one(self.modulus())
            .rem(modulus)
            .expect("nonzero modulus");
        let base = self.rem(modulus).expect("nonzero modulus");
        for i in (0..e.bits()).rev() {
            acc = acc.mul(&acc).rem(modulus).unwrap();
            if e.bit(i) {
                acc = acc.mul(&base).rem(modulus).unwrap();
            }
        }
        acc
    }

    /// Rabin's test: `x^{p^k} = x mod f` and `gcd(x^{p^{k/l}} - x, f) = 1`
    /// for every prime `l | k`.
    pub fn is_irreducible(&self) -> bool {
        let Some(k) = self.degree() else {
            return false;
        };
        if k == 0 {
            return false;
        }
        let f = self.to_monic();
        let pm = self.modulus();
        let x = Self::x(pm).rem(&f).unwrap();
        let p = BigUint::from(self.p);
        // frob[j] = x^{p^j} mod f
        let mut frob = Vec::with_capacity(k + 1);
        frob.push(x.clone());
        for j in 1..=k {
            let next = frob[j - 1].pow_mod(&p, &f);
            frob.push(next);
        }
        if frob[k] != x {
            return false;
        }
        prime_factors(k as u64).into_iter().all(|l| {
            let h = frob[k / l as usize].sub(&x);
            f.gcd(&h).degree() == Some(0)
        })
    }
}

impl fmt::Debug for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpPoly[p={}]({})", self.p, self)
    }
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, c) => write!(f, "{c}*x")?,
                (i, 1) => write!(f, "x^{i}")?,
                (i, c) => write!(f, "{c}*x^{i}")?,
            }
        }
        Ok(())
    }
}

/// An element of `F_{p^k}`: coefficients of `1, t, ..., t^{k-1}` where `t` is
/// the class of `x` modulo the context's modulus. Unused slots are zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqElement {
    c: [u32; MAX_EXTENSION_DEGREE],
}

impl FqElement {
    pub fn coefficients(&self, k: usize) -> &[u32] {
        &self.c[..k]
    }
}

/// The finite field `F_p[x]/(modulus)` with `q = p^k` elements.
#[derive(Debug, Clone)]
pub struct FqContext {
    p: PrimeModulus,
    k: usize,
    modulus: FpPoly,
    /// `p - modulus[j]` for `j < k`, used in reduction.
    neg_low: [u64; MAX_EXTENSION_DEGREE],
    order: BigUint,
    order_u64: Option<u64>,
    generator: Option<FqElement>,
}

/// Builds `F_{p^k}` with the lexicographically smallest monic irreducible
/// modulus, comparing coefficient vectors `(c_0, ..., c_{k-1})` from `c_0`.
pub fn make_extension(p: PrimeModulus, k: usize) -> Result<FqContext, FieldError> {
    FqContext::new(p, k)
}

impl FqContext {
    pub fn new(p: PrimeModulus, k: usize) -> Result<Self, FieldError> {
        if !(1..=MAX_EXTENSION_DEGREE).contains(&k) {
            return Err(FieldError::DegreeOutOfRange(k));
        }
        let modulus = smallest_irreducible(p, k);
        Ok(Self::with_modulus_unchecked(p, k, modulus))
    }

    fn with_modulus_unchecked(p: PrimeModulus, k: usize, modulus: FpPoly) -> Self {
        let pp = p.get() as u64;
        let mut neg_low = [0u64; MAX_EXTENSION_DEGREE];
        for (j, slot) in neg_low.iter_mut().enumerate().take(k) {
            *slot = (pp - modulus.coeff(j) as u64) % pp;
        }
        let order = BigUint::from(p.get()).pow(k as u32);
        let order_u64 = order.to_u64();
        FqContext {
            p,
            k,
            modulus,
            neg_low,
            order,
            order_u64,
            generator: None,
        }
    }

    /// Attaches a multiplicative generator found by [`FqContext::find_generator`].
    pub fn with_generator(mut self) -> Result<Self, FieldError> {
        let g = self.find_generator()?;
        self.generator = Some(g);
        Ok(self)
    }

    pub fn characteristic(&self) -> PrimeModulus {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn modulus(&self) -> &FpPoly {
        &self.modulus
    }

    /// `q = p^k`.
    pub fn order(&self) -> &BigUint {
        &self.order
    }

    /// `q` when it fits in a `u64`.
    pub fn order_u64(&self) -> Option<u64> {
        self.order_u64
    }

    pub fn generator(&self) -> Option<&FqElement> {
        self.generator.as_ref()
    }

    pub fn zero(&self) -> FqElement {
        FqElement {
            c: [0; MAX_EXTENSION_DEGREE],
        }
    }

    pub fn one(&self) -> FqElement {
        self.from_base(1)
    }

    /// Canonical embedding of `F_p`.
    pub fn from_base(&self, a: u32) -> FqElement {
        let mut e = self.zero();
        e.c[0] = a % self.p.get();
        e
    }

    /// The class of `x`, reduced (so `x mod (x + c) = -c` when `k = 1`).
    pub fn primitive_element(&self) -> FqElement {
        self.from_poly(&FpPoly::x(self.p))
    }

    /// Reduces a polynomial over `F_p` into the field.
    pub fn from_poly(&self, f: &FpPoly) -> FqElement {
        let r = f.rem(&self.modulus).expect("modulus is nonzero");
        let mut e = self.zero();
        for (i, &c) in r.coefficients().iter().enumerate() {
            e.c[i] = c;
        }
        e
    }

    pub fn to_poly(&self, a: &FqElement) -> FpPoly {
        FpPoly::from_raw(self.p.get(), a.c[..self.k].to_vec())
    }

    /// Element with base-`p` digits of `index`, `c_0` least significant.
    /// This numbering is the fixed element ordering used for enumeration.
    pub fn from_index(&self, mut index: u64) -> FqElement {
        let p = self.p.get() as u64;
        let mut e = self.zero();
        for slot in e.c.iter_mut().take(self.k) {
            *slot = (index % p) as u32;
            index /= p;
        }
        e
    }

    /// Inverse of [`FqContext::from_index`].
    #[inline]
    pub fn index_of(&self, a: &FqElement) -> u64 {
        let p = self.p.get() as u64;
        a.c[..self.k]
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * p + c as u64)
    }

    /// Steps to the next element in index order, wrapping to zero.
    #[inline]
    pub fn increment(&self, a: &mut FqElement) {
        let p = self.p.get();
        for slot in a.c.iter_mut().take(self.k) {
            *slot += 1;
            if *slot < p {
                return;
            }
            *slot = 0;
        }
    }

    /// All elements in index order. Panics if `q` does not fit in a `u64`.
    pub fn elements(&self) -> impl Iterator<Item = FqElement> + '_ {
        let q = self.order_u64.expect("field too large to enumerate");
        (0..q).map(move |i| self.from_index(i))
    }

    #[inline]
    pub fn is_zero(&self, a: &FqElement) -> bool {
        a.c[..self.k].iter().all(|&c| c == 0)
    }

    #[inline]
    pub fn is_one(&self, a: &FqElement) -> bool {
        a.c[0] == 1 && a.c[1..self.k].iter().all(|&c| c == 0)
    }

    #[inline]
    pub fn add(&self, a: &FqElement, b: &FqElement) -> FqElement {
        let p = self.p.get();
        let mut out = self.zero();
        for i in 0..self.k {
            let s = a.c[i] + b.c[i];
            out.c[i] = if s >= p { s - p } else { s };
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: &FqElement) -> FqElement {
        let p = self.p.get();
        let mut out = self.zero();
        for i in 0..self.k {
            out.c[i] = if a.c[i] == 0 { 0 } else { p - a.c[i] };
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: &FqElement, b: &FqElement) -> FqElement {
        self.add(a, &self.neg(b))
    }

    /// Adds an element of `F_p` to the constant coefficient.
    #[inline]
    pub fn add_base(&self, a: &FqElement, c: u32) -> FqElement {
        let p = self.p.get();
        let mut out = *a;
        let s = out.c[0] + c;
        out.c[0] = if s >= p { s - p } else { s };
        out
    }

    /// Schoolbook product followed by reduction against the monic modulus.
    #[inline]
    pub fn mul(&self, a: &FqElement, b: &FqElement) -> FqElement {
        let k = self.k;
        let p = self.p.get() as u64;
        if k == 1 {
            let mut out = self.zero();
            out.c[0] = (a.c[0] as u64 * b.c[0] as u64 % p) as u32;
            return out;
        }
        // Each product is < 2^40 and at most 2k - 1 <= 23 of them land in a slot,
        // plus k reduction terms < 2^40, so u64 never overflows.
        let mut t = [0u64; 2 * MAX_EXTENSION_DEGREE - 1];
        for i in 0..k {
            let ai = a.c[i] as u64;
            if ai == 0 {
                continue;
            }
            for j in 0..k {
                t[i + j] += ai * b.c[j] as u64;
            }
        }
        for i in (k..2 * k - 1).rev() {
            let c = t[i] % p;
            if c == 0 {
                continue;
            }
            for j in 0..k {
                t[i - k + j] += c * self.neg_low[j];
            }
        }
        let mut out = self.zero();
        for i in 0..k {
            out.c[i] = (t[i] % p) as u32;
        }
        out
    }

    #[inline]
    pub fn square(&self, a: &FqElement) -> FqElement {
        self.mul(a, a)
    }

    /// `a^e` with `0^0 = 1`.
    pub fn pow_u64(&self, a: &FqElement, e: u64) -> FqElement {
        self.pow_limbs(a, &[e])
    }

    /// `a^e` with `0^0 = 1`.
    pub fn pow(&self, a: &FqElement, e: &BigUint) -> FqElement {
        self.pow_limbs(a, &e.to_u64_digits())
    }

    /// Left-to-right square-and-multiply over little-endian 64-bit limbs.
    #[inline]
    pub fn pow_limbs(&self, a: &FqElement, limbs: &[u64]) -> FqElement {
        let mut acc = self.one();
        let mut started = false;
        for &limb in limbs.iter().rev() {
            for bit in (0..64).rev() {
                if started {
                    acc = self.square(&acc);
                }
                if (limb >> bit) & 1 == 1 {
                    acc = if started { self.mul(&acc, a) } else { *a };
                    started = true;
                }
            }
        }
        acc
    }

    /// Multiplicative inverse via `a^{q-2}`; `None` for zero.
    pub fn inv(&self, a: &FqElement) -> Option<FqElement> {
        if self.is_zero(a) {
            return None;
        }
        Some(self.pow(a, &(&self.order - 2u32)))
    }

    /// Frobenius `a -> a^p`.
    pub fn frobenius(&self, a: &FqElement) -> FqElement {
        self.pow_u64(a, self.p.get() as u64)
    }

    /// Evaluates an `F_p`-polynomial at an element by Horner's rule.
    #[inline]
    pub fn eval_poly(&self, f: &FpPoly, x: &FqElement) -> FqElement {
        let mut acc = self.zero();
        for &c in f.coefficients().iter().rev() {
            acc = self.add_base(&self.mul(&acc, x), c);
        }
        acc
    }

    /// `gcd(m, q - 1)`.
    pub fn root_class_count(&self, m: u64) -> u64 {
        let rem = ((&self.order - 1u32) % m).to_u64().expect("remainder < m");
        m.gcd(&rem)
    }

    /// Prepares the test "is `c` an `m`-th power" for repeated use.
    pub fn residue_test(&self, m: u64) -> Result<PowerResidueTest, FieldError> {
        if m < 2 {
            return Err(FieldError::InvalidExponent(m));
        }
        if m % self.p.get() as u64 == 0 {
            return Err(FieldError::WildCover { m, p: self.p.get() });
        }
        let classes = self.root_class_count(m);
        let exponent = (&self.order - 1u32) / classes;
        Ok(PowerResidueTest {
            classes,
            exponent: exponent.to_u64_digits(),
        })
    }

    /// `#{y in F_q : y^m = c}`.
    pub fn mth_root_count(&self, c: &FqElement, m: u64) -> Result<u64, FieldError> {
        Ok(self.residue_test(m)?.root_count(self, c))
    }

    /// Deterministic search for an element of order exactly `q - 1`, scanning
    /// nonzero elements in index order.
    pub fn find_generator(&self) -> Result<FqElement, FieldError> {
        let q = match self.order_u64 {
            Some(q) if q <= 1 << 48 => q,
            _ => return Err(FieldError::FieldTooLarge(self.order.clone())),
        };
        let n = q - 1;
        let cofactors: Vec<u64> = prime_factors(n).into_iter().map(|l| n / l).collect();
        (1..q)
            .map(|i| self.from_index(i))
            .find(|g| cofactors.iter().all(|&e| !self.is_one(&self.pow_u64(g, e))))
            .ok_or_else(|| FieldError::FieldTooLarge(self.order.clone()))
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: &FqElement) -> Option<u64> {
        let q = self.order_u64?;
        if self.is_zero(a) {
            return None;
        }
        let mut ord = q - 1;
        for l in prime_factors(q - 1) {
            while ord % l == 0 && self.is_one(&self.pow_u64(a, ord / l)) {
                ord /= l;
            }
        }
        Some(ord)
    }
}

/// Precomputed exponent `(q - 1) / gcd(m, q - 1)` for power-residue tests.
#[derive(Debug, Clone)]
pub struct PowerResidueTest {
    classes: u64,
    exponent: Vec<u64>,
}

impl PowerResidueTest {
    /// `gcd(m, q - 1)`: the number of roots of a nonzero `m`-th power.
    pub fn classes(&self) -> u64 {
        self.classes
    }

    #[inline]
    pub fn is_power(&self, ctx: &FqContext, c: &FqElement) -> bool {
        self.classes == 1 || ctx.is_one(&ctx.pow_limbs(c, &self.exponent))
    }

    #[inline]
    pub fn root_count(&self, ctx: &FqContext, c: &FqElement) -> u64 {
        if ctx.is_zero(c) {
            1
        } else if self.is_power(ctx, c) {
            self.classes
        } else {
            0
        }
    }
}

fn smallest_irreducible(p: PrimeModulus, k: usize) -> FpPoly {
    let pp = p.get() as u64;
    // Odometer over (c_0, ..., c_{k-1}) with c_0 most significant. For k >= 2
    // every candidate with c_0 = 0 is divisible by x, so start at c_0 = 1.
    let mut digits = vec![0u64; k];
    if k >= 2 {
        digits[0] = 1;
    }
    loop {
        let mut coeffs = digits.clone();
        coeffs.push(1);
        let f = FpPoly::new(p, &coeffs);
        if f.is_irreducible() {
            return f;
        }
        let mut i = k;
        loop {
            // An irreducible of every degree exists, so the odometer never wraps.
            i -= 1;
            digits[i] += 1;
            if digits[i] < pp {
                break;
            }
            digits[i] = 0;
        }
    }
}

impl fmt::Display for FqContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "F_{}^{} = F_{}[x]/({})",
            self.p, self.k, self.p, self.modulus
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pm(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    #[test]
    fn prime_modulus_validation() {
        assert!(PrimeModulus::new(2).is_ok());
        assert_eq!(PrimeModulus::new(1), Err(FieldError::PrimeOutOfRange(1)));
        assert_eq!(PrimeModulus::new(9), Err(FieldError::NotPrime(9)));
        assert!(PrimeModulus::new((1 << 20) - 3).is_ok()); // 1048573 is prime
        assert_eq!(
            PrimeModulus::new(1 << 20),
            Err(FieldError::PrimeOutOfRange(1 << 20))
        );
    }

    #[test]
    fn extension_moduli() {
        let f = make_extension(pm(2), 1).unwrap();
        assert_eq!(f.modulus().coefficients(), &[0, 1]);
        assert_eq!(f.order_u64(), Some(2));

        let f4 = make_extension(pm(2), 2).unwrap();
        assert_eq!(f4.modulus().coefficients(), &[1, 1, 1]);
        assert_eq!(f4.order_u64(), Some(4));

        let f9 = make_extension(pm(3), 2).unwrap();
        assert_eq!(f9.modulus().coefficients(), &[1, 0, 1]);
        assert_eq!(f9.order_u64(), Some(9));
    }

    #[test]
    fn extension_degree_range() {
        assert_eq!(
            make_extension(pm(5), 0).unwrap_err(),
            FieldError::DegreeOutOfRange(0)
        );
        assert_eq!(
            make_extension(pm(5), 13).unwrap_err(),
            FieldError::DegreeOutOfRange(13)
        );
        let big = make_extension(pm(1048573), 12).unwrap();
        assert!(big.order_u64().is_none());
        assert!(big.modulus().is_irreducible());
    }

    /// Irreducibility by exhaustive search for a factor of degree <= k/2.
    fn irreducible_by_enumeration(f: &FpPoly) -> bool {
        let p = f.modulus();
        let k = f.degree().unwrap();
        for d in 1..=k / 2 {
            let count = (p.get() as u64).pow(d as u32);
            for idx in 0..count {
                let mut coeffs = Vec::new();
                let mut n = idx;
                for _ in 0..d {
                    coeffs.push(n % p.get() as u64);
                    n /= p.get() as u64;
                }
                coeffs.push(1);
                let g = FpPoly::new(p, &coeffs);
                if f.rem(&g).unwrap().is_zero() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn rabin_test_matches_enumeration() {
        for p in [2u64, 3, 5] {
            for k in 1..=4usize {
                let count = p.pow(k as u32);
                for idx in 0..count {
                    let mut coeffs = Vec::new();
                    let mut n = idx;
                    for _ in 0..k {
                        coeffs.push(n % p);
                        n /= p;
                    }
                    coeffs.push(1);
                    let f = FpPoly::new(pm(p), &coeffs);
                    assert_eq!(f.is_irreducible(), irreducible_by_enumeration(&f), "{f:?}");
                }
            }
        }
    }

    #[test]
    fn element_power_examples() {
        let f5 = make_extension(pm(5), 1).unwrap();
        assert_eq!(f5.pow_u64(&f5.one(), 1_000_000_000), f5.one());
        assert_eq!(f5.pow_u64(&f5.from_base(2), 4), f5.one());
        assert_eq!(f5.pow_u64(&f5.zero(), 0), f5.one());
        assert_eq!(f5.pow_u64(&f5.zero(), 3), f5.zero());

        let f4 = make_extension(pm(2), 2).unwrap();
        let x = f4.primitive_element();
        assert_eq!(f4.pow_u64(&x, 3), f4.one());
        assert_ne!(f4.pow_u64(&x, 1), f4.one());
    }

    #[test]
    fn mth_root_count_examples() {
        let f7 = make_extension(pm(7), 1).unwrap();
        assert_eq!(f7.mth_root_count(&f7.zero(), 3).unwrap(), 1);
        assert_eq!(f7.mth_root_count(&f7.one(), 3).unwrap(), 3);
        assert_eq!(f7.mth_root_count(&f7.from_base(3), 3).unwrap(), 0);
        assert_eq!(
            f7.mth_root_count(&f7.one(), 14).unwrap_err(),
            FieldError::WildCover { m: 14, p: 7 }
        );
        assert_eq!(
            f7.mth_root_count(&f7.one(), 1).unwrap_err(),
            FieldError::InvalidExponent(1)
        );
    }

    #[test]
    fn generator_examples() {
        let g2 = make_extension(pm(2), 1).unwrap().find_generator().unwrap();
        assert_eq!(g2.coefficients(1), &[1]);
        let g5 = make_extension(pm(5), 1).unwrap().find_generator().unwrap();
        assert_eq!(g5.coefficients(1), &[2]);
        let g7 = make_extension(pm(7), 1).unwrap().find_generator().unwrap();
        assert_eq!(g7.coefficients(1), &[3]);
    }

    #[test]
    fn generators_have_full_order() {
        for (p, k) in [(2, 4), (3, 3), (5, 2), (13, 2), (17, 3), (2, 8)] {
            let ctx = make_extension(pm(p), k).unwrap().with_generator().unwrap();
            let q = ctx.order_u64().unwrap();
            let g = ctx.generator().unwrap();
            assert_eq!(ctx.multiplicative_order(g), Some(q - 1));
        }
    }

    #[test]
    fn mth_root_count_matches_enumeration() {
        for (p, k) in [
            (2u64, 1),
            (2, 6),
            (2, 12),
            (3, 5),
            (5, 3),
            (7, 3),
            (13, 2),
            (17, 2),
            (61, 2),
            (4093, 1),
        ] {
            let ctx = make_extension(pm(p), k).unwrap();
            let q = ctx.order_u64().unwrap();
            assert!(q <= 4096);
            for m in [2u64, 3, 4, 5, 6, 9] {
                if m % p == 0 {
                    continue;
                }
                let mut hist = vec![0u64; q as usize];
                for y in ctx.elements() {
                    hist[ctx.index_of(&ctx.pow_u64(&y, m)) as usize] += 1;
                }
                let mut total = 0;
                for c in ctx.elements() {
                    let n = ctx.mth_root_count(&c, m).unwrap();
                    assert_eq!(n, hist[ctx.index_of(&c) as usize], "p={p} k={k} m={m}");
                    total += n;
                }
                assert_eq!(total, q);
            }
        }
    }

    #[test]
    fn poly_gcd_and_separability() {
        let p3 = pm(3);
        // x^4 - x = x(x - 1)^3 over F_3
        let f = FpPoly::from_signed(p3, &[0, -1, 0, 0, 1]);
        assert!(!f.is_separable());
        assert_eq!(f.gcd(&f.derivative()).degree(), Some(3));
        let g = FpPoly::from_signed(pm(2), &[0, -1, 0, 0, 1]);
        assert!(g.is_separable());
        assert_eq!(format!("{g}"), "x^4 + x");
    }

    #[test]
    fn poly_div_rem_reconstructs() {
        let p = pm(7);
        let a = FpPoly::new(p, &[3, 1, 4, 1, 5, 9, 2, 6]);
        let b = FpPoly::new(p, &[2, 7, 1, 8]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert!(r.degree().map_or(true, |d| d < 3));
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(a.div_rem(&FpPoly::zero(p)).is_none());
    }

    #[test]
    fn shift_and_substitution() {
        let p = pm(5);
        let f = FpPoly::new(p, &[1, 2, 3]);
        for x in 0..5 {
            assert_eq!(f.shift(2).eval(x), f.eval(x + 2));
            assert_eq!(f.substitute_square().eval(x), f.eval(x * x % 5));
            assert_eq!(f.mul_x().eval(x), x * f.eval(x) % 5);
        }
    }

    fn arb_context() -> impl Strategy<Value = FqContext> {
        (
            prop::sample::select(vec![2u64, 3, 5, 7, 13, 17]),
            1usize..=6,
        )
            .prop_map(|(p, k)| make_extension(pm(p), k).unwrap())
    }

    fn arb_element(ctx: &FqContext) -> impl Strategy<Value = FqElement> {
        let p = ctx.characteristic().get();
        let k = ctx.degree();
        let ctx = ctx.clone();
        prop::collection::vec(0..p, k).prop_map(move |cs| {
            ctx.from_poly(&FpPoly::new(
                ctx.characteristic(),
                &cs.iter().map(|&c| c as u64).collect::<Vec<_>>(),
            ))
        })
    }

    fn arb_triple() -> impl Strategy<Value = (FqContext, FqElement, FqElement, FqElement)> {
        arb_context().prop_flat_map(|ctx| {
            let a = arb_element(&ctx);
            let b = arb_element(&ctx);
            let c = arb_element(&ctx);
            (Just(ctx), a, b, c)
        })
    }

    proptest! {
        #[test]
        fn field_axioms((ctx, a, b, c) in arb_triple()) {
            prop_assert_eq!(ctx.add(&a, &b), ctx.add(&b, &a));
            prop_assert_eq!(ctx.mul(&a, &b), ctx.mul(&b, &a));
            prop_assert_eq!(ctx.mul(&ctx.mul(&a, &b), &c), ctx.mul(&a, &ctx.mul(&b, &c)));
            prop_assert_eq!(ctx.add(&ctx.add(&a, &b), &c), ctx.add(&a, &ctx.add(&b, &c)));
            prop_assert_eq!(
                ctx.mul(&a, &ctx.add(&b, &c)),
                ctx.add(&ctx.mul(&a, &b), &ctx.mul(&a, &c))
            );
            prop_assert_eq!(ctx.add(&a, &ctx.neg(&a)), ctx.zero());
            if let Some(inv) = ctx.inv(&a) {
                prop_assert!(ctx.is_one(&ctx.mul(&a, &inv)));
            } else {
                prop_assert!(ctx.is_zero(&a));
            }
        }

        #[test]
        fn frobenius_is_additive((ctx, a, b, _c) in arb_triple()) {
            let lhs = ctx.frobenius(&ctx.add(&a, &b));
            let rhs = ctx.add(&ctx.frobenius(&a), &ctx.frobenius(&b));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn index_round_trip((ctx, a, _b, _c) in arb_triple()) {
            prop_assert_eq!(ctx.from_index(ctx.index_of(&a)), a);
        }

        #[test]
        fn mul_agrees_with_poly_reduction((ctx, a, b, _c) in arb_triple()) {
            let expected = ctx.from_poly(&ctx.to_poly(&a).mul(&ctx.to_poly(&b)));
            prop_assert_eq!(ctx.mul(&a, &b), expected);
        }
    }
}
