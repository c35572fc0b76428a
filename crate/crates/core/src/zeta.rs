//! The L-polynomial `L(T) = prod (1 - alpha_i T)` of a curve from its first `g`
//! point counts, via Newton's identities and the functional equation.
//!
//! The characteristic polynomial of Frobenius is the reversal
//! `T^{2g} L(1/T)`; see [`LPolynomial::frobenius_charpoly`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::count::PointCounts;
use crate::ff::PrimeModulus;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZetaError {
    #[error("CountLengthMismatch: expected {expected} point counts, got {got}")]
    CountLengthMismatch { expected: usize, got: usize },
    #[error("NonIntegralCoefficient: a_{k} = {numerator}/{k} is not an integer")]
    NonIntegralCoefficient { k: usize, numerator: BigInt },
    #[error("WeilViolation: {0}")]
    WeilViolation(String),
}

/// Integer coefficients `a_0, ..., a_{2g}` of `L(T)`, low degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LPolynomial {
    p: PrimeModulus,
    genus: u32,
    coeffs: Vec<BigInt>,
}

impl LPolynomial {
    /// Wraps raw coefficients without validation; see [`validate_weil`].
    pub fn from_coefficients(p: PrimeModulus, coeffs: Vec<BigInt>) -> Self {
        assert!(coeffs.len() % 2 == 1, "L-polynomial must have even degree");
        let genus = (coeffs.len() / 2) as u32;
        LPolynomial { p, genus, coeffs }
    }

    /// Builds `L` from `a_0..a_g`, filling the tail by `a_{2g-i} = p^{g-i} a_i`.
    pub fn from_lower_half(p: PrimeModulus, lower: &[BigInt]) -> Self {
        let g = lower.len() - 1;
        let pb = BigInt::from(p.get());
        let mut coeffs = lower.to_vec();
        for i in (0..g).rev() {
            coeffs.push(&lower[i] * pb.pow((g - i) as u32));
        }
        Self::from_coefficients(p, coeffs)
    }

    pub fn prime(&self) -> PrimeModulus {
        self.p
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// `L(1)`, the order of the Jacobian over `F_p`.
    pub fn value_at_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// Characteristic polynomial of Frobenius, coefficients low degree first.
    pub fn frobenius_charpoly(&self) -> Vec<BigInt> {
        self.coeffs.iter().rev().cloned().collect()
    }

    /// Power sums `s_1..s_n` of the reciprocal roots.
    pub fn power_sums(&self, n: usize) -> Vec<BigInt> {
        let two_g = 2 * self.genus as usize;
        let a = |i: usize| -> BigInt {
            if i <= two_g {
                self.coeffs[i].clone()
            } else {
                BigInt::zero()
            }
        };
        let mut s: Vec<BigInt> = Vec::with_capacity(n + 1);
        s.push(BigInt::zero());
        for k in 1..=n {
            // s_k + a_1 s_{k-1} + ... + a_{k-1} s_1 + k a_k = 0
            let mut acc = a(k) * BigInt::from(k);
            for i in 1..k.min(two_g + 1) {
                acc += a(i) * &s[k - i];
            }
            s.push(-acc);
        }
        s.remove(0);
        s
    }

    /// `p^k + 1 - s_k`.
    pub fn predicted_count(&self, k: usize) -> BigInt {
        assert!(k >= 1);
        let s_k = self.power_sums(k).pop().unwrap();
        BigInt::from(self.p.get()).pow(k as u32) + 1 - s_k
    }
}

/// Recovers `L(T)` from `(N_1, ..., N_g)`.
pub fn l_polynomial(counts: &PointCounts) -> Result<LPolynomial, ZetaError> {
    l_polynomial_from_counts(counts.curve.prime(), counts.curve.genus(), &counts.counts)
}

pub fn l_polynomial_from_counts(
    p: PrimeModulus,
    genus: u32,
    counts: &[u64],
) -> Result<LPolynomial, ZetaError> {
    let g = genus as usize;
    if counts.len() != g {
        return Err(ZetaError::CountLengthMismatch {
            expected: g,
            got: counts.len(),
        });
    }
    let pb = BigInt::from(p.get());
    let s: Vec<BigInt> = counts
        .iter()
        .enumerate()
        .map(|(i, &n)| pb.pow(i as u32 + 1) + 1 - BigInt::from(n))
        .collect();
    let mut a = vec![BigInt::one()];
    for k in 1..=g {
        let mut numerator = s[k - 1].clone();
        for i in 1..k {
            numerator += &a[i] * &s[k - 1 - i];
        }
        let (quot, rem) = numerator.div_rem(&BigInt::from(k));
        if !rem.is_zero() {
            return Err(ZetaError::NonIntegralCoefficient { k, numerator });
        }
        a.push(-quot);
    }
    let l = LPolynomial::from_lower_half(p, &a);
    let report = validate_weil(&l);
    if !report.passed() {
        return Err(ZetaError::WeilViolation(report.failures().join(", ")));
    }
    Ok(l)
}

pub fn predicted_count(l: &LPolynomial, k: usize) -> BigInt {
    l.predicted_count(k)
}

/// Outcome of the integer Weil checks on an L-polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WeilReport {
    pub leading_one: bool,
    pub functional_equation: bool,
    pub coefficient_bounds: bool,
    pub positive_at_one: bool,
}

impl WeilReport {
    pub fn passed(&self) -> bool {
        self.leading_one
            && self.functional_equation
            && self.coefficient_bounds
            && self.positive_at_one
    }

    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.leading_one {
            out.push("a_0 != 1");
        }
        if !self.functional_equation {
            out.push("functional equation");
        }
        if !self.coefficient_bounds {
            out.push("coefficient bound");
        }
        if !self.positive_at_one {
            out.push("L(1) <= 0");
        }
        out
    }
}

fn binomial(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| {
        acc * BigInt::from(n - i) / BigInt::from(i + 1)
    })
}

/// `a_0 = 1`, `a_{2g-i} = p^{g-i} a_i`, `a_i^2 <= C(2g,i)^2 p^i`, `L(1) > 0`.
pub fn validate_weil(l: &LPolynomial) -> WeilReport {
    let g = l.genus as usize;
    let pb = BigInt::from(l.p.get());
    let a = &l.coeffs;
    let functional_equation = (0..=g).all(|i| a[2 * g - i] == &a[i] * pb.pow((g - i) as u32));
    let coefficient_bounds = (0..=2 * g).all(|i| {
        let c = binomial(2 * g, i);
        &a[i] * &a[i] <= &c * &c * pb.pow(i as u32)
    });
    WeilReport {
        leading_one: a[0].is_one(),
        functional_equation,
        coefficient_bounds,
        positive_at_one: l.value_at_one().is_positive(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pm(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn elliptic_supersingular() {
        let l = l_polynomial_from_counts(pm(3), 1, &[4]).unwrap();
        assert_eq!(l.coefficients(), big(&[1, 0, 3]).as_slice());
        assert_eq!(l.predicted_count(1), BigInt::from(4));
        assert_eq!(l.predicted_count(2), BigInt::from(16));
    }

    #[test]
    fn picard_at_two() {
        // f = x^4 - x vanishes on F_4, so N_2 = 5 and every s_k is 0.
        let l = l_polynomial_from_counts(pm(2), 3, &[3, 5, 9]).unwrap();
        assert_eq!(l.coefficients(), big(&[1, 0, 0, 0, 0, 0, 8]).as_slice());
        assert_eq!(l.value_at_one(), BigInt::from(9));
    }

    #[test]
    fn recurrence_with_nonzero_middle() {
        // s = (0, -4, 0): a_1 = 0, a_2 = 2, a_3 = 0.
        let l = l_polynomial_from_counts(pm(2), 3, &[3, 9, 9]).unwrap();
        assert_eq!(l.coefficients(), big(&[1, 0, 2, 0, 4, 0, 8]).as_slice());
        assert_eq!(l.value_at_one(), BigInt::from(15));
        for (k, n) in [(1, 3), (2, 9), (3, 9)] {
            assert_eq!(l.predicted_count(k), BigInt::from(n));
        }
    }

    #[test]
    fn all_traces_zero() {
        // N_k = p^k + 1 for k <= g forces a_1..a_g = 0 and a_{2g} = p^g.
        let p = 5u64;
        let counts: Vec<u64> = (1..=3).map(|k| p.pow(k) + 1).collect();
        let l = l_polynomial_from_counts(pm(p), 3, &counts).unwrap();
        assert_eq!(l.coefficients(), big(&[1, 0, 0, 0, 0, 0, 125]).as_slice());
    }

    #[test]
    fn non_integral_coefficient_detected() {
        // s_1 = 0, s_2 = 1 makes a_2 = -1/2.
        let err = l_polynomial_from_counts(pm(3), 2, &[4, 9]).unwrap_err();
        assert!(matches!(
            err,
            ZetaError::NonIntegralCoefficient { k: 2, .. }
        ));
    }

    #[test]
    fn weil_violation_detected() {
        // N_1 = 20 over F_3 with g = 1 gives a_1 = 16 > 2 sqrt 3.
        let err = l_polynomial_from_counts(pm(3), 1, &[20]).unwrap_err();
        assert!(matches!(err, ZetaError::WeilViolation(_)));
        assert!(matches!(
            l_polynomial_from_counts(pm(3), 2, &[4]).unwrap_err(),
            ZetaError::CountLengthMismatch {
                expected: 2,
                got: 1
            }
        ));
    }

    #[test]
    fn validation_reports() {
        let ok = LPolynomial::from_coefficients(pm(3), big(&[1, 0, 3]));
        assert!(validate_weil(&ok).passed());

        let bad = LPolynomial::from_coefficients(pm(3), big(&[1, 100, 3]));
        let r = validate_weil(&bad);
        assert!(!r.coefficient_bounds);
        assert!(r.functional_equation);

        // a_{2g} = -p^g breaks the functional equation at i = 0; with a_1 = -3
        // L(1) = 1 - 3 - 3 < 0 is also flagged.
        let neg = LPolynomial::from_coefficients(pm(3), big(&[1, -3, -3]));
        let r = validate_weil(&neg);
        assert!(!r.functional_equation);
        assert!(!r.positive_at_one);

        let lead = LPolynomial::from_coefficients(pm(3), big(&[2, 0, 6]));
        assert!(!validate_weil(&lead).leading_one);
    }

    #[test]
    fn charpoly_is_reversal() {
        let l = LPolynomial::from_coefficients(pm(3), big(&[1, -1, 3]));
        // x^2 - x + 3 low-to-high
        assert_eq!(l.frobenius_charpoly(), big(&[3, -1, 1]));
    }

    #[test]
    fn power_sums_beyond_degree() {
        // 1 + 3T^2 = (1 - i sqrt3 T)(1 + i sqrt3 T): s_k = 2 (-3)^{k/2} for even k.
        let l = LPolynomial::from_coefficients(pm(3), big(&[1, 0, 3]));
        let s = l.power_sums(6);
        assert_eq!(s, big(&[0, -6, 0, 18, 0, -54]));
    }
}
