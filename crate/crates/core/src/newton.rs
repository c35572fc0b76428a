//! `p`-adic Newton polygons of L-polynomials with exact rational slopes.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use crate::ff::PrimeModulus;
use crate::zeta::LPolynomial;

/// A slope `num/den` in lowest terms with its horizontal length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Slope {
    pub num: i64,
    pub den: i64,
    pub mult: u32,
}

impl Slope {
    fn new(rise: i64, run: i64) -> Self {
        debug_assert!(run > 0);
        let d = rise.gcd(&run);
        Slope {
            num: rise / d,
            den: run / d,
            mult: run as u32,
        }
    }

    fn same_value(&self, other: &Slope) -> bool {
        self.num == other.num && self.den == other.den
    }

    pub fn is_half(&self) -> bool {
        self.num == 1 && self.den == 2
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)?;
        } else {
            write!(f, "{}/{}", self.num, self.den)?;
        }
        if self.mult > 1 {
            write!(f, "x{}", self.mult)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub p: PrimeModulus,
    /// `(i, v_p(a_i))` for the nonzero coefficients.
    pub points: Vec<(usize, u32)>,
    /// Lower convex hull, from `(0, 0)` to `(2g, g)`.
    pub vertices: Vec<(usize, u32)>,
    /// Nondecreasing slopes; collinear segments are merged.
    pub slopes: Vec<Slope>,
}

/// `v_p(n)` for `n != 0`.
pub fn valuation(n: &BigInt, p: u32) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let pb = BigInt::from(p);
    let mut v = 0;
    let mut n = n.clone();
    loop {
        let (q, r) = n.div_rem(&pb);
        if !r.is_zero() {
            return Some(v);
        }
        n = q;
        v += 1;
    }
}

fn cross(o: (usize, u32), a: (usize, u32), b: (usize, u32)) -> i64 {
    let (ox, oy) = (o.0 as i64, o.1 as i64);
    (a.0 as i64 - ox) * (b.1 as i64 - oy) - (a.1 as i64 - oy) * (b.0 as i64 - ox)
}

pub fn newton_polygon(l: &LPolynomial) -> NewtonPolygon {
    let p = l.prime();
    let points: Vec<(usize, u32)> = l
        .coefficients()
        .iter()
        .enumerate()
        .filter_map(|(i, a)| valuation(a, p.get()).map(|v| (i, v)))
        .collect();

    // Monotone chain, lower half; points are already sorted by x.
    let mut vertices: Vec<(usize, u32)> = Vec::with_capacity(points.len());
    for &pt in &points {
        while vertices.len() >= 2
            && cross(
                vertices[vertices.len() - 2],
                vertices[vertices.len() - 1],
                pt,
            ) <= 0
        {
            vertices.pop();
        }
        vertices.push(pt);
    }

    let mut slopes: Vec<Slope> = Vec::new();
    for w in vertices.windows(2) {
        let s = Slope::new(w[1].1 as i64 - w[0].1 as i64, (w[1].0 - w[0].0) as i64);
        match slopes.last_mut() {
            Some(last) if last.same_value(&s) => last.mult += s.mult,
            _ => slopes.push(s),
        }
    }

    NewtonPolygon {
        p,
        points,
        vertices,
        slopes,
    }
}

impl NewtonPolygon {
    pub fn total_multiplicity(&self) -> u32 {
        self.slopes.iter().map(|s| s.mult).sum()
    }

    pub fn is_supersingular(&self) -> bool {
        self.slopes.iter().all(Slope::is_half)
    }

    pub fn p_rank(&self) -> u32 {
        self.slopes
            .iter()
            .filter(|s| s.num == 0)
            .map(|s| s.mult)
            .sum()
    }

    /// The multiset `{1 - s}` equals `{s}`.
    pub fn is_symmetric(&self) -> bool {
        let n = self.slopes.len();
        (0..n).all(|i| {
            let a = &self.slopes[i];
            let b = &self.slopes[n - 1 - i];
            a.den == b.den && a.num == b.den - b.num && a.mult == b.mult
        })
    }
}

/// Every slope is exactly 1/2.
pub fn is_supersingular(l: &LPolynomial) -> bool {
    let by_slopes = newton_polygon(l).is_supersingular();
    debug_assert_eq!(by_slopes, valuation_supersingular(l));
    by_slopes
}

/// The valuation form of the same test: `2 v_p(a_i) >= i` for `0 < i < 2g`.
pub fn valuation_supersingular(l: &LPolynomial) -> bool {
    let p = l.prime().get();
    let two_g = l.coefficients().len() - 1;
    l.coefficients()
        .iter()
        .enumerate()
        .take(two_g)
        .skip(1)
        .all(|(i, a)| valuation(a, p).is_none_or(|v| 2 * v as usize >= i))
}

/// Multiplicity of slope 0.
pub fn p_rank(l: &LPolynomial) -> u32 {
    newton_polygon(l).p_rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lpoly(p: u64, c: &[i64]) -> LPolynomial {
        LPolynomial::from_coefficients(
            PrimeModulus::new(p).unwrap(),
            c.iter().map(|&v| BigInt::from(v)).collect(),
        )
    }

    #[test]
    fn supersingular_elliptic() {
        let l = lpoly(3, &[1, 0, 3]);
        let np = newton_polygon(&l);
        assert_eq!(np.vertices, vec![(0, 0), (2, 1)]);
        assert_eq!(
            np.slopes,
            vec![Slope {
                num: 1,
                den: 2,
                mult: 2
            }]
        );
        assert!(is_supersingular(&l));
        assert_eq!(p_rank(&l), 0);
    }

    #[test]
    fn ordinary_elliptic() {
        let l = lpoly(3, &[1, -1, 3]);
        let np = newton_polygon(&l);
        assert_eq!(np.vertices, vec![(0, 0), (1, 0), (2, 1)]);
        assert_eq!(
            np.slopes,
            vec![
                Slope {
                    num: 0,
                    den: 1,
                    mult: 1
                },
                Slope {
                    num: 1,
                    den: 1,
                    mult: 1
                }
            ]
        );
        assert!(!is_supersingular(&l));
        assert_eq!(p_rank(&l), 1);
    }

    #[test]
    fn two_point_hull() {
        let l = lpoly(7, &[1, 0, 0, 0, 0, 0, 343]);
        let np = newton_polygon(&l);
        assert_eq!(
            np.slopes,
            vec![Slope {
                num: 1,
                den: 2,
                mult: 6
            }]
        );
        assert!(np.is_symmetric());
    }

    #[test]
    fn collinear_points_merge() {
        // 1 + 3T + 9T^2 ... over p = 3 with g = 2: (0,0),(1,1),(2,2)... is not a
        // valid Weil polynomial but the hull is one slope-1 line plus endpoints.
        let l = lpoly(3, &[1, 0, 3, 0, 9]);
        let np = newton_polygon(&l);
        assert_eq!(np.vertices, vec![(0, 0), (4, 2)]);
        assert_eq!(
            np.slopes,
            vec![Slope {
                num: 1,
                den: 2,
                mult: 4
            }]
        );
    }

    #[test]
    fn mixed_slopes_and_p_rank() {
        // (1 - T + 2T^2)^2 (1 + 2T^2) over p = 2: slopes {0,0,1/2,1/2,1,1}.
        // (1 - T + 2T^2)^2 = 1 - 2T + 5T^2 - 4T^3 + 4T^4
        // times (1 + 2T^2) = 1 - 2T + 7T^2 - 8T^3 + 14T^4 - 8T^5 + 8T^6
        let l = lpoly(2, &[1, -2, 7, -8, 14, -8, 8]);
        let np = newton_polygon(&l);
        assert_eq!(
            np.slopes,
            vec![
                Slope {
                    num: 0,
                    den: 1,
                    mult: 2
                },
                Slope {
                    num: 1,
                    den: 2,
                    mult: 2
                },
                Slope {
                    num: 1,
                    den: 1,
                    mult: 2
                },
            ]
        );
        assert_eq!(p_rank(&l), 2);
        assert!(np.is_symmetric());
        assert!(!valuation_supersingular(&l));
    }

    #[test]
    fn thirds() {
        // 1 + 2T^3 + 8T^6 over p = 2: slopes 1/3 x3, 2/3 x3.
        let l = lpoly(2, &[1, 0, 0, 2, 0, 0, 8]);
        let np = newton_polygon(&l);
        assert_eq!(
            np.slopes,
            vec![
                Slope {
                    num: 1,
                    den: 3,
                    mult: 3
                },
                Slope {
                    num: 2,
                    den: 3,
                    mult: 3
                }
            ]
        );
        assert!(np.is_symmetric());
        assert_eq!(np.p_rank(), 0);
        assert!(!is_supersingular(&l));
    }

    #[test]
    fn valuations() {
        assert_eq!(valuation(&BigInt::from(24), 2), Some(3));
        assert_eq!(valuation(&BigInt::from(-81), 3), Some(4));
        assert_eq!(valuation(&BigInt::from(5), 3), Some(0));
        assert_eq!(valuation(&BigInt::zero(), 3), None);
    }
}
