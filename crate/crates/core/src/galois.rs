//! Abelian fields given as `(Z/nZ)^x / H`: Frobenius orders and splitting of
//! unramified primes.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GaloisError {
    #[error("RamifiedPrime: {p} divides the conductor {n}")]
    RamifiedPrime { p: u64, n: u64 },
    #[error("{h} is not a unit mod {n}")]
    NotAUnit { h: u64, n: u64 },
    #[error("(Z/{n}Z)^x / H is not cyclic")]
    NotCyclic { n: u64 },
}

/// A cyclic field `K` of conductor `n`, as the fixed field of `H <= (Z/nZ)^x`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CyclicFieldSpec {
    pub name: String,
    pub n: u64,
    /// The full subgroup, sorted.
    #[serde(rename = "h")]
    pub subgroup: Vec<u64>,
    pub degree: u64,
}

fn totient(n: u64) -> u64 {
    (1..=n).filter(|a| a.gcd(&n) == 1).count() as u64
}

impl CyclicFieldSpec {
    /// Closes `generators` under multiplication mod `n` and checks the quotient is cyclic.
    pub fn new(name: &str, n: u64, generators: &[u64]) -> Result<Self, GaloisError> {
        for &h in generators {
            if h.gcd(&n) != 1 {
                return Err(GaloisError::NotAUnit { h, n });
            }
        }
        let mut group: BTreeSet<u64> = BTreeSet::from([1 % n]);
        let mut frontier: Vec<u64> = vec![1 % n];
        while let Some(x) = frontier.pop() {
            for &h in generators {
                let y = x * (h % n) % n;
                if group.insert(y) {
                    frontier.push(y);
                }
            }
        }
        let degree = totient(n) / group.len() as u64;
        let spec = CyclicFieldSpec {
            name: name.to_string(),
            n,
            subgroup: group.into_iter().collect(),
            degree,
        };
        let cyclic = (1..n)
            .filter(|a| a.gcd(&n) == 1)
            .any(|a| spec.order_of_unit(a) == degree);
        if !cyclic {
            return Err(GaloisError::NotCyclic { n });
        }
        Ok(spec)
    }

    fn contains(&self, a: u64) -> bool {
        self.subgroup.binary_search(&(a % self.n)).is_ok()
    }

    fn order_of_unit(&self, a: u64) -> u64 {
        let a = a % self.n;
        let mut x = a;
        let mut t = 1;
        while !self.contains(x) {
            x = x * a % self.n;
            t += 1;
        }
        t
    }

    fn check_unramified(&self, p: u64) -> Result<(), GaloisError> {
        if p.gcd(&self.n) != 1 {
            Err(GaloisError::RamifiedPrime { p, n: self.n })
        } else {
            Ok(())
        }
    }

    /// Smallest `t >= 1` with `p^t mod n` in `H`.
    pub fn frobenius_order(&self, p: u64) -> Result<u64, GaloisError> {
        self.check_unramified(p)?;
        Ok(self.order_of_unit(p))
    }

    pub fn has_even_frobenius(&self, p: u64) -> Result<bool, GaloisError> {
        Ok(self.frobenius_order(p)? % 2 == 0)
    }

    /// Number of primes of `K` above `p`.
    pub fn splitting_count(&self, p: u64) -> Result<u64, GaloisError> {
        Ok(self.degree / self.frobenius_order(p)?)
    }
}

impl fmt::Display for CyclicFieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (n={}, H={:?}, degree {})",
            self.name, self.n, self.subgroup, self.degree
        )
    }
}

/// The element of `(Z/nZ)^x` that is `-1 mod 9` and `1 mod (n/9)`: complex
/// conjugation on the `zeta_9` part only.
fn conjugation_on_zeta9(n: u64) -> u64 {
    let other = n / 9;
    (1..n)
        .find(|h| h % 9 == 8 && h % other == 1 % other)
        .expect("CRT solution exists for coprime moduli")
}

pub const QQ_ZETA9: &str = "Q(zeta9)";
pub const QQ_ZETA9_PLUS_I: &str = "Q(zeta9)+(i)";
pub const QQ_ZETA9_PLUS_ZETA5: &str = "Q(zeta9)+(zeta5)";

/// `Q(zeta_9)`, `Q(zeta_9)^+(i)` and `Q(zeta_9)^+(zeta_5)`.
pub fn field_specs() -> Vec<CyclicFieldSpec> {
    vec![
        CyclicFieldSpec::new(QQ_ZETA9, 9, &[]).unwrap(),
        CyclicFieldSpec::new(QQ_ZETA9_PLUS_I, 36, &[conjugation_on_zeta9(36)]).unwrap(),
        CyclicFieldSpec::new(QQ_ZETA9_PLUS_ZETA5, 45, &[conjugation_on_zeta9(45)]).unwrap(),
    ]
}
