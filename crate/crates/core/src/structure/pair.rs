use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{divisors, gcd, is_prime_u64, multiplicative_order, order_of_power, p_free_part, prime_divisors, prime_power, radical};
use crate::error::{PcnError, Result};

/// The extension `F_{q^n} / F_q` with `q = p^e`, and `n = p^a n'`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PrimePowerPair {
    pub p: u64,
    pub e: u32,
    pub n: u64,
}

impl PrimePowerPair {
    pub fn new(p: u64, e: u32, n: u64) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(PcnError::NotPrime(p));
        }
        if e == 0 || n == 0 {
            return Err(PcnError::InvalidArgument("e and n must be positive".into()));
        }
        p.checked_pow(e).ok_or_else(|| PcnError::InvalidArgument(format!("{p}^{e} overflows")))?;
        Ok(Self { p, e, n })
    }

    /// Pair from a prime power `q`.
    pub fn from_q(q: u64, n: u64) -> Result<Self> {
        let (p, e) = prime_power(q)?;
        Self::new(p, e, n)
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.e)
    }

    /// Exponent `a` of `p` in `n`.
    pub fn a(&self) -> u32 {
        p_free_part(self.n, self.p).expect("validated").0
    }

    /// The p-free part `n'`.
    pub fn n_prime(&self) -> u64 {
        p_free_part(self.n, self.p).expect("validated").1
    }

    /// `p^a`.
    pub fn pi(&self) -> u64 {
        self.p.pow(self.a())
    }

    pub fn rad_n_prime(&self) -> u64 {
        radical(self.n_prime())
    }

    /// Degree of `F_{q^n}` over `F_p`.
    pub fn absolute_degree(&self) -> usize {
        (self.e as u64 * self.n) as usize
    }

    /// The pair `(p, e n)`, i.e. the same field over its prime field.
    pub fn absolute(&self) -> Self {
        Self { p: self.p, e: 1, n: self.e as u64 * self.n }
    }

    /// `log2(q^n)`.
    pub fn log2_size(&self) -> f64 {
        self.absolute_degree() as f64 * (self.p as f64).log2()
    }

    fn p_free(&self, m: u64) -> u64 {
        p_free_part(m, self.p).expect("positive").1
    }

    /// `ord_{m'}(q^d)` with `m'` the p-free part of `m`.
    pub fn order_mod_p_free(&self, d: u64, m: u64) -> u64 {
        order_of_power(self.q(), d, self.p_free(m)).expect("coprime to p")
    }
}

impl fmt::Display for PrimePowerPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(q={}, n={})", self.q(), self.n)
    }
}

/// Digraph on the proper divisors of `n`: an arc `d -> e` when `r = e/d` is
/// prime and `r` does not divide `ord_{(n/e)'}(q^d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnDigraph {
    pub vertices: Vec<u64>,
    pub arcs: Vec<(u64, u64)>,
}

impl CnDigraph {
    pub fn indegree(&self, v: u64) -> usize {
        self.arcs.iter().filter(|a| a.1 == v).count()
    }

    /// Vertices of indegree zero, ascending.
    pub fn sources(&self) -> Vec<u64> {
        self.vertices.iter().copied().filter(|&v| self.indegree(v) == 0).collect()
    }
}

pub fn build_cn_digraph(pair: &PrimePowerPair) -> CnDigraph {
    let n = pair.n;
    let vertices: Vec<u64> = divisors(n).into_iter().filter(|&d| d != n).collect();
    let mut arcs = Vec::new();
    for &d in &vertices {
        for r in prime_divisors(n / d) {
            let e = d * r;
            if e == n {
                continue;
            }
            if !pair.order_mod_p_free(d, n / e).is_multiple_of(r) {
                arcs.push((d, e));
            }
        }
    }
    arcs.sort_unstable();
    CnDigraph { vertices, arcs }
}

/// The essential set `D*`: indegree-zero vertices of the CN-digraph
/// (`{1}` when `n = 1`).
pub fn essential_set(pair: &PrimePowerPair) -> Vec<u64> {
    if pair.n == 1 {
        return vec![1];
    }
    build_cn_digraph(pair).sources()
}

/// Every normal element is completely normal iff for all primes `r | n`,
/// `r` does not divide `ord_{(n/r)'}(q)`.
pub fn is_completely_basic(pair: &PrimePowerPair) -> bool {
    prime_divisors(pair.n)
        .into_iter()
        .all(|r| !pair.order_mod_p_free(1, pair.n / r).is_multiple_of(r))
}

/// `gcd(n, ord_{rad(n')}(q)) = 1`.
pub fn is_regular_pair(pair: &PrimePowerPair) -> bool {
    let o = multiplicative_order(pair.q(), pair.rad_n_prime()).expect("coprime to p");
    gcd(pair.n, o) == 1
}

/// No prime `r | n` divides `s - 1` for another prime `s | n`.
pub fn is_universally_regular(n: u64) -> bool {
    let ps = prime_divisors(n);
    ps.iter().all(|&r| ps.iter().all(|&s| r == s || (s - 1) % r != 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(q: u64, n: u64) -> PrimePowerPair {
        PrimePowerPair::from_q(q, n).unwrap()
    }

    #[test]
    fn essential_sets() {
        assert_eq!(essential_set(&pair(3, 20)), vec![1, 2, 4]);
        assert_eq!(essential_set(&pair(2, 20)), vec![1, 2, 4]);
        assert_eq!(essential_set(&pair(233, 33)), vec![1]);
        assert_eq!(essential_set(&pair(2, 4)), vec![1]);
        assert_eq!(essential_set(&pair(7, 13)), vec![1]);
        assert_eq!(essential_set(&pair(5, 1)), vec![1]);
        let g = build_cn_digraph(&pair(2, 4));
        assert!(g.arcs.contains(&(1, 2)));
    }

    #[test]
    fn basic_and_regular() {
        assert!(!is_completely_basic(&pair(2, 6)));
        assert!(!is_regular_pair(&pair(2, 6)));
        for r in [2u64, 3, 5, 7] {
            for q in [2u64, 3, 4, 5, 9, 11] {
                assert!(is_completely_basic(&pair(q, r * r)));
            }
        }
        for q in [2u64, 4, 8] {
            for m in 1..6 {
                assert!(is_completely_basic(&pair(q, 2u64.pow(m))));
            }
        }
    }

    #[test]
    fn universally_regular_list() {
        let list: Vec<u64> = (2..=200u64)
            .filter(|&n| prime_divisors(n).len() > 1 && is_universally_regular(n))
            .collect();
        assert_eq!(
            list,
            vec![
                15, 33, 35, 45, 51, 65, 69, 75, 77, 85, 87, 91, 95, 99, 115, 119, 123, 133, 135, 141, 143, 145, 153,
                159, 161, 175, 177, 185, 187
            ]
        );
        assert!(is_universally_regular(64));
        assert!(is_universally_regular(81));
    }
}
