use std::fmt;

use serde::{Deserialize, Serialize};

use super::pair::PrimePowerPair;
use crate::arith::{divisors, euler_phi, gcd, multiplicative_order, p_free_part, prime_divisors, radical};

/// Index `(k, t)` of the cyclotomic module `C_{k,t} = ker Phi_k(sigma^t)`;
/// `t` includes its characteristic part.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CyclotomicPair {
    pub k: u64,
    pub t: u64,
}

impl CyclotomicPair {
    pub fn new(k: u64, t: u64) -> Self {
        Self { k, t }
    }

    /// Module character `kt / rad(k)`.
    pub fn kappa(&self) -> u64 {
        self.k * self.t / radical(self.k)
    }

    /// Dimension `phi(k) t` over `F_q`.
    pub fn dimension(&self) -> u64 {
        euler_phi(self.k) * self.t
    }

    /// `(t', pi)` with `t = t' pi` and `pi` a power of `p`.
    pub fn split_t(&self, p: u64) -> (u64, u64) {
        let (_, t_free) = p_free_part(self.t, p).expect("positive");
        (t_free, self.t / t_free)
    }

    /// Regular module: `gcd(ord_{rad(kt')}(q), kt) = 1`.
    pub fn is_regular(&self, pair: &PrimePowerPair) -> bool {
        let (t_free, _) = self.split_t(pair.p);
        let o = multiplicative_order(pair.q(), radical(self.k * t_free)).expect("coprime to p");
        gcd(o, self.k * self.t) == 1
    }

    /// The `(k t' pi)` label, with a trailing `*` for regular modules.
    pub fn label(&self, pair: &PrimePowerPair) -> String {
        let (t_free, pi) = self.split_t(pair.p);
        let star = if self.is_regular(pair) { "*" } else { "" };
        format!("({} {} {}){}", self.k, t_free, pi, star)
    }

    /// Divisors `d` of the module character.
    pub fn character_divisors(&self) -> Vec<u64> {
        divisors(self.kappa())
    }
}

impl fmt::Display for CyclotomicPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.k, self.t)
    }
}

/// A set of cyclotomic pairs whose polynomials `Phi_k(x^t)` are pairwise
/// coprime and multiply to the parent's.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub parent: CyclotomicPair,
    pub parts: Vec<CyclotomicPair>,
    pub agreeable: bool,
}

/// One application of the splitting rule at the prime `r`: with
/// `t = r^a s`, `(k, t) -> {(k, t/r), (k r^a, t/r^a)}`, agreeable iff
/// `r^a` does not divide `ord_{rad(k t')}(q)`. `None` when `r` does not
/// divide `t`, `r = p` or `r | k`.
pub fn dct_split(parent: CyclotomicPair, r: u64, pair: &PrimePowerPair) -> Option<Decomposition> {
    let CyclotomicPair { k, t } = parent;
    if r == pair.p || t % r != 0 || k % r == 0 || !crate::arith::is_prime_u64(r) {
        return None;
    }
    let (a, _) = p_free_part(t, r).expect("prime r");
    let ra = r.pow(a);
    let (t_free, _) = parent.split_t(pair.p);
    let o = multiplicative_order(pair.q(), radical(k * t_free)).expect("coprime to p");
    let mut parts = vec![CyclotomicPair::new(k, t / r), CyclotomicPair::new(k * ra, t / ra)];
    parts.sort();
    Some(Decomposition { parent, parts, agreeable: !o.is_multiple_of(ra) })
}

/// Finest agreeable decomposition of `F_{q^n}`: agreeable splits are applied
/// until none applies, computed on the p-free skeleton with `p^a` carried
/// in every `t`. Primes are tried in descending order.
pub fn finest_agreeable_decomposition(pair: &PrimePowerPair) -> Decomposition {
    finest_with_order(pair, |mut ps| {
        ps.reverse();
        ps
    })
}

/// Same as [`finest_agreeable_decomposition`] with a caller-chosen prime order.
pub fn finest_with_order(
    pair: &PrimePowerPair,
    mut order: impl FnMut(Vec<u64>) -> Vec<u64>,
) -> Decomposition {
    let parent = CyclotomicPair::new(1, pair.n);
    let mut work = vec![parent];
    let mut done = Vec::new();
    while let Some(part) = work.pop() {
        let (t_free, _) = part.split_t(pair.p);
        let candidates = order(prime_divisors(t_free));
        let split = candidates
            .into_iter()
            .filter_map(|r| dct_split(part, r, pair))
            .find(|d| d.agreeable);
        match split {
            Some(d) => work.extend(d.parts),
            None => done.push(part),
        }
    }
    done.sort();
    Decomposition { parent, parts: done, agreeable: true }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::cyclotomic_poly;
    use crate::gf::{PolyArith, PrimeField};
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pair(q: u64, n: u64) -> PrimePowerPair {
        PrimePowerPair::from_q(q, n).unwrap()
    }

    fn cp(k: u64, t: u64) -> CyclotomicPair {
        CyclotomicPair::new(k, t)
    }

    #[test]
    fn example_decompositions() {
        let d = finest_agreeable_decomposition(&pair(3, 20));
        assert_eq!(d.parts, vec![cp(1, 1), cp(2, 1), cp(4, 1), cp(5, 4)]);
        let pr = pair(2, 30);
        let d = finest_agreeable_decomposition(&pr);
        let labels: Vec<String> = d.parts.iter().map(|c| c.label(&pr)).collect();
        assert_eq!(labels, vec!["(1 1 2)*", "(3 1 2)", "(5 1 2)", "(15 1 2)"]);
        let d = finest_agreeable_decomposition(&pair(5, 27));
        assert_eq!(d.parts, vec![cp(1, 1), cp(3, 1), cp(9, 1), cp(27, 1)]);
    }

    #[test]
    fn single_splits() {
        let pr = pair(3, 20);
        let d = dct_split(cp(1, 20), 5, &pr).unwrap();
        assert_eq!(d.parts, vec![cp(1, 4), cp(5, 4)]);
        assert!(d.agreeable);
        let d = dct_split(cp(5, 4), 2, &pr).unwrap();
        assert_eq!(d.parts, vec![cp(5, 2), cp(20, 1)]);
        assert!(!d.agreeable);
        assert!(dct_split(cp(1, 20), 3, &pr).is_none());
    }

    #[test]
    fn polynomial_identity_confluence_and_character() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 32] {
            let f = PrimeField::new(crate::arith::prime_power(q).unwrap().0).unwrap();
            for n in 1..=60u64 {
                let pr = pair(q, n);
                if pr.log2_size() > 30.0 {
                    continue;
                }
                let d = finest_agreeable_decomposition(&pr);
                let prod = d.parts.iter().fold(f.poly_one(), |acc, c| {
                    let phi = cyclotomic_poly(&f, c.k).unwrap();
                    f.poly_mul(&acc, &f.poly_inflate(&phi, c.t as usize))
                });
                assert_eq!(prod, f.poly_x_n_minus_one(n as usize), "q={q} n={n}");
                for _ in 0..3 {
                    let shuffled = finest_with_order(&pr, |mut ps| {
                        ps.shuffle(&mut rng);
                        ps
                    });
                    assert_eq!(shuffled.parts, d.parts, "q={q} n={n}");
                }
            }
        }
        let pr = pair(3, 20);
        let parent = cp(1, 20);
        for r in [2u64, 5] {
            let s = dct_split(parent, r, &pr).unwrap();
            for part in s.parts {
                assert_eq!(part.kappa() * r, parent.kappa());
            }
        }
    }
}
