use std::cmp::Ordering;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::traits::{stable_hash, FiniteField};
use crate::arith::{is_prime_u64, pow_mod};
use crate::error::{PcnError, Result};

/// Largest supported characteristic; products of two residues fit a `u64`.
pub const MAX_CHARACTERISTIC: u64 = u32::MAX as u64;

/// The prime field `Z/p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(PcnError::NotPrime(p));
        }
        if p > MAX_CHARACTERISTIC {
            return Err(PcnError::InvalidArgument(format!("characteristic {p} too large")));
        }
        Ok(Self { p })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, a: u64) -> u64 {
        a % self.p
    }

    /// Whether `a` generates the multiplicative group of `F_p`.
    pub fn is_primitive_root(&self, a: u64) -> bool {
        let a = a % self.p;
        if a == 0 {
            return false;
        }
        if self.p == 2 {
            return a == 1;
        }
        crate::arith::prime_divisors(self.p - 1)
            .into_iter()
            .all(|r| pow_mod(a, (self.p - 1) / r, self.p) != 1)
    }
}

impl FiniteField for PrimeField {
    type Elem = u64;

    fn characteristic(&self) -> u64 {
        self.p
    }

    fn degree(&self) -> usize {
        1
    }

    fn order_u64(&self) -> Option<u64> {
        Some(self.p)
    }

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1
    }

    fn from_u64(&self, c: u64) -> u64 {
        c % self.p
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }

    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            Some(pow_mod(*a, self.p - 2, self.p))
        }
    }

    fn frobenius(&self, a: &u64) -> u64 {
        *a
    }

    fn pth_root(&self, a: &u64) -> u64 {
        *a
    }

    fn random(&self, rng: &mut ChaCha8Rng) -> u64 {
        rng.gen_range(0..self.p)
    }

    fn element_from_index(&self, idx: u64) -> u64 {
        idx % self.p
    }

    fn cmp_elems(&self, a: &u64, b: &u64) -> Ordering {
        a.cmp(b)
    }

    fn fingerprint(&self) -> u64 {
        stable_hash(&("prime", self.p))
    }
}
