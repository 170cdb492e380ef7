use std::cmp::Ordering;
use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand_chacha::ChaCha8Rng;

/// A finite field `F_{p^k}` with an explicit element representation.
///
/// Implemented by [`PrimeField`](super::PrimeField) and
/// [`FieldCtx`](super::FieldCtx); polynomial arithmetic and factorization are
/// generic over this trait.
pub trait FiniteField: Send + Sync {
    type Elem: Clone + PartialEq + Eq + Hash + Debug + Send + Sync;

    fn characteristic(&self) -> u64;

    /// Degree over the prime field.
    fn degree(&self) -> usize;

    fn order(&self) -> BigUint {
        num_traits::pow(BigUint::from(self.characteristic()), self.degree())
    }

    /// Field order when it fits a word.
    fn order_u64(&self) -> Option<u64> {
        self.order().to_u64()
    }

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_u64(&self, c: u64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn pow(&self, a: &Self::Elem, e: &BigUint) -> Self::Elem {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    fn pow_u64(&self, a: &Self::Elem, e: u64) -> Self::Elem {
        let mut acc = self.one();
        let mut base = a.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// `a^p`.
    fn frobenius(&self, a: &Self::Elem) -> Self::Elem {
        self.pow_u64(a, self.characteristic())
    }

    /// The unique `b` with `b^p = a`.
    fn pth_root(&self, a: &Self::Elem) -> Self::Elem {
        let mut b = a.clone();
        for _ in 1..self.degree() {
            b = self.frobenius(&b);
        }
        b
    }

    fn random(&self, rng: &mut ChaCha8Rng) -> Self::Elem;

    /// Element whose base-`p` coordinate digits spell `idx`.
    fn element_from_index(&self, idx: u64) -> Self::Elem;

    /// Total order on representations: Hamming weight, then support word,
    /// then coefficient word read from the highest support index down.
    fn cmp_elems(&self, a: &Self::Elem, b: &Self::Elem) -> Ordering;

    /// Stable identifier of the field model, used to seed randomized routines.
    fn fingerprint(&self) -> u64;

    fn minus_one(&self) -> Self::Elem {
        self.neg(&self.one())
    }

    fn is_prime_field(&self) -> bool {
        self.degree() == 1
    }

    fn order_minus_one(&self) -> BigUint {
        self.order() - BigUint::one()
    }
}

/// 64-bit FNV-1a, used wherever a stable hash must survive toolchain updates.
#[derive(Clone, Copy, Debug)]
pub struct Fnv64(u64);

impl Default for Fnv64 {
    fn default() -> Self {
        Fnv64(0xcbf2_9ce4_8422_2325)
    }
}

impl std::hash::Hasher for Fnv64 {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for b in bytes {
            self.0 ^= *b as u64;
            self.0 = self.0.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
}

pub fn stable_hash<T: Hash + ?Sized>(value: &T) -> u64 {
    use std::hash::Hasher;
    let mut h = Fnv64::default();
    value.hash(&mut h);
    h.finish()
}
