//! Primality testing for machine words and arbitrary-precision integers.

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Witnesses that make Miller-Rabin deterministic below 3.317e24.
const DETERMINISTIC_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Random rounds used above the deterministic range.
const RANDOM_ROUNDS: usize = 64;

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

fn strong_probable_prime(n: u64, a: u64, d: u64, s: u32) -> bool {
    let a = a % n;
    if a == 0 {
        return true;
    }
    let mut x = pow_mod(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Deterministic primality test for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &DETERMINISTIC_BASES {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    DETERMINISTIC_BASES
        .iter()
        .all(|&a| strong_probable_prime(n, a, d, s))
}

fn big_strong_probable_prime(n: &BigUint, n_minus_one: &BigUint, a: &BigUint, d: &BigUint, s: u64) -> bool {
    let mut x = a.modpow(d, n);
    if x.is_one() || &x == n_minus_one {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if &x == n_minus_one {
            return true;
        }
        if x.is_one() {
            return false;
        }
    }
    false
}

/// Miller-Rabin on arbitrary-precision integers.
///
/// Deterministic below 3.317e24; above that 64 rounds with witnesses drawn
/// from a generator seeded by `n` itself, so repeated calls agree.
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for &p in &DETERMINISTIC_BASES {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let n_minus_one = n - &one;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;

    let threshold = BigUint::parse_bytes(b"3317044064679887385961981", 10).expect("constant");
    if n < &threshold {
        return DETERMINISTIC_BASES
            .iter()
            .all(|&a| big_strong_probable_prime(n, &n_minus_one, &BigUint::from(a), &d, s));
    }

    let mut seed = [0u8; 32];
    for (i, byte) in n.to_bytes_le().iter().enumerate() {
        seed[i % 32] ^= byte.rotate_left((i / 32) as u32);
    }
    let mut rng = ChaCha8Rng::from_seed(seed);
    let two = BigUint::from(2u32);
    let upper = &n_minus_one - &one;
    (0..RANDOM_ROUNDS).all(|_| {
        let a = rng.gen_biguint_range(&two, &upper);
        big_strong_probable_prime(n, &n_minus_one, &a, &d, s)
    })
}

/// Primes below `bound`, by a plain sieve.
pub fn primes_below(bound: u64) -> Vec<u64> {
    if bound < 3 {
        return Vec::new();
    }
    let bound = bound as usize;
    let mut composite = vec![false; bound];
    let mut out = Vec::new();
    for i in 2..bound {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j < bound {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Integer `k`-th root, rounded down.
pub fn integer_root(n: &BigUint, k: u32) -> BigUint {
    if n.is_zero() || k == 1 {
        return n.clone();
    }
    n.nth_root(k)
}

/// Returns `(base, exponent)` with `n = base^exponent` and `exponent` maximal
/// among the exponents tried (all k up to the bit length).
pub fn perfect_power(n: &BigUint) -> (BigUint, u32) {
    let bits = n.bits() as u32;
    let mut best = (n.clone(), 1u32);
    if n <= &BigUint::one() {
        return best;
    }
    for k in (2..=bits.max(2)).rev() {
        let r = integer_root(n, k);
        if r > BigUint::one() && num_traits::pow(r.clone(), k as usize) == *n {
            best = (r, k);
            break;
        }
    }
    best
}

pub(crate) fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}
