//! Elementary number theory on machine integers plus factorization of big ones.

mod factorize;
mod primes;

pub use factorize::{
    cyclotomic_value, factor_integer, factor_q_power_minus_one, factor_u64, FactoredInteger,
    MAX_FACTOR_BITS,
};
pub use primes::{integer_root, is_prime, is_prime_u64, perfect_power, primes_below};

pub(crate) use primes::{gcd_u64, pow_mod};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{PcnError, Result};

/// Prime factorization of a machine word by trial division.
pub fn small_factors(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n <= 1 {
        return out;
    }
    let mut p = 2u64;
    while p * p <= n && p < 1 << 10 {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        if p * p > n {
            out.push((n, 1));
        } else {
            let rest = factor_u64(n).expect("nonzero word");
            out.extend(
                rest.factors()
                    .iter()
                    .map(|(q, e)| (q.to_u64().expect("divides a word"), *e)),
            );
        }
    }
    out
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    small_factors(n).into_iter().map(|(p, _)| p).collect()
}

/// All positive divisors in ascending order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in small_factors(n) {
        let len = out.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

pub fn euler_phi(n: u64) -> u64 {
    small_factors(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

pub fn moebius(n: u64) -> i8 {
    let f = small_factors(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn radical(n: u64) -> u64 {
    prime_divisors(n).into_iter().product()
}

/// Sum of all positive divisors.
pub fn divisor_sum(n: u64) -> u64 {
    divisors(n).into_iter().sum()
}

/// The classical arithmetic functions of `n`, evaluated together.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ArithFunctions {
    pub phi: u64,
    pub moebius: i8,
    pub radical: u64,
    pub divisor_sum: u64,
}

pub fn arith_functions(n: u64) -> Result<ArithFunctions> {
    if n == 0 {
        return Err(PcnError::InvalidArgument("arithmetic functions need n >= 1".into()));
    }
    Ok(ArithFunctions {
        phi: euler_phi(n),
        moebius: moebius(n),
        radical: radical(n),
        divisor_sum: divisor_sum(n),
    })
}

/// Splits `n = p^a * n'` with `p` not dividing `n'`.
pub fn p_free_part(n: u64, p: u64) -> Result<(u32, u64)> {
    if !is_prime_u64(p) {
        return Err(PcnError::NotPrime(p));
    }
    if n == 0 {
        return Err(PcnError::InvalidArgument("p-free part of 0".into()));
    }
    let mut a = 0;
    let mut rest = n;
    while rest.is_multiple_of(p) {
        rest /= p;
        a += 1;
    }
    Ok((a, rest))
}

/// Least `k >= 1` with `q^k = 1 (mod m)`; `ord_1(q) = 1`.
pub fn multiplicative_order(q: u64, m: u64) -> Result<u64> {
    if m == 0 {
        return Err(PcnError::InvalidArgument("modulus 0".into()));
    }
    if m == 1 {
        return Ok(1);
    }
    let q = q % m;
    if gcd_u64(q, m) != 1 {
        return Err(PcnError::NotCoprime { q, m });
    }
    let mut k = euler_phi(m);
    for (r, _) in small_factors(k) {
        while k.is_multiple_of(r) && pow_mod(q, k / r, m) == 1 {
            k /= r;
        }
    }
    Ok(k)
}

/// `ord_m(q^d)` without forming `q^d`.
pub fn order_of_power(q: u64, d: u64, m: u64) -> Result<u64> {
    if m == 1 {
        return Ok(1);
    }
    multiplicative_order(pow_mod(q, d, m), m)
}

/// Multiplicative order for a big base reduced modulo a word-sized modulus.
pub fn multiplicative_order_big(q: &BigUint, m: u64) -> Result<u64> {
    let r = (q % m).to_u64().expect("reduced below modulus");
    multiplicative_order(r, m)
}

/// Decomposes a prime power `q = p^e`.
pub fn prime_power(q: u64) -> Result<(u64, u32)> {
    let f = small_factors(q);
    match f.as_slice() {
        [(p, e)] => Ok((*p, *e)),
        _ => Err(PcnError::NotPrimePower(q)),
    }
}

pub fn is_prime_power(q: u64) -> bool {
    prime_power(q).is_ok()
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// `q^e` checked against `u64` overflow.
pub fn checked_pow(q: u64, e: u32) -> Option<u64> {
    q.checked_pow(e)
}
