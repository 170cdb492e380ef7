//! Integer factorization: trial division, Miller-Rabin and Pollard-Brent rho.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::primes::{is_prime, mul_mod, perfect_power, primes_below};
use crate::arith::{divisors, moebius};
use crate::error::{PcnError, Result};

/// Inputs above this many bits are refused (roughly 10^84).
pub const MAX_FACTOR_BITS: u64 = 280;

const TRIAL_BOUND: u64 = 1 << 16;

/// A positive integer together with its prime factorization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredInteger {
    value: BigUint,
    factors: Vec<(BigUint, u32)>,
}

impl FactoredInteger {
    /// Builds from `(prime, exponent)` pairs; the pairs are merged and sorted.
    pub fn from_factors(factors: impl IntoIterator<Item = (BigUint, u32)>) -> Self {
        let mut merged: BTreeMap<BigUint, u32> = BTreeMap::new();
        for (p, e) in factors {
            if e > 0 {
                *merged.entry(p).or_insert(0) += e;
            }
        }
        let factors: Vec<_> = merged.into_iter().collect();
        let value = factors
            .iter()
            .fold(BigUint::one(), |acc, (p, e)| acc * num_traits::pow(p.clone(), *e as usize));
        Self { value, factors }
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    /// Number of distinct prime divisors.
    pub fn omega(&self) -> usize {
        self.factors.len()
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.factors.iter().map(|(p, _)| p)
    }

    /// Euler's totient of the value.
    pub fn phi(&self) -> BigUint {
        self.factors.iter().fold(BigUint::one(), |acc, (p, e)| {
            acc * num_traits::pow(p.clone(), (*e - 1) as usize) * (p - 1u32)
        })
    }

    fn merge(&mut self, other: &FactoredInteger) {
        let merged = Self::from_factors(
            self.factors
                .iter()
                .cloned()
                .chain(other.factors.iter().cloned()),
        );
        *self = merged;
    }
}

impl fmt::Display for FactoredInteger {
    /// `2^2 * 5^3 * 31`; the empty factorization of 1 prints as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, (p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for FactoredInteger {
    type Err = PcnError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" {
            return Ok(Self::from_factors([]));
        }
        let mut factors = Vec::new();
        for term in s.split('*') {
            let term = term.trim();
            let (base, exp) = match term.split_once('^') {
                Some((b, e)) => (b.trim(), e.trim()),
                None => (term, "1"),
            };
            let p = BigUint::from_str(base).map_err(|_| PcnError::Parse(format!("bad prime `{base}`")))?;
            let e: u32 = exp
                .parse()
                .map_err(|_| PcnError::Parse(format!("bad exponent `{exp}`")))?;
            if !is_prime(&p) {
                return Err(PcnError::Parse(format!("{p} is not prime")));
            }
            factors.push((p, e));
        }
        Ok(Self::from_factors(factors))
    }
}

/// Prime factorization of `n >= 1`.
pub fn factor_integer(n: &BigUint) -> Result<FactoredInteger> {
    if n.is_zero() {
        return Err(PcnError::InvalidArgument("cannot factor 0".into()));
    }
    if n.bits() > MAX_FACTOR_BITS {
        return Err(PcnError::IntegerTooLarge { bits: n.bits() });
    }
    let mut factors = Vec::new();
    let mut rest = n.clone();
    for p in small_primes() {
        if rest.is_one() {
            break;
        }
        let mut e = 0u32;
        while (&rest % *p).is_zero() {
            rest /= *p;
            e += 1;
        }
        if e > 0 {
            factors.push((BigUint::from(*p), e));
        }
        if BigUint::from(*p * *p) > rest {
            break;
        }
    }
    if !rest.is_one() {
        split_into(&rest, 1, &mut factors);
    }
    Ok(FactoredInteger::from_factors(factors))
}

pub fn factor_u64(n: u64) -> Result<FactoredInteger> {
    factor_integer(&BigUint::from(n))
}

fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_below(TRIAL_BOUND))
}

fn split_into(n: &BigUint, mult: u32, out: &mut Vec<(BigUint, u32)>) {
    if n.is_one() {
        return;
    }
    if is_prime(n) {
        out.push((n.clone(), mult));
        return;
    }
    let (base, k) = perfect_power(n);
    if k > 1 {
        split_into(&base, mult * k, out);
        return;
    }
    let d = find_factor(n);
    let other = n / &d;
    split_into(&d, mult, out);
    split_into(&other, mult, out);
}

fn find_factor(n: &BigUint) -> BigUint {
    if n.is_even() {
        return BigUint::from(2u32);
    }
    if let Some(small) = n.to_u64() {
        let mut c = 1;
        loop {
            if let Some(d) = rho_u64(small, c) {
                return BigUint::from(d);
            }
            c += 1;
        }
    }
    let mut c = 1u32;
    loop {
        if let Some(d) = rho_big(n, c) {
            return d;
        }
        c += 1;
    }
}

/// Brent's cycle-finding variant of Pollard rho with batched gcds.
fn rho_u64(n: u64, c: u64) -> Option<u64> {
    const BATCH: u64 = 128;
    let f = |x: u64| (mul_mod(x, x, n) + c) % n;
    let (mut y, mut r, mut q, mut g) = (2u64, 1u64, 1u64, 1u64);
    let mut x = y;
    let mut ys = y;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..BATCH.min(r - k) {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = q.gcd(&n);
            k += BATCH;
        }
        r *= 2;
    }
    if g == n {
        loop {
            ys = f(ys);
            g = x.abs_diff(ys).gcd(&n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

fn rho_big(n: &BigUint, c: u32) -> Option<BigUint> {
    const BATCH: u64 = 256;
    let c = BigUint::from(c);
    let f = |x: &BigUint| (x * x + &c) % n;
    let abs_diff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
    let mut y = BigUint::from(2u32);
    let mut r = 1u64;
    let mut q = BigUint::one();
    let mut g = BigUint::one();
    let mut x = y.clone();
    let mut ys = y.clone();
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            for _ in 0..BATCH.min(r - k) {
                y = f(&y);
                q = (q * abs_diff(&x, &y)) % n;
            }
            g = q.gcd(n);
            k += BATCH;
        }
        r *= 2;
    }
    if &g == n {
        loop {
            ys = f(&ys);
            g = abs_diff(&x, &ys).gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    (&g != n).then_some(g)
}

/// Value of the integer cyclotomic polynomial `Phi_d` at `q`.
pub fn cyclotomic_value(d: u64, q: u64) -> BigUint {
    let q = BigUint::from(q);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for e in divisors(d) {
        let term = num_traits::pow(q.clone(), e as usize) - 1u32;
        match moebius(d / e) {
            1 => num *= term,
            -1 => den *= term,
            _ => {}
        }
    }
    num / den
}

/// Factorization of `q^n - 1`, splitting first along `q^n - 1 = prod_{d | n} Phi_d(q)`.
///
/// Results are memoised process-wide; the same factorization is reused by the
/// criteria cascade and by every primitivity test on the same field.
pub fn factor_q_power_minus_one(q: u64, n: u64) -> Result<Arc<FactoredInteger>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u64), Arc<FactoredInteger>>>> = OnceLock::new();
    if q < 2 || n == 0 {
        return Err(PcnError::InvalidArgument(format!("q^n - 1 with q={q}, n={n}")));
    }
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().expect("factor cache poisoned").get(&(q, n)) {
        return Ok(hit.clone());
    }
    let total_bits = (n as f64 * (q as f64).log2()).ceil() as u64;
    if total_bits > MAX_FACTOR_BITS {
        return Err(PcnError::IntegerTooLarge { bits: total_bits });
    }
    let mut acc = FactoredInteger::from_factors([]);
    for d in divisors(n) {
        let part = factor_integer(&cyclotomic_value(d, q))?;
        acc.merge(&part);
    }
    let acc = Arc::new(acc);
    cache
        .lock()
        .expect("factor cache poisoned")
        .insert((q, n), acc.clone());
    Ok(acc)
}
