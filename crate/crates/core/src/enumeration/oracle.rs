//! Exhaustive reference counts and a primitivity bitset built by walking the
//! powers of a generator.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{divisors, factor_q_power_minus_one};
use crate::error::{PcnError, Result};
use crate::gf::{is_irreducible, CandidateStream, FieldCtx, FieldElement, FiniteField};
use crate::search::PrimitivityTester;
use crate::structure::{ExtensionModel, PrimePowerPair};

/// Default limit on `q^n` for the exhaustive oracle.
pub const DEFAULT_ORACLE_CEILING: u64 = 1 << 24;

/// `(P, N, PN, CN, PCN)`: the numbers of primitive, normal, primitive normal,
/// completely normal and primitive completely normal elements.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Quintuple {
    pub primitive: u64,
    pub normal: u64,
    pub primitive_normal: u64,
    pub completely_normal: u64,
    pub pcn: u64,
}

impl Quintuple {
    fn merge(self, o: Self) -> Self {
        Self {
            primitive: self.primitive + o.primitive,
            normal: self.normal + o.normal,
            primitive_normal: self.primitive_normal + o.primitive_normal,
            completely_normal: self.completely_normal + o.completely_normal,
            pcn: self.pcn + o.pcn,
        }
    }
}

/// `F_{p^m}` modelled by the least polynomial in candidate order that is
/// irreducible and has `x` as a primitive root. Contexts are shared.
pub fn primitive_model_field(p: u64, m: usize) -> Result<Arc<FieldCtx>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, usize), Arc<FieldCtx>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(ctx) = cache.lock().expect("cache lock").get(&(p, m)) {
        return Ok(ctx.clone());
    }
    let tester = PrimitivityTester::for_field(p, m)?;
    let mut found = None;
    for f in CandidateStream::unrestricted(p, m)? {
        if m == 1 {
            // Degree one: F_p itself, modelled by x - g for a primitive root g.
            let ctx = FieldCtx::new(f)?;
            let g = ctx.from_residues(&[ctx.p() - ctx.modulus().coeff(0)]);
            if ctx.is_zero(&g) || !tester.is_primitive(&ctx, &g)? {
                continue;
            }
            found = Some(ctx);
            break;
        }
        if !is_irreducible(&f) {
            continue;
        }
        let ctx = FieldCtx::new(f)?;
        if tester.is_primitive(&ctx, &ctx.generator())? {
            found = Some(ctx);
            break;
        }
    }
    let ctx = Arc::new(found.ok_or_else(|| PcnError::Internal(format!("no primitive polynomial of degree {m} over F_{p}")))?);
    Ok(cache.lock().expect("cache lock").entry((p, m)).or_insert(ctx).clone())
}

/// The class of `x` in a degree-one field `F_p[x]/(x - g)` is `g`; in higher
/// degree it is `x` itself.
pub fn model_generator(ctx: &FieldCtx) -> FieldElement {
    if ctx.m() == 1 {
        ctx.from_residues(&[ctx.p() - ctx.modulus().coeff(0)])
    } else {
        ctx.generator()
    }
}

/// Multiplication by the model generator on coefficient vectors.
struct GeneratorStep {
    p: u64,
    m: usize,
    neg_tail: Vec<u64>,
    root: u64,
}

impl GeneratorStep {
    fn new(ctx: &FieldCtx) -> Self {
        let p = ctx.p();
        let m = ctx.m();
        let neg_tail = ctx.modulus().coeffs()[..m].iter().map(|&c| (p - c) % p).collect();
        let root = model_generator(ctx).coeffs()[0];
        Self { p, m, neg_tail, root }
    }

    #[inline]
    fn apply(&self, c: &mut [u64]) {
        if self.m == 1 {
            c[0] = c[0] * self.root % self.p;
            return;
        }
        let top = c[self.m - 1];
        for i in (1..self.m).rev() {
            c[i] = c[i - 1];
        }
        c[0] = 0;
        if top != 0 {
            for (x, &t) in c.iter_mut().zip(&self.neg_tail) {
                *x = (*x + top * t) % self.p;
            }
        }
    }
}

fn index_of(c: &[u64], p: u64) -> u64 {
    c.iter().rev().fold(0u64, |acc, &x| acc * p + x)
}

/// Splits `0..total` into at most `parts` contiguous ranges.
fn split_range(total: u64, parts: u64) -> Vec<std::ops::Range<u64>> {
    let parts = parts.clamp(1, total.max(1));
    let step = total.div_ceil(parts);
    (0..parts).map(|i| i * step..((i + 1) * step).min(total)).filter(|r| !r.is_empty()).collect()
}

/// One bit per element index: set iff the element is primitive.
pub struct PrimitiveTable {
    p: u64,
    bits: Vec<u64>,
}

impl PrimitiveTable {
    /// Walks `g^j` for `0 <= j < Q - 1` with `g` the model generator, marking
    /// `g^j` primitive iff `gcd(j, Q - 1) = 1`.
    pub fn build(ctx: &FieldCtx) -> Result<Self> {
        let p = ctx.p();
        let m = ctx.m();
        let q = ctx
            .order_u64()
            .filter(|&q| q <= 1 << 36)
            .ok_or_else(|| PcnError::CeilingExceeded { size: ctx.order().to_string(), ceiling: (1u64 << 36).to_string() })?;
        let primes: Vec<u64> = factor_q_power_minus_one(p, m as u64)?
            .primes()
            .map(|r| r.try_into().expect("prime below q"))
            .collect();
        let g = model_generator(ctx);
        if !PrimitivityTester::for_field(p, m)?.is_primitive(ctx, &g)? {
            return Err(PcnError::InvalidArgument("the model generator is not primitive".into()));
        }
        let words: Vec<AtomicU64> = (0..q.div_ceil(64)).map(|_| AtomicU64::new(0)).collect();
        let step = GeneratorStep::new(ctx);
        split_range(q - 1, rayon::current_num_threads() as u64 * 8).into_par_iter().for_each(|r| {
            let mut cur = ctx.pow_u64(&g, r.start).into_coeffs();
            for j in r {
                if primes.iter().all(|&s| j % s != 0) {
                    let idx = index_of(&cur, p);
                    words[(idx / 64) as usize].fetch_or(1 << (idx % 64), Ordering::Relaxed);
                }
                step.apply(&mut cur);
            }
        });
        Ok(Self { p, bits: words.into_iter().map(AtomicU64::into_inner).collect() })
    }

    #[inline]
    pub fn contains(&self, index: u64) -> bool {
        self.bits[(index / 64) as usize] >> (index % 64) & 1 == 1
    }

    pub fn is_primitive(&self, ctx: &FieldCtx, w: &FieldElement) -> bool {
        debug_assert_eq!(ctx.p(), self.p);
        self.contains(ctx.element_index(w))
    }

    pub fn count(&self) -> u64 {
        self.bits.iter().map(|w| w.count_ones() as u64).sum()
    }
}

/// Counts `(P, N, PN, CN, PCN)` by scanning every nonzero element of
/// `F_{q^n}`. Complete normality is tested over all proper divisors of `n`
/// (plus `d = 1`), independently of the essential set.
pub fn brute_force_oracle(pair: &PrimePowerPair, ceiling: u64) -> Result<Quintuple> {
    let size = pair.q().checked_pow(pair.n as u32).filter(|&s| s <= ceiling).ok_or_else(|| {
        PcnError::CeilingExceeded { size: format!("{}^{}", pair.q(), pair.n), ceiling: ceiling.to_string() }
    })?;
    let ctx = primitive_model_field(pair.p, pair.absolute_degree())?;
    let model = ExtensionModel::new(*pair, ctx.clone())?;
    let mut levels: Vec<u64> = divisors(pair.n).into_iter().filter(|&d| d < pair.n).collect();
    if levels.is_empty() {
        levels.push(1);
    }
    let tests = levels.iter().map(|&d| model.normality_test(d)).collect::<Result<Vec<_>>>()?;
    let primes: Vec<u64> = factor_q_power_minus_one(pair.q(), pair.n)?
        .primes()
        .map(|r| r.try_into().expect("prime below q^n"))
        .collect();
    let g = model_generator(&ctx);
    let step = GeneratorStep::new(&ctx);
    let parts = split_range(size - 1, rayon::current_num_threads() as u64 * 8);
    let total = parts
        .into_par_iter()
        .map(|r| {
            let mut acc = Quintuple::default();
            let mut cur = ctx.pow_u64(&g, r.start).into_coeffs();
            for j in r {
                let w = ctx.element_from_vec(cur.clone());
                let prim = primes.iter().all(|&s| j % s != 0);
                let normal = tests[0].passes(&w);
                let cn = normal && tests[1..].iter().all(|t| t.passes(&w));
                acc.primitive += prim as u64;
                acc.normal += normal as u64;
                acc.primitive_normal += (prim && normal) as u64;
                acc.completely_normal += cn as u64;
                acc.pcn += (prim && cn) as u64;
                step.apply(&mut cur);
            }
            acc
        })
        .reduce(Quintuple::default, Quintuple::merge);
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(q: u64, n: u64) -> PrimePowerPair {
        PrimePowerPair::from_q(q, n).unwrap()
    }

    #[test]
    fn quintuple_for_f64() {
        let t = brute_force_oracle(&pair(2, 6), DEFAULT_ORACLE_CEILING).unwrap();
        assert_eq!((t.primitive, t.normal, t.primitive_normal, t.completely_normal, t.pcn), (36, 24, 18, 12, 6));
    }

    #[test]
    fn degree_one_and_two() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27] {
            let t = brute_force_oracle(&pair(q, 1), DEFAULT_ORACLE_CEILING).unwrap();
            let phi = crate::arith::euler_phi(q - 1);
            assert_eq!((t.primitive, t.normal, t.completely_normal, t.pcn), (phi, q - 1, q - 1, phi), "q={q}");
            let t = brute_force_oracle(&pair(q, 2), DEFAULT_ORACLE_CEILING).unwrap();
            assert_eq!(t.normal, t.completely_normal);
            assert_eq!(t.primitive_normal, t.pcn);
            assert_eq!(t.normal, u64::try_from(crate::factor::phi_q_of_xn_minus_1(q, 2).unwrap()).unwrap());
        }
    }

    #[test]
    fn ceiling_is_enforced() {
        assert!(matches!(brute_force_oracle(&pair(2, 30), 1 << 20), Err(PcnError::CeilingExceeded { .. })));
    }

    #[test]
    fn primitive_table_counts() {
        for (p, m) in [(2u64, 1usize), (2, 6), (3, 4), (5, 3), (7, 2), (2, 12), (3, 1), (13, 1)] {
            let ctx = primitive_model_field(p, m).unwrap();
            let table = PrimitiveTable::build(&ctx).unwrap();
            let q = p.pow(m as u32);
            assert_eq!(table.count(), crate::arith::euler_phi(q - 1), "p={p} m={m}");
            let tester = PrimitivityTester::for_field(p, m).unwrap();
            for i in 1..q.min(500) {
                let w = ctx.element_from_index(i);
                assert_eq!(table.is_primitive(&ctx, &w), tester.is_primitive(&*ctx, &w).unwrap());
            }
        }
    }
}
