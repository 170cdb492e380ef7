use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::linalg::Matrix;
use super::poly::PolyArith;
use super::polymodp::{CandidateStream, PolyModP};
use super::prime::PrimeField;
use super::traits::{stable_hash, FiniteField};
use super::is_irreducible;
use crate::error::{PcnError, Result};

/// An element of `F_p[x]/(f)`, stored as its `m` residue coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(Vec<u64>);

impl FieldElement {
    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }

    pub fn into_coeffs(self) -> Vec<u64> {
        self.0
    }
}

/// The extension field `F_p[x]/(f)` for a monic irreducible `f` of degree `m`.
pub struct FieldCtx {
    prime: PrimeField,
    m: usize,
    modulus: PolyModP,
    neg_tail: Vec<u64>,
    lazy: bool,
    fingerprint: u64,
    frob: OnceLock<Matrix>,
    frob_powers: Mutex<HashMap<usize, Arc<Matrix>>>,
}

impl std::fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FieldCtx(F_{}[x]/({}))", self.prime.p(), self.modulus)
    }
}

impl FieldCtx {
    /// Builds the field, verifying that the modulus is monic and irreducible.
    pub fn new(modulus: PolyModP) -> Result<Self> {
        if modulus.is_zero() {
            return Err(PcnError::ZeroPolynomial);
        }
        if modulus.deg() == 0 {
            return Err(PcnError::ConstantPolynomial);
        }
        if !modulus.is_monic() {
            return Err(PcnError::NotMonic);
        }
        if !is_irreducible(&modulus) {
            return Err(PcnError::ReducibleModulus(modulus.p()));
        }
        Ok(Self::new_unchecked(modulus))
    }

    fn new_unchecked(modulus: PolyModP) -> Self {
        let p = modulus.p();
        let m = modulus.deg();
        let neg_tail = modulus.coeffs()[..m].iter().map(|&c| (p - c) % p).collect();
        let bound = (p as u128 - 1) * (p as u128 - 1) * 2 * m as u128;
        Self {
            prime: PrimeField::new(p).expect("modulus over a prime field"),
            m,
            lazy: bound < u64::MAX as u128,
            fingerprint: stable_hash(&("ext", p, modulus.coeffs())),
            modulus,
            neg_tail,
            frob: OnceLock::new(),
            frob_powers: Mutex::new(HashMap::new()),
        }
    }

    /// The field of order `p^m` whose modulus is the smallest irreducible
    /// polynomial in candidate order (`x` when `m = 1`). Contexts are shared.
    pub fn scratch(p: u64, m: usize) -> Result<Arc<FieldCtx>> {
        static CACHE: OnceLock<Mutex<HashMap<(u64, usize), Arc<FieldCtx>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(ctx) = cache.lock().expect("cache lock").get(&(p, m)) {
            return Ok(ctx.clone());
        }
        let modulus = CandidateStream::unrestricted(p, m)?
            .find(is_irreducible)
            .ok_or_else(|| PcnError::Internal(format!("no irreducible of degree {m} over F_{p}")))?;
        let ctx = Arc::new(Self::new_unchecked(modulus));
        Ok(cache.lock().expect("cache lock").entry((p, m)).or_insert(ctx).clone())
    }

    pub fn p(&self) -> u64 {
        self.prime.p()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn prime_field(&self) -> &PrimeField {
        &self.prime
    }

    pub fn modulus(&self) -> &PolyModP {
        &self.modulus
    }

    /// The class of `x`, the canonical candidate.
    pub fn generator(&self) -> FieldElement {
        self.from_residues(&[0, 1])
    }

    /// Element from low-to-high coefficients, reduced modulo `f`.
    pub fn from_residues(&self, coeffs: &[u64]) -> FieldElement {
        let p = self.p();
        if coeffs.len() <= self.m {
            let mut v: Vec<u64> = coeffs.iter().map(|c| c % p).collect();
            v.resize(self.m, 0);
            return FieldElement(v);
        }
        let poly = self.prime.poly_from_residues(coeffs);
        let r = self.prime.poly_rem(&poly, &self.modulus.to_poly());
        self.from_residues(r.coeffs())
    }

    pub fn from_poly(&self, a: &PolyModP) -> FieldElement {
        self.from_residues(a.coeffs())
    }

    pub fn to_poly(&self, a: &FieldElement) -> PolyModP {
        PolyModP::new(self.p(), a.0.clone()).expect("valid prime")
    }

    /// Base-`p` index of an element, inverse of `element_from_index`.
    pub fn element_index(&self, a: &FieldElement) -> u64 {
        a.0.iter().rev().fold(0u64, |acc, &c| acc * self.p() + c)
    }

    pub fn element_from_vec(&self, v: Vec<u64>) -> FieldElement {
        debug_assert_eq!(v.len(), self.m);
        FieldElement(v)
    }

    /// Matrix of the absolute Frobenius `a -> a^p` acting on coefficient vectors.
    pub fn frobenius_matrix(&self) -> &Matrix {
        self.frob.get_or_init(|| {
            let x = self.generator();
            let xp = self.pow_u64(&x, self.p());
            let mut cols = Vec::with_capacity(self.m);
            let mut cur = self.one();
            for _ in 0..self.m {
                cols.push(cur.0.clone());
                cur = self.mul(&cur, &xp);
            }
            Matrix::from_columns(self.p(), self.m, &cols)
        })
    }

    /// Matrix of `a -> a^{p^s}`.
    pub fn frobenius_power_matrix(&self, s: usize) -> Arc<Matrix> {
        let s = s % self.m;
        if let Some(m) = self.frob_powers.lock().expect("lock").get(&s) {
            return m.clone();
        }
        let mat = Arc::new(self.frobenius_matrix().pow(s as u64));
        self.frob_powers.lock().expect("lock").entry(s).or_insert(mat).clone()
    }

    /// `a^{p^s}`.
    pub fn frobenius_pow(&self, a: &FieldElement, s: usize) -> FieldElement {
        if s.is_multiple_of(self.m) {
            return a.clone();
        }
        FieldElement(self.frobenius_power_matrix(s).mul_vec(&a.0))
    }

    /// Matrix of multiplication by `c`.
    pub fn multiplication_matrix(&self, c: &FieldElement) -> Matrix {
        let mut cols = Vec::with_capacity(self.m);
        let mut cur = c.clone();
        let x = self.generator();
        for _ in 0..self.m {
            cols.push(cur.0.clone());
            cur = self.mul(&cur, &x);
        }
        Matrix::from_columns(self.p(), self.m, &cols)
    }

    pub fn add_assign(&self, a: &mut FieldElement, b: &FieldElement) {
        let p = self.p();
        for (x, y) in a.0.iter_mut().zip(&b.0) {
            *x += y;
            if *x >= p {
                *x -= p;
            }
        }
    }

    fn reduce_product(&self, mut acc: Vec<u64>) -> FieldElement {
        let p = self.p();
        let m = self.m;
        for i in (m..acc.len()).rev() {
            let c = acc[i] % p;
            if c == 0 {
                continue;
            }
            let base = i - m;
            if self.lazy {
                for (j, &t) in self.neg_tail.iter().enumerate() {
                    acc[base + j] += c * t;
                }
            } else {
                for (j, &t) in self.neg_tail.iter().enumerate() {
                    acc[base + j] = (acc[base + j] + c * t % p) % p;
                }
            }
        }
        acc.truncate(m);
        for c in acc.iter_mut() {
            *c %= p;
        }
        FieldElement(acc)
    }
}

impl FiniteField for FieldCtx {
    type Elem = FieldElement;

    fn characteristic(&self) -> u64 {
        self.p()
    }

    fn degree(&self) -> usize {
        self.m
    }

    fn zero(&self) -> FieldElement {
        FieldElement(vec![0; self.m])
    }

    fn one(&self) -> FieldElement {
        self.from_u64(1)
    }

    fn from_u64(&self, c: u64) -> FieldElement {
        let mut v = vec![0; self.m];
        v[0] = c % self.p();
        FieldElement(v)
    }

    fn is_zero(&self, a: &FieldElement) -> bool {
        a.0.iter().all(|&c| c == 0)
    }

    fn is_one(&self, a: &FieldElement) -> bool {
        a.0[0] == 1 && a.0[1..].iter().all(|&c| c == 0)
    }

    fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let mut out = a.clone();
        self.add_assign(&mut out, b);
        out
    }

    fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let p = self.p();
        FieldElement(a.0.iter().zip(&b.0).map(|(&x, &y)| if x >= y { x - y } else { x + p - y }).collect())
    }

    fn neg(&self, a: &FieldElement) -> FieldElement {
        let p = self.p();
        FieldElement(a.0.iter().map(|&x| if x == 0 { 0 } else { p - x }).collect())
    }

    fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let p = self.p();
        let m = self.m;
        if m == 1 {
            return FieldElement(vec![a.0[0] * b.0[0] % p]);
        }
        let mut acc = vec![0u64; 2 * m - 1];
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            if self.lazy {
                for (j, &y) in b.0.iter().enumerate() {
                    acc[i + j] += x * y;
                }
            } else {
                for (j, &y) in b.0.iter().enumerate() {
                    acc[i + j] = (acc[i + j] + x * y % p) % p;
                }
            }
        }
        self.reduce_product(acc)
    }

    fn inv(&self, a: &FieldElement) -> Option<FieldElement> {
        if self.is_zero(a) {
            return None;
        }
        let f = &self.prime;
        let ap = f.poly(a.0.clone());
        let (g, s) = f.poly_ext_gcd(&ap, &self.modulus.to_poly());
        debug_assert!(f.poly_is_one(&g));
        Some(self.from_residues(s.coeffs()))
    }

    fn frobenius(&self, a: &FieldElement) -> FieldElement {
        if self.m == 1 {
            return a.clone();
        }
        FieldElement(self.frobenius_matrix().mul_vec(&a.0))
    }

    fn pth_root(&self, a: &FieldElement) -> FieldElement {
        self.frobenius_pow(a, self.m - 1)
    }

    fn random(&self, rng: &mut ChaCha8Rng) -> FieldElement {
        FieldElement((0..self.m).map(|_| rng.gen_range(0..self.p())).collect())
    }

    fn element_from_index(&self, mut idx: u64) -> FieldElement {
        let p = self.p();
        FieldElement(
            (0..self.m)
                .map(|_| {
                    let d = idx % p;
                    idx /= p;
                    d
                })
                .collect(),
        )
    }

    fn cmp_elems(&self, a: &FieldElement, b: &FieldElement) -> Ordering {
        let key = |v: &FieldElement| {
            let support: Vec<usize> = (0..v.0.len()).filter(|&i| v.0[i] != 0).collect();
            let word: Vec<u64> = support.iter().rev().map(|&i| v.0[i]).collect();
            (support.len(), support, word)
        };
        key(a).cmp(&key(b))
    }

    fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    fn order(&self) -> BigUint {
        num_traits::pow(BigUint::from(self.p()), self.m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn ctx(p: u64, s: &str) -> FieldCtx {
        FieldCtx::new(PolyModP::parse(p, s).unwrap()).unwrap()
    }

    #[test]
    fn f4_hand_reduction() {
        let k = ctx(2, "x^2 + x + 1");
        let x = k.generator();
        let x1 = k.add(&x, &k.one());
        assert!(k.is_one(&k.mul(&x, &x1)));
        assert_eq!(k.frobenius(&x), x1);
    }

    #[test]
    fn reducible_modulus_rejected() {
        let f = PolyModP::parse(2, "x^2 + 1").unwrap();
        assert!(matches!(FieldCtx::new(f), Err(PcnError::ReducibleModulus(2))));
        let g = PolyModP::parse(5, "2*x^2 + 1").unwrap();
        assert!(matches!(FieldCtx::new(g), Err(PcnError::NotMonic)));
    }

    #[test]
    fn field_axioms_on_random_elements() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for k in [ctx(3, "x^5 + 2*x + 1"), ctx(101, "x^5 + x^4 + 2"), ctx(2, "x^20 + x^19 + x^4 + x^3 + 1")] {
            for _ in 0..20 {
                let a = k.random(&mut rng);
                let b = k.random(&mut rng);
                let c = k.random(&mut rng);
                assert_eq!(k.mul(&a, &b), k.mul(&b, &a));
                assert_eq!(k.mul(&k.mul(&a, &b), &c), k.mul(&a, &k.mul(&b, &c)));
                assert_eq!(k.mul(&a, &k.add(&b, &c)), k.add(&k.mul(&a, &b), &k.mul(&a, &c)));
                assert_eq!(k.pow(&a, &k.order()), a);
                if let Some(ai) = k.inv(&a) {
                    assert!(k.is_one(&k.mul(&a, &ai)));
                }
                assert_eq!(k.frobenius(&a), k.pow_u64(&a, k.p()));
                assert_eq!(k.frobenius(&k.pth_root(&a)), a);
            }
            assert!(k.inv(&k.zero()).is_none());
        }
    }

    #[test]
    fn big_characteristic_is_exact() {
        let p = 4_294_967_291u64;
        let k = FieldCtx::scratch(p, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = k.random(&mut rng);
        assert_eq!(k.pow(&a, &k.order()), a);
    }

    #[test]
    fn scratch_moduli() {
        assert_eq!(FieldCtx::scratch(5, 1).unwrap().modulus().to_string(), "x");
        assert_eq!(FieldCtx::scratch(2, 2).unwrap().modulus().to_string(), "x^2 + x + 1");
        assert_eq!(FieldCtx::scratch(2, 4).unwrap().modulus().to_string(), "x^4 + x + 1");
        assert_eq!(FieldCtx::scratch(3, 2).unwrap().modulus().to_string(), "x^2 + 1");
    }

    #[test]
    fn index_round_trip() {
        let k = FieldCtx::scratch(3, 4).unwrap();
        for i in 0..81 {
            assert_eq!(k.element_index(&k.element_from_index(i)), i);
        }
    }
}
