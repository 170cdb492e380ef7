//! Polynomial factorization over finite fields, cyclotomic polynomials,
//! factorization of `x^n - 1` and unit counting in residue rings.

mod units;

pub use units::{iterate_units, UnitIter};

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith::{divisors, euler_phi, moebius, order_of_power, p_free_part, prime_power};
use crate::error::{PcnError, Result};
use crate::gf::{stable_hash, FiniteField, Poly, PolyArith};

/// A factorization into monic irreducibles with multiplicities, sorted by
/// degree and then by candidate order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredPoly<E> {
    pub factors: Vec<(Poly<E>, u32)>,
}

impl<E> FactoredPoly<E> {
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn irreducibles(&self) -> impl Iterator<Item = &Poly<E>> {
        self.factors.iter().map(|(g, _)| g)
    }
}

fn sort_factors<F: FiniteField + ?Sized>(field: &F, factors: &mut Vec<(Poly<F::Elem>, u32)>) {
    factors.sort_by(|a, b| {
        a.0.deg()
            .cmp(&b.0.deg())
            .then_with(|| field.poly_cmp_prec(&a.0, &b.0))
    });
    let mut merged: Vec<(Poly<F::Elem>, u32)> = Vec::with_capacity(factors.len());
    for (g, e) in factors.drain(..) {
        match merged.last_mut() {
            Some(last) if last.0 == g => last.1 += e,
            _ => merged.push((g, e)),
        }
    }
    *factors = merged;
}

/// Multiplies a factorization back out.
pub fn expand<F: FiniteField + ?Sized>(field: &F, f: &FactoredPoly<F::Elem>) -> Poly<F::Elem> {
    f.factors
        .iter()
        .fold(field.poly_one(), |acc, (g, e)| field.poly_mul(&acc, &field.poly_pow(g, *e as u64)))
}

fn seeded_rng<F: FiniteField + ?Sized>(field: &F, f: &Poly<F::Elem>) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(stable_hash(&(field.fingerprint(), f.coeffs())))
}

/// Factors a nonzero polynomial into monic irreducibles (the leading
/// coefficient is dropped).
pub fn factor_poly<F: FiniteField + ?Sized>(
    field: &F,
    f: &Poly<F::Elem>,
) -> Result<FactoredPoly<F::Elem>> {
    if f.is_zero() {
        return Err(PcnError::ZeroPolynomial);
    }
    let f = field.poly_monic(f);
    let mut rng = seeded_rng(field, &f);
    let mut out = Vec::new();
    for (sf, mult) in squarefree_decomposition(field, &f) {
        for (g, r) in distinct_degree(field, &sf) {
            for h in equal_degree(field, &g, r, &mut rng) {
                out.push((h, mult));
            }
        }
    }
    sort_factors(field, &mut out);
    Ok(FactoredPoly { factors: out })
}

/// Writes a monic `f` as a product of pairwise coprime squarefree parts
/// `s_i^{m_i}`.
pub fn squarefree_decomposition<F: FiniteField + ?Sized>(
    field: &F,
    f: &Poly<F::Elem>,
) -> Vec<(Poly<F::Elem>, u32)> {
    let mut out = Vec::new();
    if f.deg() == 0 {
        return out;
    }
    let p = field.characteristic() as u32;
    let df = field.poly_derivative(f);
    if df.is_zero() {
        for (g, e) in squarefree_decomposition(field, &poly_pth_root(field, f)) {
            out.push((g, e * p));
        }
        return out;
    }
    let mut c = field.poly_gcd(f, &df);
    let mut w = field.poly_div_exact(f, &c).expect("gcd divides");
    let mut i = 1u32;
    while w.deg() > 0 {
        let y = field.poly_gcd(&w, &c);
        let z = field.poly_div_exact(&w, &y).expect("gcd divides");
        if z.deg() > 0 {
            out.push((z, i));
        }
        i += 1;
        c = field.poly_div_exact(&c, &y).expect("gcd divides");
        w = y;
    }
    if c.deg() > 0 {
        for (g, e) in squarefree_decomposition(field, &poly_pth_root(field, &c)) {
            out.push((g, e * p));
        }
    }
    out
}

fn poly_pth_root<F: FiniteField + ?Sized>(field: &F, f: &Poly<F::Elem>) -> Poly<F::Elem> {
    let p = field.characteristic() as usize;
    let v = f.coeffs().iter().step_by(p).map(|c| field.pth_root(c)).collect();
    field.poly(v)
}

/// Splits a squarefree monic `f` into products `(g, r)` of all its
/// irreducible factors of degree `r`.
pub fn distinct_degree<F: FiniteField + ?Sized>(
    field: &F,
    f: &Poly<F::Elem>,
) -> Vec<(Poly<F::Elem>, usize)> {
    let mut out = Vec::new();
    let mut rest = f.clone();
    let x = field.poly_x();
    let mut h = field.poly_rem(&x, &rest);
    let mut r = 1;
    while rest.deg() >= 2 * r {
        h = field.poly_frobenius_mod(&h, &rest);
        let g = field.poly_gcd(&field.poly_sub(&h, &x), &rest);
        if g.deg() > 0 {
            rest = field.poly_div_exact(&rest, &g).expect("gcd divides");
            h = field.poly_rem(&h, &rest);
            out.push((g, r));
        }
        r += 1;
    }
    if rest.deg() > 0 {
        let d = rest.deg();
        out.push((rest, d));
    }
    out
}

/// Cantor-Zassenhaus splitting of a product of distinct irreducibles of
/// degree `r`.
pub fn equal_degree<F: FiniteField + ?Sized>(
    field: &F,
    f: &Poly<F::Elem>,
    r: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<Poly<F::Elem>> {
    if f.deg() == r {
        return vec![field.poly_monic(f)];
    }
    if f.deg() == 0 {
        return Vec::new();
    }
    let p = field.characteristic();
    let big_q = field.order();
    let exponent = (num_traits::pow(big_q, r) - BigUint::one()) >> 1;
    loop {
        let a = field.poly((0..f.deg()).map(|_| field.random(rng)).collect());
        if a.deg() == 0 {
            continue;
        }
        let b = if p == 2 {
            let mut t = field.poly_rem(&a, f);
            let mut acc = t.clone();
            for _ in 1..field.degree() * r {
                t = field.poly_mulmod(&t, &t, f);
                acc = field.poly_add(&acc, &t);
            }
            acc
        } else {
            field.poly_sub(&field.poly_powmod(&a, &exponent, f), &field.poly_one())
        };
        let g = field.poly_gcd(f, &b);
        if g.deg() > 0 && g.deg() < f.deg() {
            let h = field.poly_div_exact(f, &g).expect("gcd divides");
            let mut out = equal_degree(field, &g, r, rng);
            out.extend(equal_degree(field, &h, r, rng));
            return out;
        }
    }
}

/// All roots of `g` in the field, sorted in element order.
pub fn find_roots<F: FiniteField + ?Sized>(field: &F, g: &Poly<F::Elem>) -> Result<Vec<F::Elem>> {
    if g.is_zero() {
        return Err(PcnError::ZeroPolynomial);
    }
    let mut g = field.poly_monic(g);
    let mut roots = Vec::new();
    if g.deg() > 0 && field.is_zero(&g.coeffs()[0]) {
        roots.push(field.zero());
        while g.deg() > 0 && field.is_zero(&g.coeffs()[0]) {
            g = field.poly(g.coeffs()[1..].to_vec());
        }
    }
    if g.deg() > 0 {
        let x = field.poly_x();
        let xq = field.poly_frobenius_mod(&field.poly_rem(&x, &g), &g);
        let split = field.poly_gcd(&g, &field.poly_sub(&xq, &x));
        let mut rng = seeded_rng(field, &split);
        for lin in equal_degree(field, &split, 1, &mut rng) {
            roots.push(field.neg(&lin.coeffs()[0]));
        }
    }
    roots.sort_by(|a, b| field.cmp_elems(a, b));
    roots.dedup();
    Ok(roots)
}

/// The `m`-th cyclotomic polynomial over the field; requires `p` not to divide `m`.
pub fn cyclotomic_poly<F: FiniteField + ?Sized>(field: &F, m: u64) -> Result<Poly<F::Elem>> {
    let p = field.characteristic();
    if m == 0 {
        return Err(PcnError::InvalidArgument("cyclotomic index 0".into()));
    }
    if m.is_multiple_of(p) {
        return Err(PcnError::CharacteristicDivides { p, m });
    }
    let mut num = field.poly_one();
    let mut den = field.poly_one();
    for d in divisors(m) {
        let term = field.poly_x_n_minus_one(d as usize);
        match moebius(m / d) {
            1 => num = field.poly_mul(&num, &term),
            -1 => den = field.poly_mul(&den, &term),
            _ => {}
        }
    }
    field.poly_div_exact(&num, &den)
}

/// `x^n - 1 = prod_{t | n'} Phi_t(x)^{p^a}`, each cyclotomic factor split
/// into irreducibles.
pub fn factor_x_n_minus_1<F: FiniteField + ?Sized>(field: &F, n: u64) -> Result<FactoredPoly<F::Elem>> {
    factor_generalized_cyclotomic(field, 1, n)
}

/// Factors `Phi_k(x^t)` for `p` not dividing `k` and `gcd(k, t) = 1`, using
/// `Phi_k(x^{t' p^a}) = (prod_{j | t'} Phi_{kj}(x))^{p^a}`.
pub fn factor_generalized_cyclotomic<F: FiniteField + ?Sized>(
    field: &F,
    k: u64,
    t: u64,
) -> Result<FactoredPoly<F::Elem>> {
    let p = field.characteristic();
    if k.is_multiple_of(p) {
        return Err(PcnError::CharacteristicDivides { p, m: k });
    }
    if crate::arith::gcd(k, t) != 1 {
        return Err(PcnError::InvalidArgument(format!("gcd({k}, {t}) != 1")));
    }
    let (a, t_free) = p_free_part(t, p)?;
    let mult = (p as u32).pow(a);
    let mut out = Vec::new();
    for j in divisors(t_free) {
        let phi = cyclotomic_poly(field, k * j)?;
        for (g, e) in factor_poly(field, &phi)?.factors {
            out.push((g, e * mult));
        }
    }
    sort_factors(field, &mut out);
    Ok(FactoredPoly { factors: out })
}

/// Number of units of `F[x]/(f)` from a factorization of `f`:
/// `prod (Q^D - 1) Q^{D (M - 1)}`.
pub fn unit_count<F: FiniteField + ?Sized>(field: &F, f: &FactoredPoly<F::Elem>) -> BigUint {
    let q = field.order();
    f.factors.iter().fold(BigUint::one(), |acc, (g, m)| {
        let qd = num_traits::pow(q.clone(), g.deg());
        acc * (&qd - BigUint::one()) * num_traits::pow(qd, (*m - 1) as usize)
    })
}

/// `phi_q(x^n - 1)` in closed form:
/// `prod_{t | n'} ((q^{o_t} - 1) q^{o_t (p^a - 1)})^{phi(t) / o_t}` with `o_t = ord_t(q)`.
pub fn phi_q_of_xn_minus_1(q: u64, n: u64) -> Result<BigUint> {
    phi_qd_of_xn_minus_1(q, 1, n)
}

/// `phi_{q^d}(x^n - 1)`, with `q^d` allowed to exceed 64 bits.
pub fn phi_qd_of_xn_minus_1(q: u64, d: u64, n: u64) -> Result<BigUint> {
    let (p, _) = prime_power(q)?;
    if n == 0 || d == 0 {
        return Err(PcnError::InvalidArgument("n and d must be positive".into()));
    }
    let (a, n_free) = p_free_part(n, p)?;
    let pa = p.pow(a) as usize;
    let qd = num_traits::pow(BigUint::from(q), d as usize);
    let mut acc = BigUint::one();
    for t in divisors(n_free) {
        let o = order_of_power(q, d, t)? as usize;
        let qo = num_traits::pow(qd.clone(), o);
        let unit = (&qo - BigUint::one()) * num_traits::pow(qo, pa - 1);
        acc *= num_traits::pow(unit, (euler_phi(t) as usize) / o);
    }
    Ok(acc)
}

/// Compares by degree, then candidate order.
pub fn cmp_factors<F: FiniteField + ?Sized>(field: &F, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Ordering {
    a.deg().cmp(&b.deg()).then_with(|| field.poly_cmp_prec(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::{is_irreducible_over, FieldCtx, PrimeField};
    use proptest::prelude::*;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn show(f: &PrimeField, fac: &FactoredPoly<u64>) -> Vec<(Vec<u64>, u32)> {
        let _ = f;
        fac.factors.iter().map(|(g, e)| (g.coeffs().to_vec(), *e)).collect()
    }

    #[test]
    fn hand_factorizations() {
        let f2 = fp(2);
        let fac = factor_poly(&f2, &f2.poly_x_n_minus_one(6)).unwrap();
        assert_eq!(show(&f2, &fac), vec![(vec![1, 1], 2), (vec![1, 1, 1], 2)]);
        let f3 = fp(3);
        let fac = factor_poly(&f3, &f3.poly_x_n_minus_one(2)).unwrap();
        assert_eq!(show(&f3, &fac), vec![(vec![1, 1], 1), (vec![2, 1], 1)]);
        let phi4 = cyclotomic_poly(&f3, 4).unwrap();
        assert_eq!(phi4.coeffs(), &[1, 0, 1]);
        assert_eq!(factor_poly(&f3, &phi4).unwrap().len(), 1);
        assert!(factor_poly(&f3, &f3.poly_zero()).is_err());
    }

    #[test]
    fn cyclotomic_basics() {
        let f = fp(3);
        assert_eq!(cyclotomic_poly(&f, 1).unwrap().coeffs(), &[2, 1]);
        assert_eq!(cyclotomic_poly(&f, 2).unwrap().coeffs(), &[1, 1]);
        assert!(matches!(cyclotomic_poly(&f, 6), Err(PcnError::CharacteristicDivides { .. })));
        let phi5_x4 = f.poly_inflate(&cyclotomic_poly(&f, 5).unwrap(), 4);
        assert_eq!(phi5_x4.deg(), 16);
        let prod = [1u64, 2, 4]
            .iter()
            .map(|&m| cyclotomic_poly(&f, m).unwrap())
            .fold(phi5_x4, |acc, g| f.poly_mul(&acc, &g));
        assert_eq!(prod, f.poly_x_n_minus_one(20));
    }

    #[test]
    fn x_n_minus_one_reconstructs() {
        for p in [2u64, 3, 5] {
            let f = fp(p);
            for n in 1..=64u64 {
                let fac = factor_x_n_minus_1(&f, n).unwrap();
                assert_eq!(expand(&f, &fac), f.poly_x_n_minus_one(n as usize), "p={p} n={n}");
                assert!(fac.irreducibles().all(|g| is_irreducible_over(&f, g)));
                let (a, nf) = p_free_part(n, p).unwrap();
                let direct: Vec<_> = divisors(nf).iter().map(|&t| cyclotomic_poly(&f, t).unwrap()).collect();
                let base = direct.iter().fold(f.poly_one(), |acc, g| f.poly_mul(&acc, g));
                assert_eq!(f.poly_pow(&base, p.pow(a)), f.poly_x_n_minus_one(n as usize));
            }
        }
    }

    #[test]
    fn factoring_over_extension_fields() {
        let k = FieldCtx::scratch(2, 4).unwrap();
        let fac = factor_x_n_minus_1(&*k, 15).unwrap();
        assert_eq!(fac.len(), 15);
        assert_eq!(expand(&*k, &fac), k.poly_x_n_minus_one(15));
        let k9 = FieldCtx::scratch(3, 2).unwrap();
        let fac = factor_x_n_minus_1(&*k9, 10).unwrap();
        assert_eq!(expand(&*k9, &fac), k9.poly_x_n_minus_one(10));
        assert!(fac.irreducibles().all(|g| is_irreducible_over(&*k9, g)));
    }

    #[test]
    fn unit_counts() {
        assert_eq!(phi_q_of_xn_minus_1(2, 6).unwrap(), BigUint::from(24u32));
        assert_eq!(phi_q_of_xn_minus_1(3, 2).unwrap(), BigUint::from(4u32));
        for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 16, 25] {
            assert_eq!(phi_q_of_xn_minus_1(q, 1).unwrap(), BigUint::from(q - 1));
        }
        for (p, e) in [(2u64, 1usize), (2, 2), (3, 1), (5, 1), (2, 3)] {
            let k = FieldCtx::scratch(p, e).unwrap();
            let q = p.pow(e as u32);
            for n in 1..=12u64 {
                let fac = factor_x_n_minus_1(&*k, n).unwrap();
                assert_eq!(unit_count(&*k, &fac), phi_q_of_xn_minus_1(q, n).unwrap());
            }
        }
    }

    #[test]
    fn unit_count_matches_exhaustion() {
        for (p, e, n) in [(2u64, 1usize, 6u64), (3, 1, 4), (2, 2, 3), (5, 1, 4), (2, 1, 10), (3, 2, 4)] {
            let k = FieldCtx::scratch(p, e).unwrap();
            let g = k.poly_x_n_minus_one(n as usize);
            let brute = iterate_units(&*k, &g).unwrap().count() as u64;
            let q = p.pow(e as u32);
            assert_eq!(BigUint::from(brute), phi_q_of_xn_minus_1(q, n).unwrap());
        }
    }

    #[test]
    fn roots_in_extension() {
        let k = FieldCtx::scratch(5, 2).unwrap();
        let roots = find_roots(&*k, &k.poly_x_n_minus_one(24)).unwrap();
        assert_eq!(roots.len(), 24);
        let roots = find_roots(&*k, &k.poly_x()).unwrap();
        assert_eq!(roots, vec![k.zero()]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn factor_reconstructs(pi in 0usize..4, coeffs in proptest::collection::vec(0u64..101, 2..40)) {
            let p = [2u64, 3, 5, 101][pi];
            let f = fp(p);
            let mut v: Vec<u64> = coeffs.into_iter().map(|c| c % p).collect();
            v.push(1);
            let g = f.poly(v);
            let fac = factor_poly(&f, &g).unwrap();
            prop_assert_eq!(expand(&f, &fac), g);
            for (h, _) in &fac.factors {
                prop_assert!(is_irreducible_over(&f, h));
            }
        }
    }
}
