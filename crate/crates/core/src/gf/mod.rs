//! Prime fields, extension fields `F_p[x]/(f)`, Frobenius action and
//! subfield embeddings.

mod embedding;
mod field;
mod linalg;
mod poly;
mod polymodp;
mod prime;
mod traits;

pub use embedding::{build_embedding, SubfieldEmbedding};
pub use field::{FieldCtx, FieldElement};
pub use linalg::Matrix;
pub use poly::{Poly, PolyArith};
pub use polymodp::{compare_polys, iterate_candidates, CandidateStream, PolyModP, PolyOrderKey};
pub use prime::{PrimeField, MAX_CHARACTERISTIC};
pub use traits::{stable_hash, FiniteField, Fnv64};

use num_bigint::BigUint;
use num_traits::Zero;

use crate::arith::{divisors, moebius};
use crate::error::{PcnError, Result};

/// `w^{q^j}` where `q = p^e`.
pub fn frobenius_power(ctx: &FieldCtx, w: &FieldElement, j: usize, e: usize) -> FieldElement {
    ctx.frobenius_pow(w, (j * e) % ctx.m())
}

/// Applies `g(tau)` to `w`, where `tau = a -> a^{p^s}`: returns
/// `sum_i c_i * tau^i(w)`. Every coefficient must be fixed by `tau`.
pub fn apply_sigma_poly(
    ctx: &FieldCtx,
    g: &Poly<FieldElement>,
    s: usize,
    w: &FieldElement,
) -> Result<FieldElement> {
    for c in g.coeffs() {
        if ctx.frobenius_pow(c, s) != *c {
            return Err(PcnError::OutsideSubfield(s as u64));
        }
    }
    let mut acc = ctx.zero();
    let mut cur = w.clone();
    let tau = ctx.frobenius_power_matrix(s);
    for (i, c) in g.coeffs().iter().enumerate() {
        if i > 0 {
            cur = ctx.element_from_vec(tau.mul_vec(cur.coeffs()));
        }
        if !ctx.is_zero(c) {
            let term = ctx.mul(c, &cur);
            ctx.add_assign(&mut acc, &term);
        }
    }
    Ok(acc)
}

/// Relative trace and norm of `w` down to the subfield of degree `d` over `F_p`.
pub fn trace_norm(ctx: &FieldCtx, w: &FieldElement, d: usize) -> Result<(FieldElement, FieldElement)> {
    if d == 0 || !ctx.m().is_multiple_of(d) {
        return Err(PcnError::NotADivisor { divisor: d as u64, value: ctx.m() as u64 });
    }
    let mut trace = ctx.zero();
    let mut norm = ctx.one();
    let mut cur = w.clone();
    for i in 0..ctx.m() / d {
        if i > 0 {
            cur = ctx.frobenius_pow(&cur, d);
        }
        ctx.add_assign(&mut trace, &cur);
        norm = ctx.mul(&norm, &cur);
    }
    Ok((trace, norm))
}

/// Irreducibility over `F_p`: no factor of degree `i <= m/2` divides `f`,
/// tested through `gcd(x^{p^i} - x, f)`.
pub fn is_irreducible(f: &PolyModP) -> bool {
    let Some(m) = f.degree() else { return false };
    if m == 0 {
        return false;
    }
    if m == 1 {
        return true;
    }
    let field = f.field();
    let fp = field.poly_monic(&f.to_poly());
    if fp.coeffs()[0] == 0 {
        return false;
    }
    is_irreducible_over(&field, &fp)
}

/// Irreducibility of a nonconstant polynomial over any finite field.
pub fn is_irreducible_over<F: FiniteField + ?Sized>(field: &F, f: &Poly<F::Elem>) -> bool {
    let m = f.deg();
    if f.is_zero() || m == 0 {
        return false;
    }
    let x = field.poly_x();
    let mut h = field.poly_rem(&x, f);
    for _ in 0..m / 2 {
        h = field.poly_frobenius_mod(&h, f);
        let g = field.poly_gcd(&field.poly_sub(&h, &x), f);
        if !field.poly_is_one(&g) {
            return false;
        }
    }
    true
}

/// Number of monic irreducible polynomials of degree `m` over `F_p`.
pub fn count_irreducibles(p: u64, m: u64) -> Result<BigUint> {
    if m == 0 {
        return Err(PcnError::InvalidArgument("degree must be positive".into()));
    }
    PrimeField::new(p)?;
    let mut pos = BigUint::zero();
    let mut neg = BigUint::zero();
    for d in divisors(m) {
        let term = num_traits::pow(BigUint::from(p), d as usize);
        match moebius(m / d) {
            1 => pos += term,
            -1 => neg += term,
            _ => {}
        }
    }
    Ok((pos - neg) / BigUint::from(m))
}

/// Number of elements of `F_{p^m}` fixed by `a -> a^{p^s}`, by exhaustion.
pub fn count_fixed_points(ctx: &FieldCtx, s: usize) -> u64 {
    let size = ctx.order_u64().expect("small field");
    (0..size)
        .filter(|&i| {
            let a = ctx.element_from_index(i);
            ctx.frobenius_pow(&a, s) == a
        })
        .count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn irreducibility_examples() {
        assert!(is_irreducible(&PolyModP::parse(2, "x^2 + x + 1").unwrap()));
        assert!(!is_irreducible(&PolyModP::parse(2, "x^2 + 1").unwrap()));
        assert!(is_irreducible(&PolyModP::parse(2, "x^20 + x^19 + x^4 + x^3 + 1").unwrap()));
        assert!(is_irreducible(&PolyModP::parse(101, "x^5 + x^4 + 2").unwrap()));
        assert!(!is_irreducible(&PolyModP::parse(3, "x^4 + 2").unwrap()));
    }

    #[test]
    fn irreducible_counts_match_exhaustion() {
        for (p, m) in [(2u64, 4usize), (2, 6), (3, 3), (5, 2), (3, 4)] {
            let brute = CandidateStream::unrestricted(p, m).unwrap().filter(is_irreducible).count();
            assert_eq!(count_irreducibles(p, m as u64).unwrap(), BigUint::from(brute));
        }
        assert_eq!(count_irreducibles(2, 4).unwrap(), BigUint::from(3u32));
        assert_eq!(count_irreducibles(13, 1).unwrap(), BigUint::from(13u32));
    }

    #[test]
    fn frobenius_identities() {
        let k = FieldCtx::scratch(2, 2).unwrap();
        let w = k.generator();
        assert_eq!(frobenius_power(&k, &w, 0, 1), w);
        assert_eq!(frobenius_power(&k, &w, 1, 1), k.add(&w, &k.one()));
        for (p, m) in [(2u64, 8usize), (3, 4), (5, 3)] {
            let k = FieldCtx::scratch(p, m).unwrap();
            for i in 0..k.order_u64().unwrap() {
                let a = k.element_from_index(i);
                assert_eq!(frobenius_power(&k, &a, m, 1), a);
            }
        }
    }

    #[test]
    fn fixed_points_of_frobenius_powers() {
        let k = FieldCtx::scratch(2, 12).unwrap();
        for s in [1usize, 2, 3, 4, 6, 8, 9, 12] {
            let g = crate::arith::gcd(s as u64, 12);
            assert_eq!(count_fixed_points(&k, s), 1 << g);
        }
    }

    #[test]
    fn sigma_polynomials() {
        let k = FieldCtx::scratch(2, 6).unwrap();
        let w = k.generator();
        let x = k.poly_x();
        assert_eq!(apply_sigma_poly(&k, &x, 1, &w).unwrap(), k.frobenius(&w));
        let xn = k.poly_x_n_minus_one(6);
        for i in 0..64 {
            let a = k.element_from_index(i);
            assert!(k.is_zero(&apply_sigma_poly(&k, &xn, 1, &a).unwrap()));
        }
        let bad = k.poly(vec![k.generator(), k.one()]);
        assert!(matches!(apply_sigma_poly(&k, &bad, 1, &w), Err(PcnError::OutsideSubfield(1))));
        // x - 1 applied to a normal element of F_4 is nonzero
        let f4 = FieldCtx::scratch(2, 2).unwrap();
        let v = f4.generator();
        let x1 = f4.poly_from_residues(&[1, 1]);
        assert!(!f4.is_zero(&apply_sigma_poly(&f4, &x1, 1, &v).unwrap()));
    }

    #[test]
    fn trace_and_norm() {
        let f = PolyModP::parse(101, "x^5 + x^4 + 2").unwrap();
        let k = FieldCtx::new(f).unwrap();
        let (t, n) = trace_norm(&k, &k.generator(), 1).unwrap();
        assert_eq!(t, k.from_u64(100));
        assert_eq!(n, k.from_u64(99));
        let c = k.from_u64(7);
        let (t, n) = trace_norm(&k, &c, 1).unwrap();
        assert_eq!(t, k.from_u64(35));
        assert_eq!(n, k.pow_u64(&c, 5));
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let k = FieldCtx::scratch(3, 6).unwrap();
        for _ in 0..10 {
            let u = k.random(&mut rng);
            let v = k.random(&mut rng);
            let (tu, nu) = trace_norm(&k, &u, 2).unwrap();
            let (tv, _) = trace_norm(&k, &v, 2).unwrap();
            assert_eq!(trace_norm(&k, &k.add(&u, &v), 2).unwrap().0, k.add(&tu, &tv));
            assert_eq!(k.frobenius_pow(&tu, 2), tu);
            assert_eq!(k.frobenius_pow(&nu, 2), nu);
        }
        assert!(trace_norm(&k, &k.one(), 4).is_err());
    }
}
