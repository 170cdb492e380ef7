//! Dense univariate polynomials over any [`FiniteField`].

use std::cmp::Ordering;

use num_bigint::BigUint;

use super::traits::FiniteField;
use crate::error::{PcnError, Result};

/// Dense polynomial, `coeffs[i]` is the coefficient of `x^i`; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<E> {
    coeffs: Vec<E>,
}

impl<E> Poly<E> {
    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<E> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the convention `deg 0 = 0`.
    pub fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lead(&self) -> Option<&E> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> Option<&E> {
        self.coeffs.get(i)
    }

    pub fn map<T>(&self, f: impl FnMut(&E) -> T) -> Poly<T> {
        Poly { coeffs: self.coeffs.iter().map(f).collect() }
    }
}

/// Polynomial arithmetic over a field, available on every [`FiniteField`].
pub trait PolyArith: FiniteField {
    fn poly(&self, mut coeffs: Vec<Self::Elem>) -> Poly<Self::Elem> {
        while coeffs.last().is_some_and(|c| self.is_zero(c)) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    fn poly_zero(&self) -> Poly<Self::Elem> {
        Poly { coeffs: Vec::new() }
    }

    fn poly_one(&self) -> Poly<Self::Elem> {
        Poly { coeffs: vec![self.one()] }
    }

    fn poly_x(&self) -> Poly<Self::Elem> {
        Poly { coeffs: vec![self.zero(), self.one()] }
    }

    fn poly_constant(&self, c: Self::Elem) -> Poly<Self::Elem> {
        self.poly(vec![c])
    }

    /// `c * x^k`.
    fn poly_monomial(&self, c: Self::Elem, k: usize) -> Poly<Self::Elem> {
        let mut v = vec![self.zero(); k + 1];
        v[k] = c;
        self.poly(v)
    }

    /// Lifts prime-field residues into this field.
    fn poly_from_residues(&self, residues: &[u64]) -> Poly<Self::Elem> {
        self.poly(residues.iter().map(|&c| self.from_u64(c)).collect())
    }

    /// `x^n - 1`.
    fn poly_x_n_minus_one(&self, n: usize) -> Poly<Self::Elem> {
        let mut v = vec![self.zero(); n + 1];
        v[0] = self.minus_one();
        v[n] = self.one();
        self.poly(v)
    }

    fn poly_is_one(&self, a: &Poly<Self::Elem>) -> bool {
        a.coeffs.len() == 1 && self.is_one(&a.coeffs[0])
    }

    fn poly_add(&self, a: &Poly<Self::Elem>, b: &Poly<Self::Elem>) -> Poly<Self::Elem> {
        let n = a.coeffs.len().max(b.coeffs.len());
        let z = self.zero();
        let v = (0..n)
            .map(|i| {
                self.add(
                    a.coeffs.get(i).unwrap_or(&z),
                    b.coeffs.get(i).unwrap_or(&z),
                )
            })
            .collect();
        self.poly(v)
    }

    fn poly_sub(&self, a: &Poly<Self::Elem>, b: &Poly<Self::Elem>) -> Poly<Self::Elem> {
        let n = a.coeffs.len().max(b.coeffs.len());
        let z = self.zero();
        let v = (0..n)
            .map(|i| {
                self.sub(
                    a.coeffs.get(i).unwrap_or(&z),
                    b.coeffs.get(i).unwrap_or(&z),
                )
            })
            .collect();
        self.poly(v)
    }

    fn poly_scale(&self, a: &Poly<Self::Elem>, c: &Self::Elem) -> Poly<Self::Elem> {
        self.poly(a.coeffs.iter().map(|x| self.mul(x, c)).collect())
    }

    fn poly_mul(&self, a: &Poly<Self::Elem>, b: &Poly<Self::Elem>) -> Poly<Self::Elem> {
        if a.is_zero() || b.is_zero() {
            return self.poly_zero();
        }
        let mut v = vec![self.zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if self.is_zero(x) {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                v[i + j] = self.add(&v[i + j], &self.mul(x, y));
            }
        }
        self.poly(v)
    }

    fn poly_pow(&self, a: &Poly<Self::Elem>, mut e: u64) -> Poly<Self::Elem> {
        let mut acc = self.poly_one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.poly_mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.poly_mul(&base, &base);
            }
        }
        acc
    }

    fn poly_monic(&self, a: &Poly<Self::Elem>) -> Poly<Self::Elem> {
        match a.lead() {
            None => a.clone(),
            Some(l) if self.is_one(l) => a.clone(),
            Some(l) => {
                let inv = self.inv(l).expect("nonzero lead");
                self.poly_scale(a, &inv)
            }
        }
    }

    /// Quotient and remainder; fails on a zero divisor.
    fn poly_divrem(
        &self,
        a: &Poly<Self::Elem>,
        b: &Poly<Self::Elem>,
    ) -> Result<(Poly<Self::Elem>, Poly<Self::Elem>)> {
        let db = b.degree().ok_or(PcnError::ZeroPolynomial)?;
        if a.coeffs.len() < b.coeffs.len() {
            return Ok((self.poly_zero(), a.clone()));
        }
        let lead_inv = self.inv(b.lead().expect("nonzero")).expect("nonzero lead");
        let mut rem = a.coeffs.clone();
        let mut quot = vec![self.zero(); a.coeffs.len() - db];
        for i in (db..rem.len()).rev() {
            if self.is_zero(&rem[i]) {
                continue;
            }
            let c = self.mul(&rem[i], &lead_inv);
            for (j, bj) in b.coeffs.iter().enumerate() {
                let k = i - db + j;
                rem[k] = self.sub(&rem[k], &self.mul(&c, bj));
            }
            quot[i - db] = c;
        }
        rem.truncate(db);
        Ok((self.poly(quot), self.poly(rem)))
    }

    fn poly_rem(&self, a: &Poly<Self::Elem>, b: &Poly<Self::Elem>) -> Poly<Self::Elem> {
        self.poly_divrem(a, b).expect("nonzero modulus").1
    }

    /// Exact quotient `a / b`; errors if `b` does not divide `a`.
    fn poly_div_exact(
        &self,
        a: &Poly<Self::Elem>,
        b: &Poly<Self::Elem>,
    ) -> Result<Poly<Self::Elem>> {
        let (q, r) = self.poly_divrem(a, b)?;
        if !r.is_zero() {
            return Err(PcnError::Internal("inexact polynomial division".into()));
        }
        Ok(q)
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    fn poly_gcd(&self, a: &Poly<Self::Elem>, b: &Poly<Self::Elem>) -> Poly<Self::Elem> {
        let mut x = a.clone();
        let mut y = b.clone();
        while !y.is_zero() {
            let r = self.poly_rem(&x, &y);
            x = y;
            y = r;
        }
        self.poly_monic(&x)
    }

    /// Returns `(g, s)` with `g = gcd(a, m)` monic and `s*a = g (mod m)`.
    fn poly_ext_gcd(
        &self,
        a: &Poly<Self::Elem>,
        m: &Poly<Self::Elem>,
    ) -> (Poly<Self::Elem>, Poly<Self::Elem>) {
        let (mut r0, mut r1) = (m.clone(), self.poly_rem(a, m));
        let (mut s0, mut s1) = (self.poly_zero(), self.poly_one());
        while !r1.is_zero() {
            let (q, r) = self.poly_divrem(&r0, &r1).expect("nonzero");
            let s = self.poly_sub(&s0, &self.poly_mul(&q, &s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        match r0.lead() {
            None => (r0, s0),
            Some(l) => {
                let inv = self.inv(l).expect("nonzero");
                (self.poly_scale(&r0, &inv), self.poly_scale(&s0, &inv))
            }
        }
    }

    fn poly_derivative(&self, a: &Poly<Self::Elem>) -> Poly<Self::Elem> {
        if a.coeffs.len() <= 1 {
            return self.poly_zero();
        }
        let v = a.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(i, c)| self.mul(c, &self.from_u64((i as u64 + 1) % self.characteristic())))
            .collect();
        self.poly(v)
    }

    fn poly_mulmod(
        &self,
        a: &Poly<Self::Elem>,
        b: &Poly<Self::Elem>,
        m: &Poly<Self::Elem>,
    ) -> Poly<Self::Elem> {
        self.poly_rem(&self.poly_mul(a, b), m)
    }

    fn poly_powmod(
        &self,
        a: &Poly<Self::Elem>,
        e: &BigUint,
        m: &Poly<Self::Elem>,
    ) -> Poly<Self::Elem> {
        let base = self.poly_rem(a, m);
        let mut acc = self.poly_rem(&self.poly_one(), m);
        for i in (0..e.bits()).rev() {
            acc = self.poly_mulmod(&acc, &acc, m);
            if e.bit(i) {
                acc = self.poly_mulmod(&acc, &base, m);
            }
        }
        acc
    }

    /// `a^{|F|} mod m`, the Frobenius of the residue ring.
    fn poly_frobenius_mod(&self, a: &Poly<Self::Elem>, m: &Poly<Self::Elem>) -> Poly<Self::Elem> {
        self.poly_powmod(a, &self.order(), m)
    }

    fn poly_eval(&self, a: &Poly<Self::Elem>, x: &Self::Elem) -> Self::Elem {
        a.coeffs
            .iter()
            .rev()
            .fold(self.zero(), |acc, c| self.add(&self.mul(&acc, x), c))
    }

    /// `a(x^k)`.
    fn poly_inflate(&self, a: &Poly<Self::Elem>, k: usize) -> Poly<Self::Elem> {
        if a.is_zero() {
            return a.clone();
        }
        let mut v = vec![self.zero(); a.deg() * k + 1];
        for (i, c) in a.coeffs.iter().enumerate() {
            v[i * k] = c.clone();
        }
        self.poly(v)
    }

    /// Total order of polynomials: weight, support word, then coefficient
    /// word read from the top index down.
    fn poly_cmp_prec(&self, a: &Poly<Self::Elem>, b: &Poly<Self::Elem>) -> Ordering {
        let sa: Vec<usize> = support(self, a);
        let sb: Vec<usize> = support(self, b);
        sa.len()
            .cmp(&sb.len())
            .then_with(|| sa.cmp(&sb))
            .then_with(|| {
                for (&i, &j) in sa.iter().rev().zip(sb.iter().rev()) {
                    let o = self.cmp_elems(&a.coeffs[i], &b.coeffs[j]);
                    if o != Ordering::Equal {
                        return o;
                    }
                }
                Ordering::Equal
            })
    }
}

impl<F: FiniteField + ?Sized> PolyArith for F {}

fn support<F: FiniteField + ?Sized>(field: &F, a: &Poly<F::Elem>) -> Vec<usize> {
    a.coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !field.is_zero(c))
        .map(|(i, _)| i)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::PrimeField;
    use proptest::prelude::*;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn divrem_reconstructs() {
        let k = f(7);
        let a = k.poly_from_residues(&[3, 0, 5, 1, 6]);
        let b = k.poly_from_residues(&[1, 2, 3]);
        let (q, r) = k.poly_divrem(&a, &b).unwrap();
        assert!(r.deg() < 2);
        assert_eq!(k.poly_add(&k.poly_mul(&q, &b), &r), a);
        assert!(k.poly_divrem(&a, &k.poly_zero()).is_err());
    }

    #[test]
    fn gcd_of_x6_minus_one_and_x4_minus_one() {
        let k = f(5);
        let g = k.poly_gcd(&k.poly_x_n_minus_one(6), &k.poly_x_n_minus_one(4));
        assert_eq!(g, k.poly_x_n_minus_one(2));
    }

    proptest! {
        #[test]
        fn ext_gcd_inverse(a in proptest::collection::vec(0u64..11, 1..8)) {
            let k = f(11);
            let m = k.poly_from_residues(&[1, 0, 0, 0, 0, 0, 0, 0, 1, 1]);
            let a = k.poly_from_residues(&a);
            let (g, s) = k.poly_ext_gcd(&a, &m);
            let lhs = k.poly_mulmod(&s, &a, &m);
            prop_assert_eq!(lhs, k.poly_rem(&g, &m));
        }
    }
}
