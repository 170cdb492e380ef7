use std::cmp::Ordering;
use std::fmt;

use super::poly::{Poly, PolyArith};
use super::prime::PrimeField;
use crate::error::{PcnError, Result};

/// A polynomial over `Z/p` with reduced coefficients and no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyModP {
    p: u64,
    coeffs: Vec<u64>,
}

impl PolyModP {
    /// Builds a polynomial from low-to-high coefficients, reducing them mod `p`.
    pub fn new(p: u64, coeffs: Vec<u64>) -> Result<Self> {
        let field = PrimeField::new(p)?;
        Ok(Self::from_poly(&field, field.poly_from_residues(&coeffs)))
    }

    pub(crate) fn from_poly(field: &PrimeField, poly: Poly<u64>) -> Self {
        Self { p: field.p(), coeffs: poly.into_coeffs() }
    }

    pub fn zero(p: u64) -> Result<Self> {
        Self::new(p, Vec::new())
    }

    pub fn x(p: u64) -> Result<Self> {
        Self::new(p, vec![0, 1])
    }

    /// `x^n + sum of c * x^i` for the listed `(i, c)` terms.
    pub fn monic_with_terms(p: u64, n: usize, terms: &[(usize, u64)]) -> Result<Self> {
        let mut v = vec![0; n + 1];
        v[n] = 1;
        for &(i, c) in terms {
            if i >= n {
                return Err(PcnError::InvalidArgument(format!("term x^{i} not below degree {n}")));
            }
            v[i] = c;
        }
        Self::new(p, v)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn field(&self) -> PrimeField {
        PrimeField::new(self.p).expect("validated at construction")
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn to_poly(&self) -> Poly<u64> {
        self.field().poly(self.coeffs.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with `deg 0 = 0`.
    pub fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    /// Indices of the nonzero coefficients, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.coeffs.len()).filter(|&i| self.coeffs[i] != 0).collect()
    }

    pub fn weight(&self) -> usize {
        self.coeffs.iter().filter(|&&c| c != 0).count()
    }

    pub fn is_trinomial(&self) -> bool {
        self.weight() == 3
    }

    pub fn order_key(&self) -> PolyOrderKey {
        let support = self.support();
        let coeff_word = support.iter().rev().map(|&i| self.coeffs[i]).collect();
        PolyOrderKey { weight: support.len(), support, coeff_word }
    }

    pub fn add(&self, other: &Self) -> Self {
        let f = self.field();
        Self::from_poly(&f, f.poly_add(&self.to_poly(), &other.to_poly()))
    }

    pub fn sub(&self, other: &Self) -> Self {
        let f = self.field();
        Self::from_poly(&f, f.poly_sub(&self.to_poly(), &other.to_poly()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let f = self.field();
        Self::from_poly(&f, f.poly_mul(&self.to_poly(), &other.to_poly()))
    }

    pub fn divrem(&self, other: &Self) -> Result<(Self, Self)> {
        let f = self.field();
        let (q, r) = f.poly_divrem(&self.to_poly(), &other.to_poly())?;
        Ok((Self::from_poly(&f, q), Self::from_poly(&f, r)))
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let f = self.field();
        Self::from_poly(&f, f.poly_gcd(&self.to_poly(), &other.to_poly()))
    }

    /// Parses the display format, e.g. `x^5 + x^4 + 2` or `3*x^2 + 2*x + 1`.
    pub fn parse(p: u64, s: &str) -> Result<Self> {
        let bad = || PcnError::Parse(format!("cannot parse polynomial {s:?}"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad());
        }
        let mut terms: Vec<(usize, u64)> = Vec::new();
        let mut rest = compact.as_str();
        let mut first = true;
        while !rest.is_empty() {
            let negative = if let Some(r) = rest.strip_prefix('+') {
                rest = r;
                false
            } else if let Some(r) = rest.strip_prefix('-') {
                rest = r;
                true
            } else if first {
                false
            } else {
                return Err(bad());
            };
            first = false;
            let end = rest.find(['+', '-']).unwrap_or(rest.len());
            let (term, tail) = rest.split_at(end);
            rest = tail;
            let (coef, exp) = match term.split_once('x') {
                None => (term.parse::<u64>().map_err(|_| bad())?, 0usize),
                Some((c, e)) => {
                    let coef = match c {
                        "" => 1,
                        c => c.strip_suffix('*').ok_or_else(bad)?.parse::<u64>().map_err(|_| bad())?,
                    };
                    let exp = match e {
                        "" => 1,
                        e => e.strip_prefix('^').ok_or_else(bad)?.parse::<usize>().map_err(|_| bad())?,
                    };
                    (coef, exp)
                }
            };
            let coef = coef % p;
            terms.push((exp, if negative { (p - coef) % p } else { coef }));
        }
        let deg = terms.iter().map(|t| t.0).max().unwrap_or(0);
        let mut v = vec![0u64; deg + 1];
        for (e, c) in terms {
            v[e] = (v[e] + c) % p;
        }
        Self::new(p, v)
    }
}

impl fmt::Display for PolyModP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for i in (0..self.coeffs.len()).rev() {
            let c = self.coeffs[i];
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, c) => write!(f, "{c}*x")?,
                (i, 1) => write!(f, "x^{i}")?,
                (i, c) => write!(f, "{c}*x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Sort key realising the candidate order: weight, then the ascending
/// support word, then the coefficient word read from the top index down.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyOrderKey {
    pub weight: usize,
    pub support: Vec<usize>,
    pub coeff_word: Vec<u64>,
}

impl Ord for PolyOrderKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight
            .cmp(&other.weight)
            .then_with(|| self.support.cmp(&other.support))
            .then_with(|| self.coeff_word.cmp(&other.coeff_word))
    }
}

impl PartialOrd for PolyOrderKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Compares two polynomials in the candidate order.
pub fn compare_polys(f: &PolyModP, g: &PolyModP) -> Ordering {
    f.order_key().cmp(&g.order_key())
}

/// Monic polynomials of a fixed degree in strictly ascending candidate order.
///
/// The restricted stream only yields polynomials with `a_{m-1} != 0`, `a_0`
/// such that `(-1)^m a_0` is a primitive root mod `p`; trinomials
/// `x^m + a x^{m-1} + b` come first. The unrestricted stream yields every
/// monic polynomial of degree `m`.
#[derive(Clone, Debug)]
pub struct CandidateStream {
    field: PrimeField,
    m: usize,
    mandatory: Vec<usize>,
    optional: Vec<usize>,
    restricted: bool,
    weight: usize,
    max_weight: usize,
    combo: Vec<usize>,
    support: Vec<usize>,
    values: Vec<u64>,
    exhausted: bool,
}

impl CandidateStream {
    pub fn restricted(p: u64, m: usize) -> Result<Self> {
        let field = PrimeField::new(p)?;
        if m < 2 {
            return Err(PcnError::InvalidArgument("candidate degree must be at least 2".into()));
        }
        Ok(Self::build(field, m, vec![0, m - 1, m], (1..m - 1).collect(), true))
    }

    pub fn unrestricted(p: u64, m: usize) -> Result<Self> {
        let field = PrimeField::new(p)?;
        if m < 1 {
            return Err(PcnError::InvalidArgument("candidate degree must be at least 1".into()));
        }
        Ok(Self::build(field, m, vec![m], (0..m).collect(), false))
    }

    fn build(field: PrimeField, m: usize, mandatory: Vec<usize>, optional: Vec<usize>, restricted: bool) -> Self {
        let weight = mandatory.len();
        let max_weight = mandatory.len() + optional.len();
        let mut s = Self {
            field,
            m,
            mandatory,
            optional,
            restricted,
            weight,
            max_weight,
            combo: Vec::new(),
            support: Vec::new(),
            values: Vec::new(),
            exhausted: false,
        };
        s.load_support();
        s
    }

    /// Whether `c` may stand at index `i`.
    fn admissible(&self, i: usize, c: u64) -> bool {
        if i == self.m {
            return c == 1;
        }
        if i == 0 && self.restricted {
            let p = self.field.p();
            let norm = if self.m % 2 == 1 { (p - c) % p } else { c };
            return self.field.is_primitive_root(norm);
        }
        true
    }

    /// Smallest admissible value `>= from` at index `i`.
    fn next_value(&self, i: usize, from: u64) -> Option<u64> {
        (from..self.field.p()).find(|&c| self.admissible(i, c))
    }

    fn load_support(&mut self) {
        loop {
            let mut support: Vec<usize> =
                self.combo.iter().map(|&i| self.optional[i]).chain(self.mandatory.iter().copied()).collect();
            support.sort_unstable();
            // coefficient words run from the top index down
            support.reverse();
            let values: Option<Vec<u64>> = support.iter().map(|&i| self.next_value(i, 1)).collect();
            self.support = support;
            match values {
                Some(v) => {
                    self.values = v;
                    return;
                }
                None => {
                    if !self.next_support() {
                        return;
                    }
                }
            }
        }
    }

    fn next_support(&mut self) -> bool {
        if !next_combination(&mut self.combo, self.optional.len()) {
            self.weight += 1;
            if self.weight > self.max_weight {
                self.exhausted = true;
                return false;
            }
            self.combo = (0..self.weight - self.mandatory.len()).collect();
        }
        true
    }

    fn current(&self) -> PolyModP {
        let mut v = vec![0u64; self.m + 1];
        for (pos, &i) in self.support.iter().enumerate() {
            v[i] = self.values[pos];
        }
        PolyModP { p: self.field.p(), coeffs: v }
    }

    fn advance(&mut self) {
        for pos in (0..self.values.len()).rev() {
            let i = self.support[pos];
            if let Some(c) = self.next_value(i, self.values[pos] + 1) {
                self.values[pos] = c;
                for later in pos + 1..self.values.len() {
                    self.values[later] = self.next_value(self.support[later], 1).expect("nonempty domain");
                }
                return;
            }
        }
        if self.next_support() {
            self.load_support();
        }
    }
}

/// Advances a sorted `k`-subset of `0..n` to its lexicographic successor.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    for i in (0..k).rev() {
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

impl Iterator for CandidateStream {
    type Item = PolyModP;

    fn next(&mut self) -> Option<PolyModP> {
        if self.exhausted {
            return None;
        }
        let out = self.current();
        self.advance();
        Some(out)
    }
}

/// Restricted candidate stream; see [`CandidateStream::restricted`].
pub fn iterate_candidates(p: u64, m: usize) -> Result<CandidateStream> {
    CandidateStream::restricted(p, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(p: u64, s: &str) -> PolyModP {
        PolyModP::parse(p, s).unwrap()
    }

    #[test]
    fn display_round_trip() {
        for s in ["x^20 + x^19 + x^4 + x^3 + 1", "x^5 + x^4 + 2", "x", "1", "3*x^2 + 2*x + 1"] {
            assert_eq!(pp(101, s).to_string(), s);
        }
        assert_eq!(pp(5, "x^2 - 1").to_string(), "x^2 + 4");
        assert_eq!(PolyModP::zero(7).unwrap().to_string(), "0");
        assert!(PolyModP::parse(7, "x^^2").is_err());
    }

    #[test]
    fn order_examples() {
        assert_eq!(compare_polys(&pp(101, "x^5 + x^4 + 2"), &pp(101, "x^5 + x^4 + 3")), Ordering::Less);
        assert_eq!(compare_polys(&pp(2, "x^4 + x + 1"), &pp(2, "x^4 + x^2 + 1")), Ordering::Less);
        assert_eq!(
            compare_polys(&pp(5, "x^6 + 4*x^5 + 4"), &pp(5, "x^6 + x^5 + x + 1")),
            Ordering::Less
        );
    }

    #[test]
    fn unrestricted_stream_is_complete_and_sorted() {
        for (p, m) in [(2u64, 4usize), (3, 3), (5, 2)] {
            let all: Vec<PolyModP> = CandidateStream::unrestricted(p, m).unwrap().collect();
            assert_eq!(all.len() as u64, p.pow(m as u32));
            assert!(all.windows(2).all(|w| compare_polys(&w[0], &w[1]) == Ordering::Less));
            assert!(all.iter().all(|f| f.is_monic() && f.deg() == m));
        }
    }

    #[test]
    fn restricted_stream_starts_with_trinomials() {
        let v: Vec<PolyModP> = iterate_candidates(101, 5).unwrap().take(3).collect();
        assert_eq!(v[0].to_string(), "x^5 + x^4 + 2");
        assert!(v.iter().all(PolyModP::is_trinomial));
        assert!(v.windows(2).all(|w| compare_polys(&w[0], &w[1]) == Ordering::Less));
        let all: Vec<PolyModP> = iterate_candidates(2, 2).unwrap().collect();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].to_string(), "x^2 + x + 1");
        let f = PrimeField::new(7).unwrap();
        for g in iterate_candidates(7, 4).unwrap() {
            assert_ne!(g.coeff(3), 0);
            assert!(f.is_primitive_root(g.coeff(0)));
        }
    }
}
