use std::ops::Range;

use crate::error::{PcnError, Result};
use crate::gf::{FiniteField, Poly, PolyArith};

/// Units `h` of `F[x]/(g)` with `deg h < deg g`, in index order: the
/// coefficient of `x^j` is digit `j` of the index in base `|F|`, so low
/// degrees come first.
pub struct UnitIter<'a, F: FiniteField + ?Sized> {
    field: &'a F,
    modulus: Poly<F::Elem>,
    q: u64,
    dim: usize,
    range: Range<u64>,
}

/// Iterates all units of `F[x]/(g)`.
pub fn iterate_units<'a, F: FiniteField + ?Sized>(field: &'a F, g: &Poly<F::Elem>) -> Result<UnitIter<'a, F>> {
    if g.deg() == 0 {
        return Err(PcnError::ConstantPolynomial);
    }
    let q = field
        .order_u64()
        .ok_or_else(|| PcnError::IntegerTooLarge { bits: field.order().bits() })?;
    let dim = g.deg();
    let total = q
        .checked_pow(dim as u32)
        .ok_or_else(|| PcnError::IntegerTooLarge { bits: (q as f64).log2().ceil() as u64 * dim as u64 })?;
    Ok(UnitIter { field, modulus: field.poly_monic(g), q, dim, range: 0..total })
}

impl<'a, F: FiniteField + ?Sized> UnitIter<'a, F> {
    /// Size of the residue ring, i.e. the end of the full index range.
    pub fn ring_size(&self) -> u64 {
        self.q.pow(self.dim as u32)
    }

    /// Restricts the stream to a contiguous index range.
    pub fn chunk(mut self, range: Range<u64>) -> Self {
        let total = self.ring_size();
        self.range = range.start.min(total)..range.end.min(total);
        self
    }

    /// The residue with the given index.
    pub fn residue(&self, mut idx: u64) -> Poly<F::Elem> {
        let coeffs = (0..self.dim)
            .map(|_| {
                let d = idx % self.q;
                idx /= self.q;
                self.field.element_from_index(d)
            })
            .collect();
        self.field.poly(coeffs)
    }
}

impl<'a, F: FiniteField + ?Sized> Iterator for UnitIter<'a, F> {
    type Item = Poly<F::Elem>;

    fn next(&mut self) -> Option<Self::Item> {
        while let Some(idx) = self.range.next() {
            let h = self.residue(idx);
            if !h.is_zero() && self.field.poly_is_one(&self.field.poly_gcd(&h, &self.modulus)) {
                return Some(h);
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::cyclotomic_poly;
    use crate::gf::PrimeField;

    #[test]
    fn small_rings() {
        let f3 = PrimeField::new(3).unwrap();
        let units: Vec<_> = iterate_units(&f3, &f3.poly_from_residues(&[2, 1])).unwrap().collect();
        assert_eq!(units, vec![f3.poly_from_residues(&[1]), f3.poly_from_residues(&[2])]);
        let phi4 = cyclotomic_poly(&f3, 4).unwrap();
        assert_eq!(iterate_units(&f3, &phi4).unwrap().count(), 8);
        let f2 = PrimeField::new(2).unwrap();
        let sq = f2.poly_from_residues(&[1, 0, 1]);
        assert_eq!(iterate_units(&f2, &sq).unwrap().count(), 2);
        assert!(iterate_units(&f2, &f2.poly_one()).is_err());
    }

    #[test]
    fn chunks_partition_the_stream() {
        let f5 = PrimeField::new(5).unwrap();
        let g = f5.poly_x_n_minus_one(4);
        let all: Vec<_> = iterate_units(&f5, &g).unwrap().collect();
        let mut joined = Vec::new();
        for start in (0..625).step_by(100) {
            joined.extend(iterate_units(&f5, &g).unwrap().chunk(start..start + 100));
        }
        assert_eq!(all, joined);
        assert_eq!(all.len(), 256);
    }
}
