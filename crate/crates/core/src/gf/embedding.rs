use std::sync::Arc;

use super::field::{FieldCtx, FieldElement};
use super::poly::{Poly, PolyArith};
use super::traits::FiniteField;
use crate::error::{PcnError, Result};
use crate::factor::find_roots;

/// A field homomorphism `F_p[y]/(g) -> F_p[x]/(f)` given by the image of `y`.
#[derive(Clone, Debug)]
pub struct SubfieldEmbedding {
    small: Arc<FieldCtx>,
    big: Arc<FieldCtx>,
    image: FieldElement,
    powers: Vec<FieldElement>,
}

impl SubfieldEmbedding {
    /// Embeds `small` into `big` by the smallest root (in element order) of the
    /// small modulus.
    pub fn build(small: Arc<FieldCtx>, big: Arc<FieldCtx>) -> Result<Self> {
        let roots = Self::all_roots(&small, &big)?;
        let root = roots
            .into_iter()
            .min_by(|a, b| big.cmp_elems(a, b))
            .ok_or_else(|| PcnError::Internal("small modulus has no root in the big field".into()))?;
        Self::with_root(small, big, root)
    }

    /// All roots of the small modulus inside the big field, one per embedding.
    pub fn all_roots(small: &FieldCtx, big: &FieldCtx) -> Result<Vec<FieldElement>> {
        if !big.m().is_multiple_of(small.m()) || big.p() != small.p() {
            return Err(PcnError::NotADivisor { divisor: small.m() as u64, value: big.m() as u64 });
        }
        let g = big.poly_from_residues(small.modulus().coeffs());
        let roots = find_roots(big, &g)?;
        if roots.len() != small.m() {
            return Err(PcnError::Internal("small modulus does not split in the big field".into()));
        }
        Ok(roots)
    }

    /// Embedding sending the small generator to `root`, which must be a root
    /// of the small modulus.
    pub fn with_root(small: Arc<FieldCtx>, big: Arc<FieldCtx>, root: FieldElement) -> Result<Self> {
        let g = big.poly_from_residues(small.modulus().coeffs());
        if !big.is_zero(&big.poly_eval(&g, &root)) {
            return Err(PcnError::InvalidArgument("image is not a root of the small modulus".into()));
        }
        let mut powers = Vec::with_capacity(small.m());
        let mut cur = big.one();
        for _ in 0..small.m() {
            powers.push(cur.clone());
            cur = big.mul(&cur, &root);
        }
        Ok(Self { small, big, image: root, powers })
    }

    pub fn small(&self) -> &Arc<FieldCtx> {
        &self.small
    }

    pub fn big(&self) -> &Arc<FieldCtx> {
        &self.big
    }

    pub fn image_of_generator(&self) -> &FieldElement {
        &self.image
    }

    pub fn map(&self, a: &FieldElement) -> FieldElement {
        let mut out = self.big.zero();
        for (c, pw) in a.coeffs().iter().zip(&self.powers) {
            if *c != 0 {
                let term = self.big.mul(pw, &self.big.from_u64(*c));
                self.big.add_assign(&mut out, &term);
            }
        }
        out
    }

    pub fn map_poly(&self, g: &Poly<FieldElement>) -> Poly<FieldElement> {
        self.big.poly(g.coeffs().iter().map(|c| self.map(c)).collect())
    }
}

/// Builds the embedding of `small` into `big`.
pub fn build_embedding(small: Arc<FieldCtx>, big: Arc<FieldCtx>) -> Result<SubfieldEmbedding> {
    SubfieldEmbedding::build(small, big)
}
