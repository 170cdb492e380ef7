use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use super::pair::{essential_set, PrimePowerPair};
use crate::error::{PcnError, Result};
use crate::factor::factor_poly;
use crate::gf::{apply_sigma_poly, FieldCtx, FieldElement, FiniteField, Matrix, Poly, PolyArith, SubfieldEmbedding};

/// The intermediate field `F_{q^d}` of a model together with its embedding.
pub struct IntermediateField {
    pub d: u64,
    pub sub: Arc<FieldCtx>,
    pub embedding: SubfieldEmbedding,
}

/// Cofactor data for testing whether an element attains the order `P` with
/// respect to `sigma^d`, where `P` is a polynomial over `F_{q^d}`.
pub struct OrderTest {
    pub d: u64,
    /// Distinct monic irreducible factors of `P` over `F_{q^d}`.
    pub factors: Vec<Poly<FieldElement>>,
    /// Cofactors `P / g_i`, coefficients embedded into the big field.
    pub cofactors: Vec<Poly<FieldElement>>,
    /// Row-space bases of the `F_p`-linear maps `G_i(sigma^d)` on the big field.
    pub check_rows: Vec<Matrix>,
}

impl OrderTest {
    /// `G_i(sigma^d) w != 0` for every cofactor, via the precomputed matrices.
    pub fn passes(&self, w: &FieldElement) -> bool {
        self.check_rows
            .iter()
            .all(|m| m.mul_vec(w.coeffs()).iter().any(|&c| c != 0))
    }
}

/// `F_{q^n}` modelled as `F_p[x]/(f)` with cached intermediate fields and
/// normality tests.
pub struct ExtensionModel {
    pair: PrimePowerPair,
    field: Arc<FieldCtx>,
    essential: Vec<u64>,
    levels: Mutex<HashMap<u64, Arc<IntermediateField>>>,
    tests: Mutex<HashMap<(u64, Vec<u64>), Arc<OrderTest>>>,
}

impl ExtensionModel {
    /// Model over a given field of absolute degree `e n`.
    pub fn new(pair: PrimePowerPair, field: Arc<FieldCtx>) -> Result<Self> {
        if field.m() != pair.absolute_degree() || field.p() != pair.p {
            return Err(PcnError::DegreeMismatch { expected: pair.absolute_degree(), actual: field.m() });
        }
        Ok(Self {
            essential: essential_set(&pair),
            pair,
            field,
            levels: Mutex::new(HashMap::new()),
            tests: Mutex::new(HashMap::new()),
        })
    }

    /// Model over the scratch field of the right degree.
    pub fn scratch(pair: PrimePowerPair) -> Result<Self> {
        let field = FieldCtx::scratch(pair.p, pair.absolute_degree())?;
        Self::new(pair, field)
    }

    pub fn pair(&self) -> &PrimePowerPair {
        &self.pair
    }

    pub fn field(&self) -> &Arc<FieldCtx> {
        &self.field
    }

    pub fn essential_set(&self) -> &[u64] {
        &self.essential
    }

    /// Frobenius exponent of `sigma^d` relative to `p`.
    pub fn sigma_exponent(&self, d: u64) -> usize {
        (self.pair.e as u64 * d) as usize
    }

    /// The intermediate field `F_{q^d}`, built on first use.
    pub fn level(&self, d: u64) -> Result<Arc<IntermediateField>> {
        if !self.pair.n.is_multiple_of(d) {
            return Err(PcnError::NotADivisor { divisor: d, value: self.pair.n });
        }
        if let Some(l) = self.levels.lock().expect("lock").get(&d) {
            return Ok(l.clone());
        }
        let sub = FieldCtx::scratch(self.pair.p, self.sigma_exponent(d))?;
        let embedding = SubfieldEmbedding::build(sub.clone(), self.field.clone())?;
        let level = Arc::new(IntermediateField { d, sub, embedding });
        Ok(self.levels.lock().expect("lock").entry(d).or_insert(level).clone())
    }

    /// The same model with the intermediate field embedded through another
    /// root of its modulus.
    pub fn with_embedding_root(&self, d: u64, root: FieldElement) -> Result<Self> {
        let level = self.level(d)?;
        let embedding = SubfieldEmbedding::with_root(level.sub.clone(), self.field.clone(), root)?;
        let model = Self::new(self.pair, self.field.clone())?;
        model
            .levels
            .lock()
            .expect("lock")
            .insert(d, Arc::new(IntermediateField { d, sub: level.sub.clone(), embedding }));
        Ok(model)
    }

    /// Order test for the polynomial `target` (low-to-high coefficients over
    /// `F_{q^d}`) with respect to `sigma^d`.
    pub fn order_test(&self, d: u64, target: &Poly<FieldElement>) -> Result<Arc<OrderTest>> {
        let key_coeffs: Vec<u64> = target.coeffs().iter().flat_map(|c| c.coeffs().iter().copied()).collect();
        let key = (d, key_coeffs);
        if let Some(t) = self.tests.lock().expect("lock").get(&key) {
            return Ok(t.clone());
        }
        let level = self.level(d)?;
        let sub = &*level.sub;
        let factors: Vec<Poly<FieldElement>> =
            factor_poly(sub, target)?.factors.into_iter().map(|(g, _)| g).collect();
        let target = sub.poly_monic(target);
        let s = self.sigma_exponent(d);
        let mut cofactors = Vec::with_capacity(factors.len());
        let mut check_rows = Vec::with_capacity(factors.len());
        for g in &factors {
            let cof = level.embedding.map_poly(&sub.poly_div_exact(&target, g)?);
            check_rows.push(self.sigma_poly_matrix(&cof, s).row_space());
            cofactors.push(cof);
        }
        let test = Arc::new(OrderTest { d, factors, cofactors, check_rows });
        Ok(self.tests.lock().expect("lock").entry(key).or_insert(test).clone())
    }

    /// Order test for `x^{n/d} - 1`, i.e. normality over `F_{q^d}`.
    pub fn normality_test(&self, d: u64) -> Result<Arc<OrderTest>> {
        let level = self.level(d)?;
        let target = level.sub.poly_x_n_minus_one((self.pair.n / d) as usize);
        self.order_test(d, &target)
    }

    /// The `F_p`-matrix of `g(tau)` on the big field with `tau = a -> a^{p^s}`.
    pub fn sigma_poly_matrix(&self, g: &Poly<FieldElement>, s: usize) -> Matrix {
        let e = &self.field;
        let m = e.m();
        let tau = e.frobenius_power_matrix(s);
        let mut acc = Matrix::zeros(e.p(), m, m);
        let mut power = Matrix::identity(e.p(), m);
        for (i, c) in g.coeffs().iter().enumerate() {
            if i > 0 {
                power = tau.mul(&power);
            }
            if !e.is_zero(c) {
                acc = acc.add(&e.multiplication_matrix(c).mul(&power));
            }
        }
        acc
    }

    /// Normality over `F_{q^d}` by applying every cofactor `G_i(sigma^d)`.
    pub fn is_normal_over(&self, w: &FieldElement, d: u64) -> Result<bool> {
        if self.field.is_zero(w) {
            return Ok(false);
        }
        let test = self.normality_test(d)?;
        let s = self.sigma_exponent(d);
        for g in &test.cofactors {
            if self.field.is_zero(&apply_sigma_poly(&self.field, g, s, w)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Complete normality: normal over `F_{q^d}` for every `d` in `D*`.
    pub fn is_completely_normal(&self, w: &FieldElement) -> Result<bool> {
        for &d in &self.essential {
            if !self.is_normal_over(w, d)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The `q^d`-order of `w`: the least monic `g` over `F_{q^d}` with
    /// `g(sigma^d) w = 0`, a divisor of `x^{n/d} - 1`.
    pub fn q_order(&self, w: &FieldElement, d: u64) -> Result<Poly<FieldElement>> {
        let level = self.level(d)?;
        let sub = &*level.sub;
        if self.field.is_zero(w) {
            return Ok(sub.poly_one());
        }
        let full = sub.poly_x_n_minus_one((self.pair.n / d) as usize);
        let fac = factor_poly(sub, &full)?;
        let s = self.sigma_exponent(d);
        let mut current = full;
        for (g, mult) in &fac.factors {
            for _ in 0..*mult {
                let candidate = sub.poly_div_exact(&current, g)?;
                let image = apply_sigma_poly(&self.field, &level.embedding.map_poly(&candidate), s, w)?;
                if self.field.is_zero(&image) {
                    current = candidate;
                } else {
                    break;
                }
            }
        }
        Ok(current)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(q: u64, n: u64) -> ExtensionModel {
        ExtensionModel::scratch(PrimePowerPair::from_q(q, n).unwrap()).unwrap()
    }

    #[test]
    fn q_orders() {
        let m = model(2, 6);
        let e = m.field().clone();
        let one = m.q_order(&e.zero(), 1).unwrap();
        assert_eq!(one.deg(), 0);
        let lvl = m.level(1).unwrap();
        let x1 = lvl.sub.poly_from_residues(&[1, 1]);
        assert_eq!(m.q_order(&e.one(), 1).unwrap(), x1);
        let normal = (0..64u64)
            .map(|i| e.element_from_index(i))
            .filter(|w| m.q_order(w, 1).unwrap().deg() == 6)
            .count();
        assert_eq!(normal, 24);
    }

    #[test]
    fn matrix_and_direct_tests_agree() {
        let m = model(4, 3);
        let e = m.field().clone();
        for d in [1u64, 3] {
            let test = m.normality_test(d).unwrap();
            for i in 0..64 {
                let w = e.element_from_index(i);
                assert_eq!(test.passes(&w), m.is_normal_over(&w, d).unwrap());
            }
        }
    }

    #[test]
    fn normality_is_independent_of_embedding_root() {
        let m = model(3, 4);
        let e = m.field().clone();
        let lvl = m.level(2).unwrap();
        let baseline: Vec<bool> = (0..81).map(|i| m.is_normal_over(&e.element_from_index(i), 2).unwrap()).collect();
        for root in SubfieldEmbedding::all_roots(&lvl.sub, &e).unwrap() {
            let other = m.with_embedding_root(2, root).unwrap();
            let again: Vec<bool> =
                (0..81).map(|i| other.is_normal_over(&e.element_from_index(i), 2).unwrap()).collect();
            assert_eq!(again, baseline);
        }
    }
}
