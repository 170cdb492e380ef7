//! Cyclotomic components `C_{k,t} = ker Phi_k(sigma^t)` of a field model and
//! their complete generators.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::arith::{divisors, radical};
use crate::error::{PcnError, Result};
use crate::factor::cyclotomic_poly;
use crate::gf::{apply_sigma_poly, frobenius_power, FieldCtx, FieldElement, FiniteField, Matrix, Poly, PolyArith};
use crate::structure::{CyclotomicPair, ExtensionModel};

/// `Phi_k(x^t)` over `F_q`, with coefficients embedded into the big field.
fn embedded_component_poly(model: &ExtensionModel, c: CyclotomicPair) -> Result<Poly<FieldElement>> {
    let level = model.level(1)?;
    let sub = &*level.sub;
    let phi = sub.poly_inflate(&cyclotomic_poly(sub, c.k)?, c.t as usize);
    Ok(level.embedding.map_poly(&phi))
}

/// The projection `u = Gamma(sigma) w` with `Gamma = (x^n - 1) / Phi_k(x^t)`;
/// for a completely normal `w` the image is a complete generator of `C_{k,t}`.
pub fn project_generator(model: &ExtensionModel, w: &FieldElement, c: CyclotomicPair) -> Result<FieldElement> {
    let level = model.level(1)?;
    let sub = &*level.sub;
    let n = model.pair().n;
    if !n.is_multiple_of(c.k * c.t) {
        return Err(PcnError::NotADivisor { divisor: c.k * c.t, value: n });
    }
    let phi = sub.poly_inflate(&cyclotomic_poly(sub, c.k)?, c.t as usize);
    let gamma = sub.poly_div_exact(&sub.poly_x_n_minus_one(n as usize), &phi)?;
    apply_sigma_poly(model.field(), &level.embedding.map_poly(&gamma), model.sigma_exponent(1), w)
}

/// Whether `v` lies in `C_{k,t}`.
pub fn in_component(model: &ExtensionModel, v: &FieldElement, c: CyclotomicPair) -> Result<bool> {
    let g = embedded_component_poly(model, c)?;
    let image = apply_sigma_poly(model.field(), &g, model.sigma_exponent(c.t), v)?;
    Ok(model.field().is_zero(&image))
}

/// The levels `d | kappa` at which the order condition is tested; the
/// relaxed set keeps only the members of `D*`.
pub fn component_levels(model: &ExtensionModel, c: CyclotomicPair, relaxed: bool) -> Vec<u64> {
    let all = divisors(c.kappa());
    if relaxed {
        all.into_iter().filter(|d| model.essential_set().contains(d)).collect()
    } else {
        all
    }
}

/// `Phi_{rad k}(x^{kappa/d})` over `F_{q^d}`, the maximal `q^d`-order on `C_{k,t}`.
pub fn level_target(model: &ExtensionModel, c: CyclotomicPair, d: u64) -> Result<(std::sync::Arc<FieldCtx>, Poly<FieldElement>)> {
    let level = model.level(d)?;
    let sub = level.sub.clone();
    let target = sub.poly_inflate(&cyclotomic_poly(&*sub, radical(c.k))?, (c.kappa() / d) as usize);
    Ok((sub, target))
}

/// Complete generator test: `Ord_{q^d}(v) = Phi_{rad k}(x^{kappa/d})` for every
/// level `d`, checked through the cofactors of the target's irreducible factors.
pub fn is_complete_generator(model: &ExtensionModel, v: &FieldElement, c: CyclotomicPair, relaxed: bool) -> Result<bool> {
    if !in_component(model, v, c)? {
        return Err(PcnError::NotInModule { k: c.k, t: c.t });
    }
    if model.field().is_zero(v) {
        return Ok(false);
    }
    for d in component_levels(model, c, relaxed) {
        let (_, target) = level_target(model, c, d)?;
        if !model.order_test(d, &target)?.passes(v) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `C_{k,t}` as an `F_p`-space with the linear conditions describing its
/// complete generators.
///
/// Elements are `v = B h` for `h` in `F_p^N`, `N = e phi(k) t`, where the
/// columns of `B` are `beta_l sigma^j(u)`; `v` is a complete generator iff
/// `R_i h != 0` for every check matrix `R_i`.
pub struct ComponentSpace {
    pub component: CyclotomicPair,
    pub p: u64,
    pub base: FieldElement,
    pub levels: Vec<u64>,
    pub basis: Vec<FieldElement>,
    pub checks: Vec<Matrix>,
}

impl ComponentSpace {
    pub fn build(model: &ExtensionModel, w: &FieldElement, c: CyclotomicPair, relaxed: bool) -> Result<Self> {
        let e = model.field();
        let p = e.p();
        let base = project_generator(model, w, c)?;
        let level = model.level(1)?;
        let sub = &*level.sub;
        let q_deg = sub.m();
        let betas: Vec<FieldElement> = (0..q_deg)
            .map(|l| {
                let mut r = vec![0u64; l + 1];
                r[l] = 1;
                level.embedding.map(&sub.from_residues(&r))
            })
            .collect();
        let dim = c.dimension() as usize;
        let mut basis = Vec::with_capacity(dim * q_deg);
        for j in 0..dim {
            let conj = frobenius_power(e, &base, j, model.sigma_exponent(1));
            for beta in &betas {
                basis.push(e.mul(beta, &conj));
            }
        }
        let cols: Vec<Vec<u64>> = basis.iter().map(|b| b.coeffs().to_vec()).collect();
        let bmat = Matrix::from_columns(p, e.m(), &cols);
        let levels = component_levels(model, c, relaxed);
        let mut checks = Vec::new();
        for &d in &levels {
            let (_, target) = level_target(model, c, d)?;
            let test = model.order_test(d, &target)?;
            for rows in &test.check_rows {
                checks.push(rows.mul(&bmat).row_space());
            }
        }
        Ok(Self { component: c, p, base, levels, basis, checks })
    }

    /// Dimension `N` over `F_p`.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `v = B h`.
    pub fn element(&self, ctx: &FieldCtx, h: &[u64]) -> FieldElement {
        let mut acc = ctx.zero();
        for (b, &c) in self.basis.iter().zip(h) {
            if c != 0 {
                let term = ctx.mul(&ctx.from_residues(&[c]), b);
                ctx.add_assign(&mut acc, &term);
            }
        }
        acc
    }

    /// Whether the coefficient vector `h` yields a complete generator.
    pub fn passes(&self, h: &[u64]) -> bool {
        self.checks.iter().all(|r| r.mul_vec(h).iter().any(|&x| x != 0))
    }

    /// Number of complete generators by inclusion and exclusion over the
    /// kernels of the check matrices; exponential in the number of checks.
    pub fn count_by_inclusion_exclusion(&self) -> Result<BigInt> {
        let k = self.checks.len();
        if k > 24 {
            return Err(PcnError::InvalidArgument(format!("{k} checks are too many for inclusion-exclusion")));
        }
        let n = self.dim();
        let p = BigInt::from(self.p);
        let mut total = BigInt::zero();
        for mask in 0u32..(1u32 << k) {
            let chosen: Vec<&Matrix> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| &self.checks[i]).collect();
            let rank = if chosen.is_empty() { 0 } else { Matrix::stack(self.p, n, &chosen).rank() };
            let term = num_traits::pow(p.clone(), n - rank);
            if mask.count_ones() % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        Ok(total)
    }
}

/// The number of complete generators when no level beyond `d = 1` is tested:
/// the unit count of `F_q[x] / (Phi_k(x^t))`.
pub fn unit_count_of_component(model: &ExtensionModel, c: CyclotomicPair) -> Result<num_bigint::BigUint> {
    let level = model.level(1)?;
    let sub = &*level.sub;
    let phi = sub.poly_inflate(&cyclotomic_poly(sub, c.k)?, c.t as usize);
    let fac = crate::factor::factor_poly(sub, &phi)?;
    Ok(crate::factor::unit_count(sub, &fac))
}
