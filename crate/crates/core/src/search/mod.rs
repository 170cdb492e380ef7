//! Element predicates (normality, complete normality, primitivity) and the
//! search for absolute PCN polynomials in candidate order.

use std::sync::Arc;

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::arith::{factor_q_power_minus_one, FactoredInteger};
use crate::error::{PcnError, Result};
use crate::gf::{frobenius_power, is_irreducible, CandidateStream, FieldCtx, FieldElement, FiniteField, PolyArith, PolyModP};
use crate::structure::{ExtensionModel, PrimePowerPair};

/// Normality of `w` over `F_{q^d}`: `G_i(sigma^d) w != 0` for every cofactor
/// `G_i = (x^{n/d} - 1) / g_i` of an irreducible factor `g_i`.
pub fn is_normal(model: &ExtensionModel, w: &FieldElement, d: u64) -> Result<bool> {
    if model.field().is_zero(w) {
        return Ok(false);
    }
    Ok(model.normality_test(d)?.passes(w))
}

/// Normality of `w` over `F_{q^d}` by the gcd criterion:
/// `gcd(x^N - 1, sum_{i<N} sigma^{di}(w) x^{N-i}) = 1` in `F_{q^n}[x]`, `N = n/d`.
pub fn is_normal_gcd(model: &ExtensionModel, w: &FieldElement, d: u64) -> Result<bool> {
    let pair = model.pair();
    if !pair.n.is_multiple_of(d) {
        return Err(PcnError::NotADivisor { divisor: d, value: pair.n });
    }
    let e = &**model.field();
    if e.is_zero(w) {
        return Ok(false);
    }
    let big_n = (pair.n / d) as usize;
    let step = model.sigma_exponent(d);
    let mut coeffs = vec![e.zero(); big_n + 1];
    for i in 0..big_n {
        coeffs[big_n - i] = frobenius_power(e, w, i, step);
    }
    let g = e.poly_gcd(&e.poly_x_n_minus_one(big_n), &e.poly(coeffs));
    Ok(g.deg() == 0)
}

/// Complete normality: normality over `F_{q^d}` for every `d` in `D*`.
pub fn is_completely_normal(model: &ExtensionModel, w: &FieldElement) -> Result<bool> {
    for &d in model.essential_set() {
        if !is_normal(model, w, d)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Primitivity test against a fixed factorization of `Q - 1`.
#[derive(Clone, Debug)]
pub struct PrimitivityTester {
    factored: Arc<FactoredInteger>,
    cofactors: Vec<BigUint>,
}

impl PrimitivityTester {
    pub fn new(factored: Arc<FactoredInteger>) -> Self {
        let cofactors = factored.primes().map(|r| factored.value() / r).collect();
        Self { factored, cofactors }
    }

    /// Tester for `F_{p^m}`, using the shared factorization of `p^m - 1`.
    pub fn for_field(p: u64, m: usize) -> Result<Self> {
        Ok(Self::new(factor_q_power_minus_one(p, m as u64)?))
    }

    pub fn factored(&self) -> &FactoredInteger {
        &self.factored
    }

    /// `w^{(Q-1)/r} != 1` for every prime `r | Q - 1`.
    pub fn is_primitive<F: FiniteField + ?Sized>(&self, field: &F, w: &F::Elem) -> Result<bool> {
        if field.is_zero(w) {
            return Err(PcnError::InvalidArgument("zero is not in the multiplicative group".into()));
        }
        if field.order_minus_one() != *self.factored.value() {
            return Err(PcnError::InvalidArgument("factorization does not match the field order".into()));
        }
        Ok(self.cofactors.iter().all(|c| !field.is_one(&field.pow(w, c))))
    }
}

/// Whether `w` generates the multiplicative group of `field`.
pub fn is_primitive<F: FiniteField + ?Sized>(field: &F, w: &F::Elem, factored: Arc<FactoredInteger>) -> Result<bool> {
    PrimitivityTester::new(factored).is_primitive(field, w)
}

fn verify_with(f: &PolyModP, absolute: PrimePowerPair, tester: &PrimitivityTester) -> Result<bool> {
    if !is_irreducible(f) {
        return Ok(false);
    }
    let field = Arc::new(FieldCtx::new(f.clone())?);
    let model = ExtensionModel::new(absolute, field.clone())?;
    let w = field.generator();
    for &d in model.essential_set() {
        if !model.is_normal_over(&w, d)? {
            return Ok(false);
        }
    }
    tester.is_primitive(&*field, &w)
}

fn check_degree(p: u64, e: u32, n: u64, f: &PolyModP) -> Result<PrimePowerPair> {
    let pair = PrimePowerPair::new(p, e, n)?;
    if f.p() != p {
        return Err(PcnError::InvalidArgument(format!("polynomial over F_{}, expected F_{p}", f.p())));
    }
    if f.deg() != pair.absolute_degree() || !f.is_monic() {
        return Err(PcnError::DegreeMismatch { expected: pair.absolute_degree(), actual: f.deg() });
    }
    Ok(pair)
}

/// True iff `f` is irreducible over `F_p` and its root `x + (f)` is
/// completely normal and primitive in `F_{p^{en}} / F_p`. Absolute complete
/// normality implies complete normality over every `F_q` with `q = p^e`.
pub fn verify_absolute_pcn(p: u64, e: u32, n: u64, f: &PolyModP) -> Result<bool> {
    let pair = check_degree(p, e, n, f)?;
    let tester = PrimitivityTester::for_field(p, pair.absolute_degree())?;
    verify_with(f, pair.absolute(), &tester)
}

/// Candidates examined per parallel batch.
pub const DEFAULT_BATCH: usize = 512;

/// The least polynomial, in candidate order over the restricted stream,
/// that passes [`verify_absolute_pcn`].
pub fn search_absolute_pcn(p: u64, e: u32, n: u64) -> Result<PolyModP> {
    search_absolute_pcn_batched(p, e, n, DEFAULT_BATCH)
}

/// [`search_absolute_pcn`] with an explicit batch size; the result does not
/// depend on the batch size or the number of threads.
pub fn search_absolute_pcn_batched(p: u64, e: u32, n: u64, batch: usize) -> Result<PolyModP> {
    let pair = PrimePowerPair::new(p, e, n)?;
    let m = pair.absolute_degree();
    if m < 2 {
        return Err(PcnError::InvalidArgument("the absolute degree e*n must be at least 2".into()));
    }
    let tester = PrimitivityTester::for_field(p, m)?;
    let absolute = pair.absolute();
    let mut stream = CandidateStream::restricted(p, m)?;
    let batch = batch.max(1);
    loop {
        let chunk: Vec<PolyModP> = stream.by_ref().take(batch).collect();
        if chunk.is_empty() {
            return Err(PcnError::SearchExhausted { p, degree: m });
        }
        let hit = chunk
            .par_iter()
            .map(|f| verify_with(f, absolute, &tester))
            .collect::<Result<Vec<bool>>>()?
            .into_iter()
            .position(|ok| ok);
        if let Some(i) = hit {
            return Ok(chunk[i].clone());
        }
    }
}

/// Header of the PCN polynomial CSV.
pub const PCNS_CSV_HEADER: &str = "p,n,poly,factorization";

/// `p,n,poly,factorization` with the factorization of `p^n - 1`.
pub fn pcns_csv_row(p: u64, n: u64, f: &PolyModP) -> Result<String> {
    let fac = factor_q_power_minus_one(p, n)?;
    Ok(format!("{p},{n},{f},{fac}"))
}
