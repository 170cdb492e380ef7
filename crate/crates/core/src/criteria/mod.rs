//! Sufficient conditions for the existence of PCN elements: lower bounds for
//! the number of primitive elements, an upper bound for the number of
//! elements that are not completely normal, and the cascade C1 to C5.
//!
//! Every comparison except C1 is decided in exact integer arithmetic. The
//! fractional exponents `q^{n/2}` and `q^{5n/8}` are cleared by raising both
//! sides to the second or eighth power. C1 involves `ln ln(q^n - 1)` and is
//! decided in double precision; comparisons inside the guard band count as
//! failures, which keeps every reported pass sound.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{divisor_sum, divisors, euler_phi, factor_q_power_minus_one, is_prime, moebius, p_free_part};
use crate::error::{PcnError, Result};
use crate::factor::phi_qd_of_xn_minus_1;
use crate::gf::PolyModP;
use crate::structure::{essential_set, is_regular_pair, PrimePowerPair};

/// Relative margin below which a floating-point comparison is not trusted.
pub const RELATIVE_GUARD: f64 = 1e-9;

/// The Euler-Mascheroni constant.
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `4514.7 = 45147 / 10`.
const LEMMA_NUM: u32 = 45147;
const LEMMA_DEN: u32 = 10;

/// Outcome of a single criterion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flag {
    Passed,
    Failed,
    Skipped,
}

impl Flag {
    /// `True`, `False`, or the empty string for a skipped criterion.
    pub fn csv(&self) -> &'static str {
        match self {
            Flag::Passed => "True",
            Flag::Failed => "False",
            Flag::Skipped => "",
        }
    }
}

/// Decision taken before any criterion is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Prefilter {
    /// The pair is regular, so a PCN element is known to exist.
    SkipRegular,
    /// `q > n'`, so a PCN element is known to exist.
    SkipGaka,
    Evaluate,
}

impl fmt::Display for Prefilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Prefilter::SkipRegular => "regular pair",
            Prefilter::SkipGaka => "q > n'",
            Prefilter::Evaluate => "evaluate",
        })
    }
}

/// Result of the criteria cascade for one pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriteriaReport {
    pub pair: PrimePowerPair,
    pub essential: Vec<u64>,
    pub flags: [Flag; 5],
    /// A verified PCN polynomial, filled in by the search when C1 to C5 fail.
    pub witness: Option<PolyModP>,
    pub skip: Option<Prefilter>,
    /// `U_{(q,n)}`; zero for skipped pairs.
    pub non_cn_bound: BigUint,
    /// `omega(q^n - 1)` when C4 or C5 needed it.
    pub omega: Option<usize>,
    /// Set when `omega` is an upper bound because `q^n - 1` could not be factored.
    pub omega_is_bound: bool,
    /// Whether `2^omega <= 4514.7 q^{n/8}` held when C4 was evaluated.
    pub lemma_bound_holds: Option<bool>,
    /// C1 landed inside the floating-point guard band.
    pub c1_guarded: bool,
}

impl CriteriaReport {
    fn skipped(pair: PrimePowerPair, reason: Prefilter) -> Self {
        Self {
            pair,
            essential: essential_set(&pair),
            flags: [Flag::Skipped; 5],
            witness: None,
            skip: Some(reason),
            non_cn_bound: BigUint::zero(),
            omega: None,
            omega_is_bound: false,
            lemma_bound_holds: None,
            c1_guarded: false,
        }
    }

    /// Index (0-based) of the criterion that passed.
    pub fn passed(&self) -> Option<usize> {
        self.flags.iter().position(|f| *f == Flag::Passed)
    }

    /// True when every criterion was evaluated and failed.
    pub fn needs_witness(&self) -> bool {
        self.flags.iter().all(|f| *f == Flag::Failed)
    }

    /// Existence of a PCN element is established by this report.
    pub fn settled(&self) -> bool {
        self.skip.is_some_and(|s| s != Prefilter::Evaluate) || self.passed().is_some() || self.witness.is_some()
    }

    /// `p,e,n,C1,C2,C3,C4,C5,C6`.
    pub fn csv_row(&self) -> String {
        let flags: Vec<&str> = self.flags.iter().map(Flag::csv).collect();
        let witness = self.witness.as_ref().map(|w| w.to_string()).unwrap_or_default();
        format!("{},{},{},{},{}", self.pair.p, self.pair.e, self.pair.n, flags.join(","), witness)
    }
}

/// Header of the criteria CSV.
pub const CRITERIA_CSV_HEADER: &str = "p,e,n,C1,C2,C3,C4,C5,C6";

fn q_to_n(pair: &PrimePowerPair) -> BigUint {
    num_traits::pow(BigUint::from(pair.q()), pair.n as usize)
}

/// Natural logarithm of a positive big integer.
pub fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("finite").ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("finite");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

fn check_domain(pair: &PrimePowerPair) -> Result<BigUint> {
    let qn = q_to_n(pair);
    if qn < BigUint::from(3u32) {
        return Err(PcnError::InvalidArgument("q^n must be at least 3".into()));
    }
    Ok(qn)
}

/// `ln L_{(q,n)}` with `L = (q^n-1) / (e^gamma ln ln(q^n-1) + 3 / ln ln(q^n-1))`.
pub fn ln_primitive_lower_bound(pair: &PrimePowerPair) -> Result<f64> {
    let qn = check_domain(pair)?;
    let ln = ln_big(&(qn - 1u32));
    let lnln = ln.ln();
    if lnln <= 0.0 {
        return Err(PcnError::InvalidArgument("ln ln(q^n - 1) must be positive".into()));
    }
    Ok(ln - (EULER_GAMMA.exp() * lnln + 3.0 / lnln).ln())
}

/// The lower bound `L_{(q,n)}` for the number of primitive elements; may be
/// infinite in double precision for very large fields.
pub fn primitive_lower_bound(pair: &PrimePowerPair) -> Result<f64> {
    Ok(ln_primitive_lower_bound(pair)?.exp())
}

/// The weaker bound `ln 2 (q^n - 1) / (ln 2 + n ln q)`.
pub fn primitive_lower_bound_simple(pair: &PrimePowerPair) -> Result<f64> {
    let qn = check_domain(pair)?;
    let ln2 = std::f64::consts::LN_2;
    let ln_q = (pair.q() as f64).ln();
    Ok((ln_big(&(qn - 1u32)) + ln2.ln() - (ln2 + pair.n as f64 * ln_q).ln()).exp())
}

/// Number of elements of `F_{q^n}` that generate it over `F_{q^d}`:
/// `sum_{a | n/d} mu(n/(da)) q^{da}`.
fn generating_count(pair: &PrimePowerPair, d: u64) -> BigInt {
    let m = pair.n / d;
    let qd = num_traits::pow(BigInt::from(pair.q()), d as usize);
    divisors(m).into_iter().fold(BigInt::zero(), |acc, a| {
        acc + BigInt::from(moebius(m / a)) * num_traits::pow(qd.clone(), a as usize)
    })
}

/// `U = sum_{d in D} (sum_{a | n/d} mu(n/(da)) q^{da} - phi_{q^d}(x^{n/d} - 1))`,
/// an upper bound for the number of elements that are not completely normal
/// when `D` is an essential set.
pub fn non_cn_upper_bound(pair: &PrimePowerPair, essential: &[u64]) -> BigUint {
    let mut u = BigInt::zero();
    for &d in essential {
        let phi = phi_qd_of_xn_minus_1(pair.q(), d, pair.n / d).expect("valid pair");
        u += generating_count(pair, d) - BigInt::from(phi);
    }
    debug_assert!(!u.is_negative());
    u.to_biguint().unwrap_or_default()
}

/// `(Omega_d, Theta_d)`: the number of distinct monic irreducible factors of
/// `x^{n/d} - 1` over `F_{q^d}`, and `phi_{q^d}(x^m - 1) / q^{dm}` with
/// `m = (n/d)'`.
pub fn omega_theta(pair: &PrimePowerPair, d: u64) -> Result<(u64, BigRational)> {
    if !pair.n.is_multiple_of(d) {
        return Err(PcnError::NotADivisor { divisor: d, value: pair.n });
    }
    let (_, m) = p_free_part(pair.n / d, pair.p)?;
    let omega = divisors(m)
        .into_iter()
        .map(|t| euler_phi(t) / pair.order_mod_p_free(d, t))
        .sum();
    let num = phi_qd_of_xn_minus_1(pair.q(), d, m)?;
    let den = num_traits::pow(BigUint::from(pair.q()), (d * m) as usize);
    Ok((omega, BigRational::new(num.into(), den.into())))
}

/// Whether the pair is settled without evaluating any criterion.
pub fn prefilter(pair: &PrimePowerPair) -> Prefilter {
    if is_regular_pair(pair) {
        Prefilter::SkipRegular
    } else if pair.q() > pair.n_prime() {
        Prefilter::SkipGaka
    } else {
        Prefilter::Evaluate
    }
}

/// Upper bound for `omega(m)`: the largest `k` with the product of the
/// first `k` primes at most `m`.
fn omega_upper_bound(m: &BigUint) -> usize {
    let mut prod = BigUint::one();
    let mut k = 0;
    let mut c = 2u64;
    loop {
        if crate::arith::is_prime_u64(c) {
            prod *= c;
            if &prod > m {
                return k;
            }
            k += 1;
        }
        c += 1;
    }
}

fn pow2(e: u64) -> BigUint {
    BigUint::one() << e
}

/// Runs C1 to C5 in order, stopping at the first pass.
pub fn run_criteria(pair: &PrimePowerPair) -> CriteriaReport {
    let essential = essential_set(pair);
    let qn = q_to_n(pair);
    let u = non_cn_upper_bound(pair, &essential);
    let mut report = CriteriaReport {
        pair: *pair,
        flags: [Flag::Skipped; 5],
        witness: None,
        skip: None,
        non_cn_bound: u.clone(),
        omega: None,
        omega_is_bound: false,
        lemma_bound_holds: None,
        c1_guarded: false,
        essential,
    };

    // C1: L > U.
    let c1 = if u.is_zero() {
        qn >= BigUint::from(3u32)
    } else {
        match ln_primitive_lower_bound(pair) {
            Ok(ln_l) => {
                let diff = ln_l - ln_big(&u);
                if diff.abs() <= RELATIVE_GUARD {
                    report.c1_guarded = true;
                    false
                } else {
                    diff > 0.0
                }
            }
            Err(_) => false,
        }
    };
    report.flags[0] = flag(c1);
    if c1 {
        return report;
    }

    let lhs = if qn > u { qn.clone() - &u } else { BigUint::zero() };
    let (omega_sum, theta_num, theta_den) = report.essential.iter().fold(
        (0u64, BigUint::one(), BigUint::one()),
        |(s, a, b), &d| {
            let (o, th) = omega_theta(pair, d).expect("d divides n");
            (s + o, a * th.numer().to_biguint().expect("positive"), b * th.denom().to_biguint().expect("positive"))
        },
    );
    let q5n = num_traits::pow(BigUint::from(pair.q()), 5 * pair.n as usize);
    let lemma8 = num_traits::pow(BigUint::from(LEMMA_NUM), 8);
    let den8 = num_traits::pow(BigUint::from(LEMMA_DEN), 8);

    // C2: q^n - U >= 4514.7 q^{5n/8} 2^{sum Omega}.
    let c2 = !lhs.is_zero() && num_traits::pow(lhs.clone(), 8) * &den8 >= &lemma8 * &q5n * pow2(8 * omega_sum);
    report.flags[1] = flag(c2);
    if c2 {
        return report;
    }

    // C3: q^n - U >= 4514.7 q^{5n/8} prod(Theta_d 2^{Omega_d}).
    let c3 = !lhs.is_zero()
        && num_traits::pow(&lhs * &theta_den, 8) * &den8
            >= &lemma8 * &q5n * num_traits::pow(theta_num.clone(), 8) * pow2(8 * omega_sum);
    report.flags[2] = flag(c3);
    if c3 {
        return report;
    }

    let (omega, is_bound) = match factor_q_power_minus_one(pair.q(), pair.n) {
        Ok(f) => (f.omega(), false),
        Err(_) => (omega_upper_bound(&(qn.clone() - 1u32)), true),
    };
    report.omega = Some(omega);
    report.omega_is_bound = is_bound;
    report.lemma_bound_holds = Some(pow2(8 * omega as u64) * &den8 <= &lemma8 * &qn);

    // C4: q^n - U >= q^{n/2} 2^omega 2^{sum Omega}.
    let c4 = !lhs.is_zero() && &lhs * &lhs >= &qn * pow2(2 * (omega as u64 + omega_sum));
    report.flags[3] = flag(c4);
    if c4 {
        return report;
    }

    // C5: q^n - U > q^{n/2} (2^omega - 1) prod(Theta_d 2^{Omega_d}).
    let lhs_b = &lhs * &theta_den;
    let rhs_root = (pow2(omega as u64) - 1u32) * &theta_num;
    let c5 = !lhs.is_zero() && &lhs_b * &lhs_b > &qn * &rhs_root * &rhs_root * pow2(2 * omega_sum);
    report.flags[4] = flag(c5);
    report
}

fn flag(b: bool) -> Flag {
    if b {
        Flag::Passed
    } else {
        Flag::Failed
    }
}

/// Applies the prefilter, then the cascade for pairs that are not skipped.
pub fn assess(pair: &PrimePowerPair) -> CriteriaReport {
    match prefilter(pair) {
        Prefilter::Evaluate => run_criteria(pair),
        reason => CriteriaReport::skipped(*pair, reason),
    }
}

/// The sufficient condition `q >= (t(n) - 1)(ln 2 + n ln q) / ln 2` with
/// `t(n)` the sum of the divisors of `n`.
pub fn bound_281(pair: &PrimePowerPair) -> bool {
    let ln2 = std::f64::consts::LN_2;
    let rhs = (divisor_sum(pair.n) - 1) as f64 * (ln2 + pair.n as f64 * (pair.q() as f64).ln()) / ln2;
    pair.q() as f64 >= rhs
}

fn phi_big(m: &BigUint) -> Option<BigUint> {
    crate::arith::factor_integer(m).ok().map(|f| f.phi())
}

fn is_mersenne_prime(q: u64) -> bool {
    (q + 1).is_power_of_two() && crate::arith::is_prime_u64(q)
}

fn is_fermat_prime(m: u64) -> bool {
    crate::arith::is_prime_u64(m) && (m - 1).is_power_of_two() && (m - 1).trailing_zeros().is_power_of_two()
}

/// `PN_4(q)`, the number of primitive normal elements of `F_{q^4}` over
/// `F_q`, for the values of `q` where a closed form is known.
pub fn pn4_closed_form(q: u64) -> Option<BigUint> {
    if !crate::arith::is_prime_power(q) {
        return None;
    }
    let qb = BigUint::from(q);
    let q2 = &qb * &qb;
    if is_mersenne_prime(q) {
        let phi1 = phi_big(&(&qb - 1u32))?;
        let phi2 = phi_big(&(&q2 + 1u32))?;
        return Some((&qb * 2u32 - 2u32) * phi1 * phi2);
    }
    if q.is_multiple_of(2) && is_fermat_prime(q + 1) {
        let phi1 = phi_big(&(&qb - 1u32))?;
        let phi2 = phi_big(&(&q2 + 1u32))?;
        return Some((&qb - 1u32) * phi1 * phi2);
    }
    let special = if q.is_multiple_of(2) { &q2 + 1u32 } else { (&q2 + 1u32) / 2u32 };
    if !is_prime(&special) {
        return None;
    }
    let phi = phi_big(&(&q2 - 1u32))?;
    let factor = match q % 4 {
        1 => (&qb - 1u32) * (&qb - 3u32),
        3 => (&qb - 1u32) * (&qb - 1u32),
        _ => &qb * (&qb - 1u32),
    };
    Some(factor * phi)
}
