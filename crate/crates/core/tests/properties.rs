use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use proptest::prelude::*;

use pcn_core::arith::{divisors, euler_phi, is_prime_power, moebius};
use pcn_core::criteria::{non_cn_upper_bound, pn4_closed_form, primitive_lower_bound, run_criteria};
use pcn_core::enumeration::{brute_force_oracle, count_cn, count_pcn, is_complete_generator, EnumerationOptions};
use pcn_core::factor::phi_q_of_xn_minus_1;
use pcn_core::search::{is_normal, PrimitivityTester};
use pcn_core::structure::{essential_set, finest_agreeable_decomposition, is_completely_basic};
use pcn_core::{ExtensionModel, FiniteField, PrimePowerPair};

const CEILING: u64 = 1 << 24;

fn pair(q: u64, n: u64) -> PrimePowerPair {
    PrimePowerPair::from_q(q, n).unwrap()
}

fn small_grid(bound: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        let mut n = 1;
        while q.pow(n as u32) <= bound {
            out.push((q, n));
            n += 1;
        }
    }
    out
}

#[test]
fn passed_criteria_are_sound() {
    for (q, n) in small_grid(1 << 18) {
        let pr = pair(q, n);
        let r = run_criteria(&pr);
        if r.passed().is_some() {
            let t = brute_force_oracle(&pr, CEILING).unwrap();
            assert!(t.pcn > 0, "({q},{n}) passes a criterion but has no PCN element");
        }
    }
}

#[test]
fn non_cn_bound_covers_generators() {
    for (q, n) in small_grid(1 << 16) {
        let pr = pair(q, n);
        let u = BigInt::from(non_cn_upper_bound(&pr, &essential_set(&pr)));
        let generators: BigInt = divisors(n)
            .into_iter()
            .map(|a| BigInt::from(moebius(n / a)) * num_traits::pow(BigInt::from(q), a as usize))
            .sum();
        let cn = BigInt::from(brute_force_oracle(&pr, CEILING).unwrap().completely_normal);
        assert!(generators - u <= cn, "({q},{n})");
    }
}

#[test]
fn primitive_lower_bound_is_a_lower_bound() {
    for (q, n) in small_grid(1 << 40).into_iter().filter(|&(q, n)| q.pow(n as u32) >= 4) {
        let pr = pair(q, n);
        let phi = pcn_core::arith::factor_q_power_minus_one(q, n).unwrap().phi();
        let l = primitive_lower_bound(&pr).unwrap();
        assert!(l <= phi.to_f64().unwrap() * (1.0 + 1e-12), "({q},{n}) L={l} phi={phi}");
    }
}

#[test]
fn pn4_closed_forms_match_counts() {
    for q in [2u64, 3, 4, 5, 7] {
        let t = brute_force_oracle(&pair(q, 4), CEILING).unwrap();
        let closed = pn4_closed_form(q).expect("closed form applies");
        assert_eq!(closed, BigUint::from(t.primitive_normal), "q={q}");
    }
}

#[test]
fn completely_basic_pairs_have_all_normals_complete() {
    for (q, n) in small_grid(1 << 16) {
        let pr = pair(q, n);
        if is_completely_basic(&pr) {
            let rec = count_cn(&pr, &EnumerationOptions::default()).unwrap();
            assert_eq!(rec.cn, phi_q_of_xn_minus_1(q, n).unwrap(), "({q},{n})");
        }
    }
}

#[test]
fn records_are_ordered() {
    for (q, n) in small_grid(1 << 14) {
        let pr = pair(q, n);
        let t = brute_force_oracle(&pr, CEILING).unwrap();
        let rec = count_pcn(&pr, &EnumerationOptions::default()).unwrap();
        let pcn = rec.pcn.clone().unwrap();
        assert!(pcn <= BigUint::from(t.primitive_normal) && t.primitive_normal <= t.primitive);
        assert!(pcn <= rec.cn && rec.cn <= BigUint::from(t.normal));
        assert!(rec.cn <= phi_q_of_xn_minus_1(q, n).unwrap());
        let product: BigUint = rec.gens.iter().map(|g| g.count.clone()).product();
        assert_eq!(product, rec.cn);
    }
}

#[test]
fn completely_normal_by_essential_set_matches_all_divisors() {
    for (q, n) in small_grid(1 << 14) {
        let model = ExtensionModel::scratch(pair(q, n)).unwrap();
        let field = model.field().clone();
        let proper: Vec<u64> = divisors(n).into_iter().filter(|&d| d < n).collect();
        for i in 0..field.order_u64().unwrap() {
            let w = field.element_from_index(i);
            let all = if proper.is_empty() {
                !field.is_zero(&w)
            } else {
                proper.iter().all(|&d| is_normal(&model, &w, d).unwrap())
            };
            assert_eq!(model.is_completely_normal(&w).unwrap(), all, "({q},{n}) index {i}");
        }
    }
}

#[test]
fn relaxed_generator_test_agrees_with_full() {
    for (q, n) in small_grid(1 << 12) {
        let pr = pair(q, n);
        let model = ExtensionModel::scratch(pr).unwrap();
        let field = model.field().clone();
        for c in finest_agreeable_decomposition(&pr).parts {
            for i in 0..field.order_u64().unwrap() {
                let v = field.element_from_index(i);
                if pcn_core::enumeration::in_component(&model, &v, c).unwrap() {
                    assert_eq!(
                        is_complete_generator(&model, &v, c, true).unwrap(),
                        is_complete_generator(&model, &v, c, false).unwrap(),
                        "({q},{n}) {c} index {i}"
                    );
                }
            }
        }
    }
}

#[test]
fn degree_one_counts() {
    for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32] {
        assert!(is_prime_power(q));
        let rec = count_pcn(&pair(q, 1), &EnumerationOptions::default()).unwrap();
        assert_eq!(rec.cn, BigUint::from(q - 1));
        assert_eq!(rec.pcn, Some(BigUint::from(euler_phi(q - 1))));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pcn_does_not_depend_on_seed_or_chunking(idx in 0usize..12, seed in any::<u64>(), chunk in 1u64..5000) {
        let (q, n) = [(2u64, 6u64), (2, 8), (3, 4), (4, 3), (2, 10), (3, 6), (5, 3), (2, 12), (4, 4), (7, 3), (9, 3), (8, 4)][idx];
        let pr = pair(q, n);
        let base = count_pcn(&pr, &EnumerationOptions::default()).unwrap();
        let other = count_pcn(&pr, &EnumerationOptions { seed, chunk_size: chunk, ..Default::default() }).unwrap();
        prop_assert_eq!(base.cn, other.cn);
        prop_assert_eq!(base.pcn, other.pcn);
    }

    #[test]
    fn primitivity_is_closed_under_frobenius(i in 1u64..4096, j in 1usize..12) {
        let model = ExtensionModel::scratch(pair(2, 12)).unwrap();
        let field = model.field().clone();
        let tester = PrimitivityTester::for_field(2, 12).unwrap();
        let w = field.element_from_index(i);
        let c = pcn_core::gf::frobenius_power(&field, &w, j, 1);
        prop_assert_eq!(tester.is_primitive(&*field, &w).unwrap(), tester.is_primitive(&*field, &c).unwrap());
    }
}
