use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pcn_bench::bench_pairs;
use pcn_core::criteria::run_criteria;
use pcn_core::enumeration::{count_cn, count_pcn, EnumerationOptions};
use pcn_core::search::{is_normal, is_normal_gcd, search_absolute_pcn, PrimitivityTester};
use pcn_core::{ExtensionModel, FieldCtx, FiniteField, PolyModP, PrimePowerPair};

fn field_arithmetic(c: &mut Criterion) {
    let f = PolyModP::parse(2, "x^20 + x^19 + x^4 + x^3 + 1").unwrap();
    let field = Arc::new(FieldCtx::new(f).unwrap());
    let a = field.element_from_index(0x5_a5a5);
    let b = field.element_from_index(0x3_c3c3);
    c.bench_function("mul F_2^20", |bench| bench.iter(|| field.mul(black_box(&a), black_box(&b))));
    let tester = PrimitivityTester::for_field(2, 20).unwrap();
    c.bench_function("primitivity F_2^20", |bench| bench.iter(|| tester.is_primitive(&*field, black_box(&a)).unwrap()));
}

fn normality(c: &mut Criterion) {
    let model = ExtensionModel::scratch(PrimePowerPair::from_q(4, 10).unwrap()).unwrap();
    let w = model.field().element_from_index(123_457);
    let mut group = c.benchmark_group("normality (4,10)");
    for d in [1u64, 2, 5] {
        group.bench_with_input(BenchmarkId::new("cofactor", d), &d, |bench, &d| {
            bench.iter(|| is_normal(&model, black_box(&w), d).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("gcd", d), &d, |bench, &d| {
            bench.iter(|| is_normal_gcd(&model, black_box(&w), d).unwrap())
        });
    }
    group.finish();
}

fn criteria(c: &mut Criterion) {
    let pairs = [PrimePowerPair::new(2, 2, 10).unwrap(), PrimePowerPair::new(89, 1, 100).unwrap()];
    c.bench_function("criteria cascade", |bench| {
        bench.iter(|| pairs.iter().map(|p| run_criteria(black_box(p)).passed()).collect::<Vec<_>>())
    });
}

fn search(c: &mut Criterion) {
    let mut group = c.benchmark_group("search");
    group.sample_size(10);
    group.bench_function("(2,1,16)", |bench| bench.iter(|| search_absolute_pcn(2, 1, 16).unwrap()));
    group.bench_function("(101,1,5)", |bench| bench.iter(|| search_absolute_pcn(101, 1, 5).unwrap()));
    group.finish();
}

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumeration");
    group.sample_size(10);
    for pair in bench_pairs() {
        let label = format!("({},{})", pair.q(), pair.n);
        group.bench_with_input(BenchmarkId::new("cn", &label), &pair, |bench, pair| {
            bench.iter(|| count_cn(pair, &EnumerationOptions::default()).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("pcn", &label), &pair, |bench, pair| {
            bench.iter(|| count_pcn(pair, &EnumerationOptions::default()).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, field_arithmetic, normality, criteria, search, enumeration);
criterion_main!(benches);
