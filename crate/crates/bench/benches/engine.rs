use criterion::{criterion_group, criterion_main, Criterion};
use wbasis_core::characters::weight_multiplicities_b2;
use wbasis_core::partitions::{enumerate_admissible, semi_infinite_multiplicities, DominantWeight};
use wbasis_core::presentation::{graded_quotient_dims, ideal_generators_b2, ArithmeticMode};

fn bench_enumerate(c: &mut Criterion) {
    let lambda = DominantWeight::new(1, 0, 1);
    c.bench_function("enumerate_admissible level2 deg8", |b| {
        b.iter(|| enumerate_admissible(&lambda, 8))
    });
}

fn bench_quotient_dims(c: &mut Criterion) {
    let lambda = DominantWeight::new(1, 0, 0);
    let ideal = ideal_generators_b2(&lambda, 6).unwrap();
    let mut g = c.benchmark_group("quotient_dims level1 deg6");
    g.sample_size(20);
    g.bench_function("rational", |b| {
        b.iter(|| graded_quotient_dims(&ideal, 6, &ArithmeticMode::Rational, None).unwrap())
    });
    g.bench_function("modular", |b| {
        b.iter(|| {
            graded_quotient_dims(&ideal, 6, &ArithmeticMode::modular_default(), None).unwrap()
        })
    });
    g.finish();
}

fn bench_characters(c: &mut Criterion) {
    let lambda = DominantWeight::new(0, 0, 1);
    c.bench_function("weight_multiplicities_b2 spinor deg6", |b| {
        b.iter(|| weight_multiplicities_b2(&lambda, 6).unwrap())
    });
}

fn bench_semi_infinite(c: &mut Criterion) {
    let lambda = DominantWeight::new(1, 0, 0);
    let mut g = c.benchmark_group("semi_infinite");
    g.sample_size(10);
    g.bench_function("stabilize level1 cut4", |b| {
        b.iter(|| semi_infinite_multiplicities(&lambda, 4, None).unwrap())
    });
    g.finish();
}

criterion_group!(
    benches,
    bench_enumerate,
    bench_quotient_dims,
    bench_characters,
    bench_semi_infinite
);
criterion_main!(benches);
