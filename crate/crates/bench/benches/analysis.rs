use criterion::{black_box, criterion_group, criterion_main, BatchSize, Criterion};
use qosc_bench::algebra;
use qosc_core::analysis::{Analysis, Variant};
use qosc_core::QScalar;

fn moments(c: &mut Criterion) {
    let mut g = c.benchmark_group("moments");
    g.sample_size(10);
    for d in [4usize, 8] {
        g.bench_function(format!("table_N3_degree{d}"), |b| {
            b.iter_batched(|| Analysis::new(algebra(3)), |an| {
                black_box(an.build_moments(&QScalar::ratio(1, 2), Variant::Q2, d).unwrap());
            }, BatchSize::PerIteration)
        });
    }
    g.bench_function("checks_N3_degree8", |b| {
        let an = Analysis::new(algebra(3));
        let t = an.build_moments(&QScalar::ratio(1, 2), Variant::Q2, 8).unwrap();
        b.iter(|| black_box(an.moment_checks(&t).unwrap()))
    });
    g.finish();
}

fn scalars(c: &mut Criterion) {
    let a = QScalar::one().div(&QScalar::q().add(&QScalar::one())).unwrap();
    let b = QScalar::q_pow(3).sub(&QScalar::ratio(2, 3)).div(&QScalar::q().pow(2).add(&QScalar::one())).unwrap();
    let mut g = c.benchmark_group("qscalar");
    g.bench_function("mul", |bch| bch.iter(|| black_box(a.mul(&b))));
    g.bench_function("add", |bch| bch.iter(|| black_box(a.add(&b))));
    let terms: Vec<QScalar> = (0..32).map(|k| a.pow(k % 4).mul(&b.pow(k % 3))).collect();
    g.bench_function("sum32", |bch| bch.iter(|| black_box(QScalar::sum(terms.iter()))));
    g.finish();
}

criterion_group!(benches, moments, scalars);
criterion_main!(benches);
