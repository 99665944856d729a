use criterion::{black_box, criterion_group, criterion_main, Criterion};
use qosc_bench::algebra;
use qosc_core::osc::OscillatorModel;
use qosc_core::QScalar;

fn tower(c: &mut Criterion) {
    let mut g = c.benchmark_group("tower");
    g.sample_size(10);
    for (rmax, d) in [(2usize, 8usize), (3, 16)] {
        g.bench_function(format!("build_N3_r{rmax}_D{d}"), |b| {
            b.iter(|| {
                let m = OscillatorModel::new(algebra(3), QScalar::one(), rmax, d).unwrap();
                black_box(m.build_tower().unwrap())
            })
        });
    }
    let m = OscillatorModel::new(algebra(3), QScalar::one(), 3, 16).unwrap();
    let t = m.build_tower().unwrap();
    g.bench_function("verify_spectrum_N3_r3_D16", |b| b.iter(|| black_box(m.verify_spectrum(&t).unwrap())));
    g.finish();
}

criterion_group!(benches, tower);
criterion_main!(benches);
