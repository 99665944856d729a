use criterion::{black_box, criterion_group, criterion_main, BatchSize, Criterion};
use qosc_bench::{algebra, mixed_words, reversed_x_words};

fn normal_ordering(c: &mut Criterion) {
    let mut g = c.benchmark_group("normal_order");
    for n in [3usize, 4, 5] {
        let words = mixed_words(n, 4, 16);
        // a fresh algebra per batch so the memo tables start cold
        g.bench_function(format!("mixed_len4_N{n}_cold"), |b| {
            b.iter_batched(|| algebra(n), |a| {
                for w in &words {
                    black_box(a.normal_order(w).unwrap());
                }
            }, BatchSize::PerIteration)
        });
        let a = algebra(n);
        g.bench_function(format!("mixed_len4_N{n}_warm"), |b| {
            b.iter(|| {
                for w in &words {
                    black_box(a.normal_order(w).unwrap());
                }
            })
        });
    }
    let words = reversed_x_words(3, 8);
    g.bench_function("reversed_x_len8_N3_cold", |b| {
        b.iter_batched(|| algebra(3), |a| {
            for w in &words {
                black_box(a.normal_order(w).unwrap());
            }
        }, BatchSize::PerIteration)
    });
    g.finish();
}

fn rule_setup(c: &mut Criterion) {
    let mut g = c.benchmark_group("setup");
    for n in [3usize, 5, 7] {
        g.bench_function(format!("algebra_N{n}"), |b| b.iter(|| black_box(algebra(n))));
    }
    g.finish();
}

criterion_group!(benches, normal_ordering, rule_setup);
criterion_main!(benches);
