use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pencilrange::random::{random_complex_matrix, rng_for};
use pencilrange::{contains_zero, recover_zero_vector, Settings};

fn settings(parallel: bool) -> Settings {
    let s = Settings::default();
    if parallel {
        s
    } else {
        s.sequential()
    }
}

fn bench_contains_zero(c: &mut Criterion) {
    let mut group = c.benchmark_group("contains_zero");
    for n in [8usize, 24] {
        let mut rng = rng_for(7, n as u64);
        let mut m = random_complex_matrix(&mut rng, n);
        let shift = m.diagonal().iter().sum::<pencilrange::C64>() / n as f64;
        for i in 0..n {
            m[(i, i)] -= shift;
        }
        for parallel in [true, false] {
            let label = if parallel { "parallel" } else { "sequential" };
            group.bench_with_input(BenchmarkId::new(label, n), &m, |b, m| {
                b.iter(|| recover_zero_vector(m, &settings(parallel)).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_outside(c: &mut Criterion) {
    let mut group = c.benchmark_group("separation");
    let mut rng = rng_for(9, 0);
    let mut m = random_complex_matrix(&mut rng, 16);
    for i in 0..16 {
        m[(i, i)] += pencilrange::C64::new(20.0, 0.0);
    }
    for parallel in [true, false] {
        let label = if parallel { "parallel" } else { "sequential" };
        group.bench_function(label, |b| b.iter(|| contains_zero(&m, &settings(parallel)).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, bench_contains_zero, bench_outside);
criterion_main!(benches);
