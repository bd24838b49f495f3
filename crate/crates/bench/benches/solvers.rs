use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use magnitude_bench::square_cloud;
use magnitude_core::{diversifier, weighting};

fn solvers(c: &mut Criterion) {
    let mut group = c.benchmark_group("solvers");
    for n in [50, 100, 200, 400] {
        let cloud = square_cloud(n);
        group.bench_with_input(BenchmarkId::new("weighting", n), &cloud, |b, cloud| {
            b.iter(|| weighting(black_box(cloud), 1.0).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("diversifier", n), &cloud, |b, cloud| {
            b.iter(|| diversifier(black_box(cloud), 1.0).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, solvers);
criterion_main!(benches);
