use criterion::{black_box, criterion_group, criterion_main, Criterion};
use magnitude_bench::segment;
use magnitude_core::features::{extract_features_with, segment_cloud, EmbeddingSpec, FeatureBasis, FeatureConfig};
use magnitude_core::WeightKind;

fn features(c: &mut Criterion) {
    let seg = segment();
    let spec = EmbeddingSpec { lag_s: 0.02, dim: 3 };
    c.bench_function("embed_and_downsample", |b| b.iter(|| segment_cloud(black_box(&seg), &spec, 200).unwrap()));
    for kind in [WeightKind::Weighting, WeightKind::Diversifier, WeightKind::Uniform] {
        let cfg = FeatureConfig { kind, ..FeatureConfig::default() };
        let basis = FeatureBasis::new(3, &cfg);
        c.bench_function(&format!("extract_features/{kind:?}").to_lowercase(), |b| {
            b.iter(|| extract_features_with(black_box(&seg), &spec, &cfg, &basis).unwrap())
        });
    }
}

criterion_group!(benches, features);
criterion_main!(benches);
