use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use nc_core::ym::{flow, flow_many, gradient, FloatConnection, FlowConfig, YmModel};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ym(c: &mut Criterion) {
    let model = YmModel::pauli().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let a = FloatConnection::random(&mut rng, 3, model.dim, 1.0);
    c.bench_function("gradient K=3", |b| b.iter(|| gradient(&model, black_box(&a))));
    let cfg = FlowConfig::new(3);
    c.bench_function("single flow K=3", |b| b.iter(|| flow(&model, &cfg, black_box(7))));
    let seeds: Vec<u64> = (0..20).collect();
    c.bench_function("census K=3 over 20 seeds", |b| b.iter(|| flow_many(&model, &cfg, black_box(&seeds))));
}

criterion_group!(benches, ym);
criterion_main!(benches);
