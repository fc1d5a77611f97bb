use agtractor::algebra::block_codifferential;
use agtractor::bgg::{solve_bgg_polynomial, Bundle};
use agtractor::examples;
use agtractor::weyl::{curvature_blocks, ChartWeylData, CurvatureBlocks};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

fn flat_solve(c: &mut Criterion) {
    let mut g = c.benchmark_group("flat_solve_degree2");
    g.sample_size(10);
    for n in [3, 4, 5] {
        let d = ChartWeylData::flat(n).unwrap();
        g.bench_with_input(BenchmarkId::new("tractor", n), &d, |b, d| {
            b.iter(|| solve_bgg_polynomial(d, Bundle::Tractor, 2).unwrap())
        });
    }
    g.finish();
}

fn flagship(c: &mut Criterion) {
    let mut g = c.benchmark_group("flagship");
    g.sample_size(10);
    g.bench_function("normalize", |b| b.iter(|| examples::flagship().unwrap()));
    let d = examples::flagship().unwrap();
    g.bench_function("curvature_blocks", |b| b.iter(|| curvature_blocks(black_box(&d)).unwrap()));
    g.finish();
}

fn codiff(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let k = CurvatureBlocks::random(3, &mut rng);
    c.bench_function("block_codifferential_n3", |b| b.iter(|| block_codifferential(black_box(&k)).unwrap()));
}

criterion_group!(benches, flat_solve, flagship, codiff);
criterion_main!(benches);
