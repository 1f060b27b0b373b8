//! Rayon against the sequential fallback for the two data-parallel stages:
//! scoring a population and developing one generation of children.
//! Build with `--no-default-features` to compile the rayon path out entirely.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use kbga::ga::{evaluate, evolve_generation, random_chromosome, Population};
use kbga::scenarios::builtin;
use kbga::{par, GaConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn modes() -> Vec<(&'static str, bool)> {
    let mut m = vec![("sequential", false)];
    if par::available() {
        m.push(("rayon", true));
    }
    m
}

fn scoring(c: &mut Criterion) {
    let mut group = c.benchmark_group("evaluate_population");
    for world in ["clustered", "unstructured-40"] {
        let env = builtin(world).unwrap().environment;
        let cfg = GaConfig::for_workspace(&env.workspace);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let paths: Vec<_> = (0..200).map(|_| random_chromosome(&mut rng, &env, &cfg)).collect();
        for (mode, parallel) in modes() {
            group.bench_with_input(BenchmarkId::new(mode, world), &paths, |b, paths| {
                b.iter(|| par::map(paths.clone(), parallel, |p| black_box(evaluate(&p, &env, &cfg).cost)))
            });
        }
    }
    group.finish();
}

fn generation(c: &mut Criterion) {
    let mut group = c.benchmark_group("evolve_generation");
    group.sample_size(20);
    for world in ["zig-zag", "clustered"] {
        let env = builtin(world).unwrap().environment;
        for (mode, parallel) in modes() {
            let cfg = GaConfig { parallel, ..GaConfig::for_workspace(&env.workspace) };
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            let pop = Population::random(&env, &cfg, &mut rng);
            group.bench_function(BenchmarkId::new(mode, world), |b| {
                b.iter(|| {
                    let mut rng = ChaCha8Rng::seed_from_u64(11);
                    black_box(evolve_generation(&pop, &env, &cfg, &mut rng).best_sofar.cost())
                })
            });
        }
    }
    group.finish();
}

criterion_group!(benches, scoring, generation);
criterion_main!(benches);
