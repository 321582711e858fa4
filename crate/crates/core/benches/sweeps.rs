use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hecke_core::verify::{self, Options};
use hecke_core::{CoxeterSystem, Exec, HasseQuiver};

const STRATEGIES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn quiver(ty: &str) -> HasseQuiver {
    HasseQuiver::from_system(Arc::new(CoxeterSystem::from_type(ty).unwrap()))
}

fn fuzz(c: &mut Criterion) {
    let mut g = c.benchmark_group("hecke_fuzz");
    g.sample_size(10);
    let q = quiver("A3");
    for (name, exec) in STRATEGIES {
        let opts = Options { fuzz_triples: 300, exec, ..Options::default() };
        g.bench_with_input(BenchmarkId::new(name, "A3"), &opts, |b, o| {
            b.iter(|| black_box(verify::hecke_axioms(q.hecke(), o)))
        });
    }
    g.finish();
}

fn zero_hecke(c: &mut Criterion) {
    let mut g = c.benchmark_group("demazure_closure");
    g.sample_size(10);
    let q = quiver("A3");
    for (name, exec) in STRATEGIES {
        g.bench_function(BenchmarkId::new(name, "A3"), |b| {
            b.iter(|| black_box(verify::demazure_closure(q.hecke(), exec)))
        });
    }
    g.finish();
}

fn rewriting(c: &mut Criterion) {
    let mut g = c.benchmark_group("rewrite");
    g.sample_size(10);
    for ty in ["A3", "I2(8)"] {
        let q = quiver(ty);
        for (name, exec) in STRATEGIES {
            let opts = Options { random_paths: 200, exec, ..Options::default() };
            g.bench_with_input(BenchmarkId::new(name, ty), &opts, |b, o| {
                b.iter(|| black_box(verify::rewrite(&q, o).unwrap()))
            });
        }
    }
    g.finish();
}

criterion_group!(benches, fuzz, zero_hecke, rewriting);
criterion_main!(benches);
