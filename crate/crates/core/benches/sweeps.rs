use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use racg::parabolic::{verify_combinatorics, verify_intersection};
use racg::{corpus, CoxeterGroup, Exec};

fn executors() -> Vec<(String, Exec)> {
    let all = Exec::with_workers(0);
    let mut out = vec![("sequential".to_owned(), Exec::sequential())];
    if all.is_parallel() {
        out.push((format!("parallel-{}", all.workers()), all));
    }
    out
}

fn ball(c: &mut Criterion) {
    let g = CoxeterGroup::new(corpus::random_graph(3));
    let mut group = c.benchmark_group("ball8");
    for (name, exec) in executors() {
        group.bench_function(BenchmarkId::from_parameter(&name), |b| {
            b.iter(|| black_box(g.ball_with(8, g.ball_cap(), &exec).unwrap().len()))
        });
    }
    group.finish();
}

fn sweeps(c: &mut Criterion) {
    let g = CoxeterGroup::new(corpus::k23_plus());
    let mut group = c.benchmark_group("sweeps");
    group.sample_size(10);
    for (name, exec) in executors() {
        group.bench_function(BenchmarkId::new("combinatorics-r3", &name), |b| {
            b.iter(|| black_box(verify_combinatorics(&g, 3, &exec).unwrap().cases))
        });
        group.bench_function(BenchmarkId::new("intersection-r3", &name), |b| {
            b.iter(|| black_box(verify_intersection(&g, 3, &exec).unwrap().cases))
        });
    }
    group.finish();
}

criterion_group!(benches, ball, sweeps);
criterion_main!(benches);
