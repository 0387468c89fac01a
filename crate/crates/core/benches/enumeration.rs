use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use simplelift::cover::count_covers;
use simplelift::growth::{growth_table, TableMetric};
use simplelift::{gamma_n, min_simple_lift_degree, pants_base, Execution};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn covers(c: &mut Criterion) {
    let mut group = c.benchmark_group("count_covers");
    for d in [5, 6] {
        for (name, mode) in MODES {
            group.bench_with_input(BenchmarkId::new(name, d), &d, |b, &d| b.iter(|| count_covers(2, black_box(d), mode)));
        }
    }
    group.finish();
}

fn lift_degree(c: &mut Criterion) {
    let base = pants_base();
    let mut group = c.benchmark_group("min_simple_lift_degree");
    group.sample_size(10);
    for n in [4, 5] {
        let word = gamma_n(n);
        for (name, mode) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &word, |b, w| {
                b.iter(|| min_simple_lift_degree(&base, black_box(w), n + 1, mode).unwrap())
            });
        }
    }
    group.finish();
}

fn table(c: &mut Criterion) {
    let mut group = c.benchmark_group("growth_table");
    group.sample_size(10);
    for (name, mode) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| growth_table(black_box(40), TableMetric::ThricePunctured, Some(4), mode).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, covers, lift_degree, table);
criterion_main!(benches);
