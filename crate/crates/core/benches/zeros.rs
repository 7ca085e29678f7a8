use std::f64::consts::PI;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use opuc::exec::Exec;
use opuc::experiments::purepoints;
use opuc::phase::PhaseFunction;
use opuc::verblunsky::VerblunskySequence;
use opuc::Complex64;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn zeros(c: &mut Criterion) {
    let seq = VerblunskySequence::power_law(1.0, 0.25).unwrap();
    let beta = Complex64::from_polar(1.0, PI);
    let mut group = c.benchmark_group("popuc_zeros");
    group.sample_size(10);
    for n in [200, 1000] {
        let phase = PhaseFunction::new(&seq, n).unwrap();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &n, |b, _| {
                b.iter(|| phase.zeros(black_box(beta), 1e-12, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn pure_point_trials(c: &mut Criterion) {
    let mut group = c.benchmark_group("purepoints_50_trials");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| purepoints(None, 50, -0.3, 500, 50, 11, exec).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, zeros, pure_point_trials);
criterion_main!(benches);
