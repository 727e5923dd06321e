//! Data-parallel versus single-threaded evaluation of the heavier
//! structure-map computations. Build with `--no-default-features` to get
//! the purely sequential code path instead.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rayon::ThreadPoolBuilder;
use torsorkit::gallery::registry_torsor;
use torsorkit::side::{Side, SubHopf};

fn pools() -> Vec<(&'static str, rayon::ThreadPool)> {
    vec![
        ("1-thread", ThreadPoolBuilder::new().num_threads(1).build().unwrap()),
        ("default", ThreadPoolBuilder::new().build().unwrap()),
    ]
}

fn torsor_verify(c: &mut Criterion) {
    let mut group = c.benchmark_group("torsor_verify");
    group.sample_size(10);
    for name in ["quaternion", "cyclic-f7-n3"] {
        let t = registry_torsor(name).unwrap();
        for (label, pool) in pools() {
            group.bench_with_input(BenchmarkId::new(label, name), &t, |b, t| {
                b.iter(|| pool.install(|| black_box(t.verify())))
            });
        }
    }
    group.finish();
}

fn side_hopf(c: &mut Criterion) {
    let mut group = c.benchmark_group("left_hopf_algebra");
    group.sample_size(10);
    for name in ["quaternion", "trivial-s3"] {
        let t = registry_torsor(name).unwrap();
        for (label, pool) in pools() {
            group.bench_with_input(BenchmarkId::new(label, name), &t, |b, t| {
                b.iter(|| pool.install(|| black_box(SubHopf::compute(t, Side::Left).unwrap())))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, torsor_verify, side_hopf);
criterion_main!(benches);
