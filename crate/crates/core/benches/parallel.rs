//! Randomized suites on one worker against the full pool. Build with
//! `--no-default-features` for the rayon-free sequential path.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use gwlines::cli::verify::{self, finite_sampler};
use gwlines::par;
use gwlines::rings::PrimeField;

fn suites(c: &mut Criterion) {
    let k = PrimeField::new(101).unwrap();
    let sample = finite_sampler(&k);
    let mut g = c.benchmark_group("res-det 200 trials");
    for jobs in [1, 0] {
        let name = if jobs == 1 { "one worker" } else { "all workers" };
        g.bench_function(name, |b| b.iter(|| par::with_jobs(jobs, || black_box(verify::res_det(&k, 200, 1, &sample)))));
    }
    g.finish();

    let mut g = c.benchmark_group("theorem F7 20 trials");
    g.sample_size(10);
    for jobs in [1, 0] {
        let name = if jobs == 1 { "one worker" } else { "all workers" };
        g.bench_function(name, |b| b.iter(|| par::with_jobs(jobs, || black_box(verify::theorem(7, 20, 1).unwrap()))));
    }
    g.finish();
}

criterion_group!(benches, suites);
criterion_main!(benches);
