//! Parallel against sequential for the two data-parallel kernels: the rows
//! of a span oracle (one translate of the generator each) and the points of
//! a suite grid.  `cargo bench --no-default-features` measures the
//! sequential fallback of the library itself.

use std::hint::black_box;

use borelmodp::arith::FieldConfig;
use borelmodp::borel::{InducedChar, InducedElement, SmoothChar, SpanOracle, Window};
use borelmodp::suites::{self, Params};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn oracle(p: u32) -> std::sync::Arc<SpanOracle> {
    let f = FieldConfig::prime(p).unwrap();
    let sigma = InducedChar::for_galois(&SmoothChar::trivial(&f), 1);
    SpanOracle::for_s(1, 2, &sigma, Window::default_for(2)).unwrap()
}

fn rows(c: &mut Criterion) {
    let mut g = c.benchmark_group("oracle_rows");
    g.sample_size(10);
    for p in [2u32, 3] {
        let o = oracle(p);
        let gen = o.generator().clone();
        let words = o.translates().to_vec();
        g.bench_with_input(BenchmarkId::new("sequential", p), &words, |b, ws| {
            b.iter(|| {
                let out: Vec<InducedElement> = ws.iter().map(|w| gen.act(w).unwrap()).collect();
                black_box(out)
            })
        });
        #[cfg(feature = "parallel")]
        g.bench_with_input(BenchmarkId::new("parallel", p), &words, |b, ws| {
            use rayon::prelude::*;
            b.iter(|| {
                let out: Vec<InducedElement> = ws.par_iter().map(|w| gen.act(w).unwrap()).collect();
                black_box(out)
            })
        });
    }
    g.finish();
}

fn oracle_build(c: &mut Criterion) {
    let f = FieldConfig::prime(3).unwrap();
    let sigma = InducedChar::for_galois(&SmoothChar::trivial(&f), 1);
    let s = borelmodp::borel::s_generator(1, 2, &sigma).unwrap();
    let mode = if borelmodp::par::is_parallel() { "parallel" } else { "sequential" };
    let mut g = c.benchmark_group("oracle_build");
    g.sample_size(10);
    g.bench_function(mode, |b| b.iter(|| black_box(SpanOracle::new(s.clone(), Window::default_for(2)).unwrap())));
    g.finish();
}

fn suite_points(c: &mut Criterion) {
    let mode = if borelmodp::par::is_parallel() { "parallel" } else { "sequential" };
    let params = Params { p: Some(vec![2, 3]), trials: Some(5), ..Params::default() };
    let mut g = c.benchmark_group("suite_acbormu");
    g.sample_size(10);
    g.bench_function(mode, |b| b.iter(|| black_box(suites::run("acbormu", &params).unwrap())));
    g.finish();
}

criterion_group!(benches, rows, oracle_build, suite_points);
criterion_main!(benches);
