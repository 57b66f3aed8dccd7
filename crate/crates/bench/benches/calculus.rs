use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use psido_core::catalog;
use psido_core::fourier;
use psido_core::heat::{self, BiInvariantLaplacian};
use psido_core::nuclear;
use psido_core::quantize::{op_from_symbol, symbol_from_operator};
use psido_core::schatten;
use psido_core::verify::{self, Suite, VerifyOptions};
use psido_core::SeededRng;

const PAIRS: [(&str, &str); 4] = [("S3", "Z2a"), ("Q8", "Z4"), ("S4", "V4"), ("S4", "trivial")];

fn transforms(c: &mut Criterion) {
    let mut group = c.benchmark_group("fourier");
    for (g, h) in PAIRS {
        let space = catalog::builtin(g).unwrap().space(h).unwrap();
        let f = SeededRng::new(1).function(&space);
        let coeffs = fourier::forward(&space, &f).unwrap();
        let id = format!("{g}/{h}");
        group.bench_with_input(BenchmarkId::new("forward", &id), &f, |b, f| {
            b.iter(|| fourier::forward(&space, black_box(f)))
        });
        group.bench_with_input(BenchmarkId::new("inverse", &id), &coeffs, |b, c| {
            b.iter(|| fourier::inverse(&space, black_box(c)))
        });
    }
    group.finish();
}

fn quantization(c: &mut Criterion) {
    let mut group = c.benchmark_group("quantize");
    for (g, h) in PAIRS {
        let space = catalog::builtin(g).unwrap().space(h).unwrap();
        let op = SeededRng::new(2).operator(&space);
        let sigma = symbol_from_operator(&space, &op).unwrap();
        let id = format!("{g}/{h}");
        group.bench_with_input(BenchmarkId::new("extract", &id), &op, |b, op| {
            b.iter(|| symbol_from_operator(&space, black_box(op)))
        });
        group.bench_with_input(BenchmarkId::new("op", &id), &sigma, |b, s| {
            b.iter(|| op_from_symbol(&space, black_box(s)))
        });
    }
    group.finish();
}

fn operator_ideals(c: &mut Criterion) {
    let mut group = c.benchmark_group("ideals");
    for (g, h) in PAIRS {
        let space = catalog::builtin(g).unwrap().space(h).unwrap();
        let op = SeededRng::new(3).operator(&space);
        let id = format!("{g}/{h}");
        group.bench_with_input(BenchmarkId::new("schatten_half", &id), &op, |b, op| {
            b.iter(|| schatten::schatten_criterion_check(&space, black_box(op), 0.5))
        });
        group.bench_with_input(BenchmarkId::new("trace_report", &id), &op, |b, op| {
            b.iter(|| nuclear::trace_report(&space, black_box(op)))
        });
    }
    group.finish();
}

fn heat_trace(c: &mut Criterion) {
    let bundle = catalog::builtin("S4").unwrap();
    let space = bundle.space("S3").unwrap();
    let lap = BiInvariantLaplacian::for_bundle(&bundle).unwrap();
    c.bench_function("heat/formula S4/S3", |b| {
        b.iter(|| heat::heat_trace(&lap, &space, black_box(0.7)))
    });
    c.bench_function("heat/oracle S4/S3", |b| {
        b.iter(|| heat::heat_operator_oracle(&lap, &space, black_box(0.7)))
    });
}

fn catalog_verification(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify");
    group.sample_size(10);
    group.bench_function("catalog all suites", |b| {
        b.iter(|| {
            for (g, h) in catalog::standard_pairs() {
                let bundle = catalog::builtin(g).unwrap();
                let space = bundle.space(h).unwrap();
                black_box(verify::run_suite(
                    &bundle,
                    &space,
                    Suite::All,
                    &VerifyOptions::default(),
                ));
            }
        })
    });
    group.finish();
}

criterion_group!(
    benches,
    transforms,
    quantization,
    operator_ideals,
    heat_trace,
    catalog_verification
);
criterion_main!(benches);
