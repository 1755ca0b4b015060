use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use cuntz_core::oscillation::contrank_check;
use cuntz_core::radius::{default_grid, rc_exact, rc_search};
use cuntz_core::rankratio::rho;
use cuntz_core::{AnyModel, SpectralProfile};

fn rank_ratio(c: &mut Criterion) {
    let m = AnyModel::parse("sum(pointfn(p,q,r), perforated(5))").unwrap();
    let x = m.make_element("<3, 1, inf> <7>").unwrap();
    let y = m.make_element("<2, 2, 4> <11>").unwrap();
    c.bench_function("rho/sum", |b| b.iter(|| rho(&m, black_box(&x), black_box(&y))));

    let s = AnyModel::parse("spectral(3)").unwrap();
    let a = s.make_element("[0:0, 1/3:1, 1:1] [0:1, 1:1/2] [0:1/4, 1/2:0, 1:1]").unwrap();
    let b2 = s.make_element("[0:1, 1:1] [0:1, 1:1] [0:1, 1:0]").unwrap();
    c.bench_function("rho/spectral", |b| b.iter(|| rho(&s, black_box(&a), black_box(&b2))));
}

fn radius(c: &mut Criterion) {
    let mut group = c.benchmark_group("rc_search/perforated");
    group.sample_size(10);
    for gap in [3u64, 5, 8] {
        let m = AnyModel::perforated(gap);
        let w = m.make_element("1").unwrap();
        let bound = 2 * gap + 1;
        let grid = default_grid(gap);
        group.bench_with_input(BenchmarkId::from_parameter(gap), &gap, |b, _| {
            b.iter(|| rc_search(&m, &w, bound, &grid).unwrap())
        });
    }
    group.finish();

    let m = AnyModel::parse("sum(perforated(3), perforated(5))").unwrap();
    let w = m.make_element("<4> <6>").unwrap();
    c.bench_function("rc_exact/sum", |b| b.iter(|| rc_exact(&m, black_box(&w)).unwrap()));
}

fn oscillation(c: &mut Criterion) {
    let mut group = c.benchmark_group("contrank");
    for (name, src) in [
        ("ramp", "[0:0, 1:1] [0:1, 1:1]"),
        ("crossing", "[0:0, 1:1/4] [0:1/4, 1:0] [0:1, 1:1]"),
        ("bounded_below", "[0:1/2, 1/3:1, 1:1] [0:1, 1:1/3]"),
    ] {
        let a = SpectralProfile::parse(src).unwrap();
        group.bench_function(name, |b| b.iter(|| contrank_check(black_box(&a))));
    }
    group.finish();
}

criterion_group!(benches, rank_ratio, radius, oscillation);
criterion_main!(benches);
