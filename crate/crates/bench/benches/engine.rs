use criterion::{black_box, criterion_group, criterion_main, Criterion};

use weingarten_core::{
    fit_linear_weingarten, make_family, run_suite, Family, FitTolerances, GridSpec, SuiteId,
};

fn grid_51() -> GridSpec {
    GridSpec {
        x_start: -1.0,
        x_stop: 1.0,
        x_count: 51,
        y_start: -1.0,
        y_stop: 1.0,
        y_count: 51,
    }
}

fn curvature_sampling(c: &mut Criterion) {
    let scherk = make_family(&Family::Scherk(1.0)).unwrap();
    let grid = grid_51();
    c.bench_function("sample_grid scherk 51x51", |b| {
        b.iter(|| scherk.sample_grid(black_box(&grid)).unwrap())
    });

    let point = (0.3, -0.4);
    c.bench_function("translation_curvature scherk", |b| {
        b.iter(|| scherk.translation_curvature(black_box(point.0), black_box(point.1)))
    });
}

fn weingarten_fit(c: &mut Criterion) {
    let paraboloid = make_family(&Family::Paraboloid).unwrap();
    let samples = paraboloid.sample_grid(&grid_51()).unwrap();
    let tol = FitTolerances::default();
    c.bench_function("fit 51x51 paraboloid", |b| {
        b.iter(|| fit_linear_weingarten(black_box(&samples), &tol).unwrap())
    });
}

fn identity_suites(c: &mut Criterion) {
    let mut group = c.benchmark_group("identity");
    group.sample_size(10);
    group.bench_function("homogeneous suite", |b| {
        b.iter(|| run_suite(SuiteId::Homogeneous, None, black_box(0)))
    });
    group.bench_function("inhomogeneous suite", |b| {
        b.iter(|| run_suite(SuiteId::Inhomogeneous, None, black_box(0)))
    });
    group.finish();
}

criterion_group!(benches, curvature_sampling, weingarten_fit, identity_suites);
criterion_main!(benches);
