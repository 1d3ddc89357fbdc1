use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};
use dirac_utm::massive::{MassiveEvaluator, QuadratureSpec, TermVariant};
use dirac_utm::reference::solve_reference;
use dirac_utm::transform::{time_transform, SpatialTransform};
use dirac_utm::{Complex64, Component, Geometry, Profile, Region};
use dirac_utm_bench::shipped;

fn transforms(c: &mut Criterion) {
    let p = Arc::new(Profile::gaussian_window(-1.0, 0.3, 1.8, Complex64::new(1.0, 0.0)).unwrap());
    let geometry = Geometry::half_lines(1.0).unwrap();
    let ks: Vec<f64> = (0..1000).map(|i| -200.0 + 0.4 * i as f64).collect();
    c.bench_function("spatial transform, 1000 wavenumbers", |b| {
        b.iter(|| {
            // a fresh memo each time so the closed form is measured
            let t = SpatialTransform::new(p.clone(), Region::Left, &geometry);
            ks.iter().map(|&k| t.value(k)).sum::<Complex64>()
        })
    });
    let nodes: Vec<f64> = (0..=1024).map(|i| i as f64 / 1024.0).collect();
    let values: Vec<Complex64> = nodes.iter().map(|&s| Complex64::new((3.0 * s).sin(), s)).collect();
    let trace = Profile::sampled(nodes, &values).unwrap();
    c.bench_function("time transform, 1024 samples", |b| {
        b.iter(|| time_transform(black_box(&trace), Complex64::new(0.0, 17.0), 1.0).unwrap())
    });
}

fn reference(c: &mut Criterion) {
    let (_, s) = shipped("massive_finite");
    c.bench_function("characteristic mesh, dx = 2^-8", |b| {
        b.iter(|| solve_reference(black_box(&s), 1.0 / 256.0, &[]).unwrap())
    });
}

fn massive(c: &mut Criterion) {
    let (cfg, s) = shipped("massive_interface");
    let r = solve_reference(&s, cfg.reference.dx, &[]).unwrap();
    let xs: Vec<f64> = (0..=20).map(|i| -0.15 * i as f64).collect();
    let mut group = c.benchmark_group("massive sweep");
    group.sample_size(10);
    group.bench_function("half-lines, fixed 256 panels", |b| {
        let ev = MassiveEvaluator::new(&s, &r.traces, TermVariant::Corrected, QuadratureSpec::fixed(128.0, 256)).unwrap();
        b.iter(|| ev.eval_grid(Region::Left, 0.5, black_box(&xs)).unwrap())
    });
    group.bench_function("half-lines, adaptive", |b| {
        let ev = MassiveEvaluator::new(&s, &r.traces, TermVariant::Corrected, QuadratureSpec::default()).unwrap();
        b.iter(|| ev.sweep(Region::Left, 0.5, 3.0, &[Component::Psi1]).unwrap().value(Component::Psi1, -1.0))
    });
    group.finish();
}

criterion_group!(benches, transforms, reference, massive);
criterion_main!(benches);
