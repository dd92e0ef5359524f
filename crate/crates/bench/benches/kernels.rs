use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use cylflow::dynamics::{Dynamics, Scheme, Stepper};
use cylflow::field::SpectralSpace;
use cylflow::geometry::AxisPolynomial;
use cylflow::normal_form::reparametrize;
use cylflow::propagator::{Mehler, OscillatorBasis, Potential, Propagator};
use cylflow_bench::{mixed_state, radial_state};

fn transforms(c: &mut Criterion) {
    let mut g = c.benchmark_group("transforms");
    for (n, k) in [(12, 2), (16, 4)] {
        let space = SpectralSpace::new(n, k);
        let s = mixed_state(&space);
        let values = space.synthesize_uncached(&s.xi).unwrap();
        g.bench_with_input(
            BenchmarkId::new("synthesize", format!("{n}x{k}")),
            &s,
            |b, s| b.iter(|| space.synthesize_uncached(black_box(&s.xi)).unwrap()),
        );
        g.bench_with_input(
            BenchmarkId::new("analyze", format!("{n}x{k}")),
            &values,
            |b, v| b.iter(|| space.analyze(black_box(v))),
        );
    }
    g.finish();
}

fn right_hand_side(c: &mut Criterion) {
    let mut g = c.benchmark_group("rhs");
    let space = SpectralSpace::new(24, 4);
    let dynamics = Dynamics::new(&space);
    let radial = radial_state(&space);
    g.bench_function("radial_24x4", |b| {
        b.iter(|| dynamics.rhs_xi(black_box(&radial)).unwrap())
    });
    let space = SpectralSpace::new(10, 2);
    let dynamics = Dynamics::new(&space);
    let mixed = mixed_state(&space);
    g.bench_function("full_10x2", |b| {
        b.iter(|| dynamics.rhs_xi(black_box(&mixed)).unwrap())
    });
    let stepper = Stepper::new(&dynamics, Scheme::Etdrk2);
    g.bench_function("etdrk2_step_10x2", |b| {
        b.iter(|| stepper.step(black_box(&mixed), 0.01).unwrap())
    });
    g.finish();
}

fn normal_form(c: &mut Criterion) {
    let space = SpectralSpace::new(8, 2);
    let s = mixed_state(&space);
    let q = AxisPolynomial::single(2, [-1e-3, 0.0, 5e-4, 0.0]);
    let mut g = c.benchmark_group("normal_form");
    g.sample_size(10);
    g.bench_function("reparametrize_8x2", |b| {
        b.iter(|| reparametrize(&space, black_box(&s), &q).unwrap())
    });
    g.finish();
}

fn propagator(c: &mut Criterion) {
    let mut g = c.benchmark_group("propagator");
    let m = Mehler::new(60);
    let gauss = |y: f64| (-y * y / 4.0).exp();
    g.bench_function("mehler_point", |b| {
        b.iter(|| m.apply(&gauss, black_box(0.5), black_box(1.3)))
    });
    let basis = OscillatorBasis::new(40, 80);
    let mut c0 = vec![0.0; basis.len()];
    c0[4] = 1.0;
    let p = Propagator::new(&basis, Potential::Bracket { eps: 0.1 }, Some(3));
    g.bench_function("strang_step_k40", |b| {
        b.iter(|| p.step(black_box(&c0), 0.0, 1e-3))
    });
    g.finish();
}

criterion_group!(
    benches,
    transforms,
    right_hand_side,
    normal_form,
    propagator
);
criterion_main!(benches);
