//! Benchmarks for the numeric kernels: jet lifting, polynomial roots,
//! exact resultants, the germ classifier, and surface form evaluation.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use rand::{Rng, SeedableRng};

use hologeom_core::algebraic::AlgCurve;
use hologeom_core::complex::C;
use hologeom_core::expr::{lift1, parse};
use hologeom_core::geomspec::{DomainRect, GeomSpec};
use hologeom_core::jet::Jet2;
use hologeom_core::options::NumericOptions;
use hologeom_core::polysolve::{exact::resultant_exact, roots, zeros_in_box, CPoly};
use hologeom_core::surface::{classify_germ2, shape_at};

fn bench_jets(c: &mut Criterion) {
    let ast = parse("sin(t)*exp(t^2) + (1 + 2i)*t^3/(1 + t^2)").unwrap();
    c.bench_function("jet_lift_order6", |b| {
        b.iter(|| lift1(&ast, C::new(0.3, 0.1), 6).unwrap())
    });
}

fn bench_roots(c: &mut Criterion) {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    let coeffs: Vec<C> = (0..=24)
        .map(|_| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let poly = CPoly::new(coeffs);
    c.bench_function("aberth_degree24", |b| {
        b.iter(|| roots(&poly, 1e-10).unwrap())
    });

    let ast = parse("sin(t)").unwrap();
    let h = move |t: C, order: usize| lift1(&ast, t, order);
    c.bench_function("zeros_in_box_sine", |b| {
        b.iter(|| zeros_in_box(&h, DomainRect::new([-4.0, 4.0], [-1.0, 1.0]), 12, 1e-10).unwrap())
    });
}

fn bench_resultant(c: &mut Criterion) {
    // the d = 3 vertex eliminant: Res(f, W) with deg W = 10
    let spec = GeomSpec::algebraic_curve(
        3,
        &[
            (3, 0, 1, 1),
            (0, 3, 1, 2),
            (2, 1, -1, 3),
            (1, 0, 2, 1),
            (0, 1, -1, 1),
            (0, 0, 1, 1),
        ],
    );
    let curve = AlgCurve::from_spec(&spec).unwrap();
    c.bench_function("vertex_eliminant_d3", |b| {
        b.iter_batched(
            || curve.clone(),
            |curve| {
                let w = curve.vertex_poly();
                resultant_exact(&curve.f, &w, 1).unwrap()
            },
            BatchSize::SmallInput,
        )
    });
}

fn bench_germs(c: &mut Criterion) {
    let origin = (C::new(0.0, 0.0), C::new(0.0, 0.0));
    let mut jet = Jet2::zero(origin, 5);
    jet.set_coeff(2, 0, C::new(1.0, 0.2));
    jet.set_coeff(1, 1, C::new(0.4, -0.1));
    jet.set_coeff(0, 3, C::new(0.7, 0.0));
    jet.set_coeff(1, 2, C::new(-0.3, 0.5));
    jet.set_coeff(0, 4, C::new(0.2, 0.1));
    c.bench_function("classify_germ2_corank1", |b| {
        b.iter(|| classify_germ2(&jet, 1e-8))
    });
}

fn bench_surface(c: &mut Criterion) {
    let patch = GeomSpec::monge_surface(
        "(2*z1^2 + 3*z2^2)/2 + z1^3/6 + z1*z2^2/2 + z2^4/12",
        [DomainRect::square(0.5), DomainRect::square(0.5)],
    );
    let opts = NumericOptions::default();
    c.bench_function("shape_at", |b| {
        b.iter(|| shape_at(&patch, (C::new(0.1, 0.02), C::new(-0.05, 0.01)), &opts).unwrap())
    });
}

criterion_group!(
    benches,
    bench_jets,
    bench_roots,
    bench_resultant,
    bench_germs,
    bench_surface
);
criterion_main!(benches);
