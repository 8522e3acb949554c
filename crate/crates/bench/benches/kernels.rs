use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use divalg_core::graded::{find_algebra_generators, find_module_generators};
use divalg_core::induction::{theorem34_pipeline, Decomposition, PipelineOptions};
use divalg_core::lattice::linalg::rat;
use divalg_core::toric::{divisorial_algebra, divisorial_module, examples};
use divalg_core::{CartierDivisor, Cone, RationalPolyhedron};

fn lattice_points(c: &mut Criterion) {
    let mut g = c.benchmark_group("lattice_points");
    for m in [4i64, 8, 16] {
        let p = RationalPolyhedron::standard_simplex(3, 1).dilate(&rat(m));
        g.bench_with_input(BenchmarkId::new("simplex3", m), &p, |b, p| {
            b.iter(|| p.count_lattice_points().unwrap())
        });
    }
    g.finish();
}

fn hilbert_basis(c: &mut Criterion) {
    let mut g = c.benchmark_group("hilbert_basis");
    for k in [3i64, 7, 15] {
        let cone = Cone::from_i64s(2, &[&[1, 0], &[k, k + 1]]).unwrap();
        g.bench_with_input(BenchmarkId::new("2d", k), &cone, |b, cone| {
            b.iter(|| cone.hilbert_basis().unwrap())
        });
    }
    let cone = Cone::from_i64s(3, &[&[1, 0, 0], &[1, 3, 0], &[1, 0, 4]]).unwrap();
    g.bench_function("3d", |b| b.iter(|| cone.hilbert_basis().unwrap()));
    g.finish();
}

fn bounded_search(c: &mut Criterion) {
    let x = examples::projective_space(2);
    let l = CartierDivisor::from_i64s(&x, &[0, 0, 1]).unwrap();
    let d = CartierDivisor::from_i64s(&x, &[1, 0, 0]).unwrap();
    let mut g = c.benchmark_group("bounded_search");
    for bound in [4i64, 6] {
        g.bench_with_input(
            BenchmarkId::new("p2_algebra", bound),
            &bound,
            |b, &bound| {
                // fresh oracle per iteration so slice caching does not hide the work
                b.iter(|| {
                    find_algebra_generators(&*divisorial_algebra(&x, &l).unwrap(), black_box(bound))
                        .unwrap()
                })
            },
        );
        g.bench_with_input(BenchmarkId::new("p2_module", bound), &bound, |b, &bound| {
            b.iter(|| {
                let r = divisorial_algebra(&x, &l).unwrap();
                let m = divisorial_module(&x, &d, &l, 0).unwrap();
                find_module_generators(&m, &*r, black_box(bound)).unwrap()
            })
        });
    }
    g.finish();
}

fn pipeline(c: &mut Criterion) {
    let x = examples::projective_space(2);
    let line = |i| CartierDivisor::prime(&x, i).unwrap();
    let dec = Decomposition::new(&x, vec![(1, line(0)), (1, line(1)), (1, line(2))]).unwrap();
    let d = line(0);
    let opts = PipelineOptions::new(3);
    let mut g = c.benchmark_group("pipeline");
    g.sample_size(10);
    g.bench_function("p2_three_lines", |b| {
        b.iter(|| theorem34_pipeline(&x, &dec, &d, 0, &opts).unwrap())
    });
    g.finish();
}

criterion_group!(
    benches,
    lattice_points,
    hilbert_basis,
    bounded_search,
    pipeline
);
criterion_main!(benches);
