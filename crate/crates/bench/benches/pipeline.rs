use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use milnor_core::critical::certify_points;
use milnor_core::germ::GermDescriptor;
use milnor_core::morsify::build_family;
use milnor_core::poly::interval::cube;
use milnor_core::poly::rational::{frac, int};
use milnor_core::verify::{default_eta, homology, mesh_fibre, FibreSpec, Side};

fn descriptor(code: &str) -> GermDescriptor {
    code.parse().expect("catalog code")
}

fn spec(code: &str, side: Side, resolution: usize) -> FibreSpec {
    let d = descriptor(code);
    let epsilon = frac(1, 2);
    FibreSpec {
        polynomial: d.build_germ().unwrap(),
        side,
        eta: default_eta(&epsilon, d.degree()),
        epsilon,
        resolution,
    }
}

fn solver(c: &mut Criterion) {
    let mut g = c.benchmark_group("certify_points");
    for code in ["A5+s0n1", "D6-s0n1", "E8s0n1"] {
        let fam = build_family(&descriptor(code)).unwrap();
        let f = fam.family_at(&fam.representative_t()).unwrap();
        let bx = cube(2, &int(2));
        g.bench_function(code, |b| b.iter(|| certify_points(black_box(&f), &bx).unwrap()));
    }
    g.finish();
}

fn mesher(c: &mut Criterion) {
    let mut g = c.benchmark_group("mesh_fibre");
    g.sample_size(10);
    for (code, side, n) in [("A5+s0n1", Side::Plus, 256), ("E7s0n1", Side::Minus, 256), ("A3+s0n2", Side::Plus, 32)] {
        let s = spec(code, side, n);
        g.bench_function(format!("{code}-{side}-{n}"), |b| b.iter(|| mesh_fibre(black_box(&s)).unwrap()));
    }
    g.finish();
}

fn homology_bench(c: &mut Criterion) {
    let mut g = c.benchmark_group("homology");
    g.sample_size(10);
    for (code, side, n) in [("D5+s0n1", Side::Plus, 256), ("A3+s0n2", Side::Plus, 32)] {
        let mesh = mesh_fibre(&spec(code, side, n)).unwrap();
        g.bench_function(format!("{code}-{side}-{n}"), |b| b.iter(|| homology(black_box(&mesh.complex))));
    }
    g.finish();
}

criterion_group!(benches, solver, mesher, homology_bench);
criterion_main!(benches);
