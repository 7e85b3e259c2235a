use std::f64::consts::PI;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use geophase::frames::{BlochFamily, ClusterSelector, ParameterPath, TripodFamily};
use geophase::gates::{dark_frame, tripod_hamiltonian, TripodParams};
use geophase::holonomy::{wilson_loop, WilsonOptions};
use geophase::numerics::{c, eigh, unitary_distance, unitary_exp, CMatrix, PhaseMode};
use geophase::oracle::{extract_holonomy, OracleOptions, Schedule};

fn eigensolver(cr: &mut Criterion) {
    let h = tripod_hamiltonian(&TripodParams::new(1.0, 1.2, 0.4).unwrap());
    cr.bench_function("eigh_tripod_4x4", |b| b.iter(|| eigh(black_box(&h)).unwrap()));
}

fn wilson(cr: &mut Criterion) {
    let theta = 0.125f64.acos();
    let fam = TripodFamily::new(1.0);
    let path = ParameterPath::azimuthal_loop(theta);
    let sel = ClusterSelector::new(0.0, 2);
    let mut group = cr.benchmark_group("wilson_loop_tripod");
    for m in [500, 4000] {
        let opts = WilsonOptions::new(m).with_gauge_reference(dark_frame(theta, 0.0));
        group.bench_with_input(BenchmarkId::from_parameter(m), &opts, |b, opts| {
            b.iter(|| wilson_loop(&fam, &path, sel, opts).unwrap())
        });
    }
    group.finish();
}

fn oracle(cr: &mut Criterion) {
    let fam = BlochFamily::new(1.0);
    let path = ParameterPath::azimuthal_loop(PI / 3.0);
    // 10⁴ steps, so the per-step cost is the reported time divided by 10⁴.
    let schedule = Schedule::new(path, 100.0).unwrap().with_steps(10_000).unwrap();
    let opts = OracleOptions::default().with_leakage_budget(1.0);
    cr.bench_function("oracle_bloch_10k_steps", |b| {
        b.iter(|| extract_holonomy(&fam, &schedule, ClusterSelector::level(0.5), &opts).unwrap())
    });
}

fn distance(cr: &mut Criterion) {
    let gen = |s: f64| {
        let m = CMatrix::from_fn(8, 8, |i, j| {
            c((s * (i * 8 + j) as f64).sin(), (s * (i + 3 * j) as f64).cos())
        });
        unitary_exp(&((&m - m.adjoint()) * c(0.5, 0.0))).unwrap()
    };
    let (u, v) = (gen(0.7), gen(1.3));
    cr.bench_function("unitary_distance_8x8", |b| {
        b.iter(|| unitary_distance(black_box(&u), black_box(&v), PhaseMode::UpToGlobalPhase).unwrap())
    });
}

criterion_group!(benches, eigensolver, wilson, oracle, distance);
criterion_main!(benches);
