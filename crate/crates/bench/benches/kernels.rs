use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use pwlrec_bench::stable_matrix;
use pwlrec_core::freqsweep::bode_compare;
use pwlrec_core::pwlmap::poincare_map;
use pwlrec_core::reconstruct::reconstruct_exact;
use pwlrec_core::smallmat::{mat_exp, mat_log_principal};
use pwlrec_core::two_by_two::{exp2x2_closed, real_lift_log};
use pwlrec_core::{catalog, FrequencyGrid, SurrogateRequest};

fn smallmat(c: &mut Criterion) {
    for n in [2, 4, 8] {
        let a = stable_matrix(n);
        let phi = mat_exp(&a, 1.0).unwrap();
        c.bench_function(&format!("mat_exp {n}x{n}"), |b| {
            b.iter(|| mat_exp(black_box(&a), 1.0).unwrap())
        });
        c.bench_function(&format!("mat_log_principal {n}x{n}"), |b| {
            b.iter(|| mat_log_principal(black_box(&phi)).unwrap())
        });
    }
    let omega = catalog::sign_symmetric_exponent();
    c.bench_function("exp2x2_closed", |b| {
        b.iter(|| exp2x2_closed(black_box(&omega)).unwrap())
    });
}

fn pipeline(c: &mut Criterion) {
    let boost = catalog::ideal_boost().unwrap();
    let base = boost.baseline().unwrap();
    c.bench_function("poincare_map boost", |b| {
        b.iter(|| poincare_map(black_box(boost.cycle())).unwrap())
    });
    c.bench_function("reconstruct_exact boost", |b| {
        b.iter(|| reconstruct_exact(black_box(&base)).unwrap())
    });
    let sign = catalog::sign_symmetric().unwrap();
    let phi = sign.map().unwrap().phi;
    c.bench_function("real_lift_log", |b| {
        b.iter(|| real_lift_log(black_box(&phi), 1e-3).unwrap())
    });
    let s = boost.surrogate_from(&base, SurrogateRequest::Auto).unwrap();
    let grid = FrequencyGrid::default_for(base.period).unwrap();
    c.bench_function("bode_compare boost 200 points", |b| {
        b.iter(|| bode_compare(black_box(&base), std::slice::from_ref(&s), &grid).unwrap())
    });
}

criterion_group!(benches, smallmat, pipeline);
criterion_main!(benches);
