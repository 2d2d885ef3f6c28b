mod common;

use std::f64::consts::PI;

use common::*;
use pwlrec_core::reconstruct::reconstruct_exact;
use pwlrec_core::{DiscreteBaseline, RealMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Truth {
    a: RealMatrix,
    b: RealMatrix,
    c: RealMatrix,
    d: RealMatrix,
}

/// Forward synthesis with the oracle exponential.
fn synthesize(t: &Truth, ts: f64) -> DiscreteBaseline {
    let a_z = real(&expm_taylor(&dense(&t.a), ts));
    let b_z = t.b.scale(ts);
    let c_z = &t.c * &a_z;
    let d_z = &t.d + &(&t.c * &t.b).scale(ts / 2.0);
    DiscreteBaseline::new(a_z, b_z, c_z, d_z, ts).unwrap()
}

fn random_truth(rng: &mut ChaCha8Rng, ts: f64, zero_d: bool) -> Truth {
    let n = rng.gen_range(2..=6);
    let p = rng.gen_range(1..=2);
    let q = rng.gen_range(1..=2);
    Truth {
        a: random_stable(rng, n, ts, 0.9 * PI / ts),
        b: random_matrix(rng, n, p, 1.0),
        c: random_matrix(rng, q, n, 1.0),
        d: if zero_d {
            RealMatrix::zeros(q, p)
        } else {
            random_matrix(rng, q, p, 1.0)
        },
    }
}

#[test]
fn full_quadruple_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let ts = 1e-3;
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let truth = random_truth(&mut rng, ts, false);
        let s = reconstruct_exact(&synthesize(&truth, ts)).unwrap();
        worst = worst
            .max(s.a_c.relative_error(&truth.a))
            .max(s.b_c.relative_error(&truth.b))
            .max(s.c_c.relative_error(&truth.c))
            .max(s.d_c.relative_error(&truth.d));
    }
    assert!(worst <= 1e-8, "{worst:e}");
}

#[test]
fn alias_term_is_isolated() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let ts = 1e-3;
    for _ in 0..100 {
        let truth = random_truth(&mut rng, ts, true);
        let s = reconstruct_exact(&synthesize(&truth, ts)).unwrap();
        let alias = (&truth.c * &truth.b).scale(ts / 2.0).frobenius_norm();
        assert!(s.d_c.frobenius_norm() <= 1e-10 * alias + 1e-14);
    }
}

#[test]
fn exp_of_generator_reproduces_transition() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let ts = 0.02;
    for _ in 0..50 {
        let truth = random_truth(&mut rng, ts, false);
        let base = synthesize(&truth, ts);
        let s = reconstruct_exact(&base).unwrap();
        let back = real(&expm_taylor(&dense(&s.a_c), ts));
        assert!(back.relative_error(&base.a_z) <= 1e-8);
    }
}

#[test]
fn input_scaling_is_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..50 {
        let ts = rng.gen_range(1e-6..1.0);
        let truth = random_truth(&mut rng, ts, false);
        let base = synthesize(&truth, ts);
        let s = reconstruct_exact(&base).unwrap();
        assert!(s.b_c.scale(ts).relative_error(&base.b_z) <= 1e-15);
    }
}

#[test]
fn resample_inverts_reconstruction() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let ts = 1e-3;
    for _ in 0..20 {
        let base = synthesize(&random_truth(&mut rng, ts, false), ts);
        let again = reconstruct_exact(&base).unwrap().resample().unwrap();
        assert!(again.a_z.relative_error(&base.a_z) <= 1e-9);
        assert!(again.c_z.relative_error(&base.c_z) <= 1e-9);
        assert!(again.d_z.relative_error(&base.d_z) <= 1e-9);
    }
}
