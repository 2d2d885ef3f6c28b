//! Closed-form spectral shortcuts for 2×2 maps `Φ = D_r·e^Ω`,
//! `D_r = diag(−1, 1)`, and the three-state real lift that gives such maps a
//! real logarithm.
//!
//! Nothing in here calls an eigensolver or the generic logarithm: only
//! traces, determinants, 2×2 entry arithmetic and scalar transcendental
//! functions.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::smallmat::RealMatrix;

/// Below this `|Δ²|` the `cosh`/`sinh(Δ)/Δ` pair is evaluated by series.
pub const DELTA_SERIES_THRESHOLD: f64 = 1e-6;

/// Eigendirections closer than this (as `|sin θ|`) make the lift
/// ill-conditioned.
pub const MIN_EIGVEC_SINE: f64 = 1e-8;

pub fn sign_matrix() -> RealMatrix {
    RealMatrix::diag(&[-1.0, 1.0])
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignSymmetricMap {
    omega: RealMatrix,
    period: f64,
}

impl SignSymmetricMap {
    pub fn new(omega: RealMatrix, period: f64) -> Result<Self> {
        check_2x2(&omega)?;
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::Domain(format!(
                "period must be positive, got {period}"
            )));
        }
        Ok(Self { omega, period })
    }

    pub fn omega(&self) -> &RealMatrix {
        &self.omega
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// `D_r·e^Ω` assembled from the closed-form exponential.
    pub fn phi(&self) -> RealMatrix {
        let mut e = exp2x2_closed(&self.omega).expect("validated 2x2");
        e[(0, 0)] = -e[(0, 0)];
        e[(0, 1)] = -e[(0, 1)];
        e
    }
}

/// `(cosh Δ, sinh(Δ)/Δ)` as functions of `Δ²`, continuous through zero and
/// switching to `(cos, sin/·)` for negative `Δ²`.
fn cosh_sinhc(delta_sq: f64) -> (f64, f64) {
    if delta_sq.abs() < DELTA_SERIES_THRESHOLD {
        let d2 = delta_sq;
        let d4 = d2 * d2;
        let d6 = d4 * d2;
        (
            1.0 + d2 / 2.0 + d4 / 24.0 + d6 / 720.0,
            1.0 + d2 / 6.0 + d4 / 120.0 + d6 / 5040.0,
        )
    } else if delta_sq > 0.0 {
        let d = delta_sq.sqrt();
        (d.cosh(), d.sinh() / d)
    } else {
        let d = (-delta_sq).sqrt();
        (d.cos(), d.sin() / d)
    }
}

/// `μ = ½ tr Ω` and `Δ² = μ² − det Ω`.
fn invariants(omega: &RealMatrix) -> (f64, f64) {
    let (a, b, c, d) = (omega[(0, 0)], omega[(0, 1)], omega[(1, 0)], omega[(1, 1)]);
    let mu = 0.5 * (a + d);
    // μ² − det = ((a − d)/2)² + bc, free of the cancellation in the direct form.
    let half_diff = 0.5 * (a - d);
    (mu, half_diff * half_diff + b * c)
}

/// `e^Ω = e^μ (cosh Δ·I + (sinh Δ/Δ)(Ω − μI))`.
pub fn exp2x2_closed(omega: &RealMatrix) -> Result<RealMatrix> {
    check_2x2(omega)?;
    let (mu, delta_sq) = invariants(omega);
    let (ch, shc) = cosh_sinhc(delta_sq);
    let g = mu.exp();
    let mut out = RealMatrix::zeros(2, 2);
    out[(0, 0)] = g * (ch + shc * (omega[(0, 0)] - mu));
    out[(0, 1)] = g * shc * omega[(0, 1)];
    out[(1, 0)] = g * shc * omega[(1, 0)];
    out[(1, 1)] = g * (ch + shc * (omega[(1, 1)] - mu));
    Ok(out)
}

/// `det(D_r e^Ω) = −e^{tr Ω}`.
pub fn sign_map_det(map: &SignSymmetricMap) -> f64 {
    let tr = map.omega[(0, 0)] + map.omega[(1, 1)];
    -tr.exp()
}

/// `tr(D_r e^Ω) = e^μ (sinh Δ/Δ) tr(D_r Ω)`.
pub fn sign_map_trace(map: &SignSymmetricMap) -> f64 {
    let (mu, delta_sq) = invariants(&map.omega);
    let (_, shc) = cosh_sinhc(delta_sq);
    let tr_dr_omega = map.omega[(1, 1)] - map.omega[(0, 0)];
    mu.exp() * shc * tr_dr_omega
}

/// Roots of `λ² − tr·λ + det`, larger first. For `det < 0` the first is
/// positive and the second negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenPair {
    pub lambda_plus: f64,
    pub lambda_minus: f64,
}

pub fn eig_from_invariants(tr: f64, det: f64) -> Result<EigenPair> {
    let disc = tr * tr - 4.0 * det;
    if disc < 0.0 {
        return Err(Error::ComplexEigenvalues { discriminant: disc });
    }
    // Larger-magnitude root first, the other from the product.
    let q = 0.5 * (tr + tr.signum() * disc.sqrt());
    let q = if tr == 0.0 { 0.5 * disc.sqrt() } else { q };
    let (r1, r2) = if q == 0.0 { (0.0, 0.0) } else { (q, det / q) };
    Ok(EigenPair {
        lambda_plus: r1.max(r2),
        lambda_minus: r1.min(r2),
    })
}

/// Output of [`real_lift_log`].
#[derive(Debug, Clone, PartialEq)]
pub struct RealLift {
    /// Real 3×3 generator with `e^{A_c Ts} = S_ext`.
    pub a_c: RealMatrix,
    /// `blkdiag(Φ, λ₋)`.
    pub s_ext: RealMatrix,
    /// 3×2, appends a zero coordinate.
    pub embed_state: RealMatrix,
    /// 2×3, drops the lifted coordinate.
    pub project_state: RealMatrix,
    pub eigen: EigenPair,
}

/// Real logarithm of `blkdiag(Φ, λ₋)` for a 2×2 `Φ` with eigenvalues
/// `λ₊ > 0 > λ₋`.
///
/// In the basis `(v₊, v₋, e₃)` the generator is
/// `ln(λ₊)/Ts ⊕ (1/Ts)[[ln|λ₋|, −π], [π, ln|λ₋|]]`; the rotation block
/// exponentiates to `λ₋·I` on the plane spanned by `v₋` and the lifted
/// coordinate.
pub fn real_lift_log(phi: &RealMatrix, ts: f64) -> Result<RealLift> {
    check_2x2(phi)?;
    if !(ts.is_finite() && ts > 0.0) {
        return Err(Error::Domain(format!("period must be positive, got {ts}")));
    }
    let (a, b, c, d) = (phi[(0, 0)], phi[(0, 1)], phi[(1, 0)], phi[(1, 1)]);
    let eigen = eig_from_invariants(a + d, a * d - b * c)
        .map_err(|_| Error::NotLiftable("complex spectrum".into()))?;
    let tol = 1e-12 * phi.frobenius_norm();
    let EigenPair {
        lambda_plus: lp,
        lambda_minus: lm,
    } = eigen;
    if !(lp > tol && lm < -tol) {
        return Err(Error::NotLiftable(format!(
            "needs one positive and one negative eigenvalue, got {lp:e} and {lm:e}"
        )));
    }

    // By Cayley–Hamilton the columns of (Φ − λ∓I) lie in the λ± eigenspace.
    let eigvec = |other: f64| -> [f64; 2] {
        let c0 = [a - other, c];
        let c1 = [b, d - other];
        let n0 = c0[0].hypot(c0[1]);
        let n1 = c1[0].hypot(c1[1]);
        let (v, n) = if n0 >= n1 { (c0, n0) } else { (c1, n1) };
        // Fix the sign so the larger component is positive.
        let n = if v[0].abs() >= v[1].abs() {
            n.copysign(v[0])
        } else {
            n.copysign(v[1])
        };
        [v[0] / n, v[1] / n]
    };
    let vp = eigvec(lm);
    let vm = eigvec(lp);
    let sine = vp[0] * vm[1] - vp[1] * vm[0];
    if sine.abs() < MIN_EIGVEC_SINE {
        return Err(Error::NotLiftable(format!(
            "eigendirections nearly parallel (|sin| = {:.3e})",
            sine.abs()
        )));
    }

    let mut w = RealMatrix::identity(3);
    w[(0, 0)] = vp[0];
    w[(1, 0)] = vp[1];
    w[(0, 1)] = vm[0];
    w[(1, 1)] = vm[1];
    let mut w_inv = RealMatrix::identity(3);
    w_inv[(0, 0)] = vm[1] / sine;
    w_inv[(0, 1)] = -vm[0] / sine;
    w_inv[(1, 0)] = -vp[1] / sine;
    w_inv[(1, 1)] = vp[0] / sine;

    let rho = lm.abs().ln();
    let mut g = RealMatrix::zeros(3, 3);
    g[(0, 0)] = lp.ln();
    g[(1, 1)] = rho;
    g[(2, 2)] = rho;
    g[(1, 2)] = -PI;
    g[(2, 1)] = PI;
    let a_c = (&(&w * &g) * &w_inv).scale(1.0 / ts);

    let mut embed_state = RealMatrix::zeros(3, 2);
    embed_state[(0, 0)] = 1.0;
    embed_state[(1, 1)] = 1.0;
    let project_state = embed_state.transpose();

    Ok(RealLift {
        a_c,
        s_ext: RealMatrix::blkdiag(phi, &RealMatrix::diag(&[lm])),
        embed_state,
        project_state,
        eigen,
    })
}

fn check_2x2(m: &RealMatrix) -> Result<()> {
    if m.shape() != (2, 2) {
        return Err(Error::dim(format!(
            "expected a 2x2 matrix, got {:?}",
            m.shape()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smallmat::{eigenvalues, mat_exp};
    use std::f64::consts::E;

    fn m(rows: &[&[f64]]) -> RealMatrix {
        RealMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn closed_exp_branches() {
        assert_eq!(
            exp2x2_closed(&RealMatrix::zeros(2, 2)).unwrap(),
            RealMatrix::identity(2)
        );
        let e = exp2x2_closed(&RealMatrix::diag(&[1.0, 3.0])).unwrap();
        assert!(e.relative_error(&RealMatrix::diag(&[E, E.powi(3)])) < 1e-15);
        let th = 0.9;
        let r = exp2x2_closed(&m(&[&[0.0, -th], &[th, 0.0]])).unwrap();
        let expect = m(&[&[th.cos(), -th.sin()], &[th.sin(), th.cos()]]);
        assert!(r.relative_error(&expect) < 1e-15);
    }

    #[test]
    fn closed_exp_continuous_across_zero_discriminant() {
        // Δ² = bc for a traceless matrix with equal diagonal.
        let at = |delta_sq: f64| exp2x2_closed(&m(&[&[0.3, 1.0], &[delta_sq, 0.3]])).unwrap();
        let (neg, zero, pos) = (at(-1e-16), at(0.0), at(1e-16));
        assert!((&neg - &zero).max_abs() <= 1e-10);
        assert!((&pos - &zero).max_abs() <= 1e-10);
        assert!((&pos - &neg).max_abs() <= 1e-10);
        let nilpotent = mat_exp(&m(&[&[0.3, 1.0], &[0.0, 0.3]]), 1.0).unwrap();
        assert!(zero.relative_error(&nilpotent) < 1e-14);
    }

    #[test]
    fn det_and_trace_examples() {
        let zero = SignSymmetricMap::new(RealMatrix::zeros(2, 2), 1.0).unwrap();
        assert_eq!(sign_map_det(&zero), -1.0);
        let unit = SignSymmetricMap::new(RealMatrix::identity(2), 1.0).unwrap();
        assert!((sign_map_det(&unit) + E * E).abs() < 1e-14);

        let scalar = SignSymmetricMap::new(RealMatrix::diag(&[0.7, 0.7]), 1.0).unwrap();
        assert_eq!(sign_map_trace(&scalar), 0.0);

        let a = 1.3;
        let hyp = SignSymmetricMap::new(RealMatrix::diag(&[-a, a]), 1.0).unwrap();
        assert!((sign_map_trace(&hyp) - 2.0 * a.sinh()).abs() < 1e-14);
    }

    #[test]
    fn eigenpairs_from_invariants() {
        let p = eig_from_invariants(0.0, -1.0).unwrap();
        assert_eq!((p.lambda_plus, p.lambda_minus), (1.0, -1.0));
        let p = eig_from_invariants(1.0, -6.0).unwrap();
        assert_eq!((p.lambda_plus, p.lambda_minus), (3.0, -2.0));
        assert!(matches!(
            eig_from_invariants(0.0, 1.0),
            Err(Error::ComplexEigenvalues { .. })
        ));
    }

    #[test]
    fn lift_of_diagonal_map() {
        let lift = real_lift_log(&RealMatrix::diag(&[2.0, -0.5]), 1.0).unwrap();
        let s = mat_exp(&lift.a_c, 1.0).unwrap();
        assert!(s.relative_error(&RealMatrix::diag(&[2.0, -0.5, -0.5])) < 1e-12);
        let mut spec = eigenvalues(&lift.a_c).unwrap();
        spec.sort_by(|x, y| x.im.total_cmp(&y.im));
        assert!((spec[0].re - 0.5f64.ln()).abs() < 1e-12 && (spec[0].im + PI).abs() < 1e-12);
        assert!((spec[1].re - 2f64.ln()).abs() < 1e-12 && spec[1].im.abs() < 1e-12);
        assert!((spec[2].re - 0.5f64.ln()).abs() < 1e-12 && (spec[2].im - PI).abs() < 1e-12);
    }

    #[test]
    fn lift_of_pure_reflection() {
        let lift = real_lift_log(&RealMatrix::diag(&[1.0, -1.0]), 1.0).unwrap();
        let expect = m(&[&[0.0, 0.0, 0.0], &[0.0, 0.0, -PI], &[0.0, PI, 0.0]]);
        assert!((&lift.a_c - &expect).max_abs() < 1e-15);
        let s = mat_exp(&lift.a_c, 1.0).unwrap();
        assert!((&s - &RealMatrix::diag(&[1.0, -1.0, -1.0])).max_abs() < 1e-13);
    }

    #[test]
    fn lift_rejects_wrong_spectra() {
        assert!(matches!(
            real_lift_log(&RealMatrix::diag(&[2.0, 0.5]), 1.0),
            Err(Error::NotLiftable(_))
        ));
        let rot = m(&[&[0.0, -1.0], &[1.0, 0.0]]);
        assert!(matches!(
            real_lift_log(&rot, 1.0),
            Err(Error::NotLiftable(_))
        ));
        let nearly_parallel = m(&[&[1.0, 1e9], &[0.0, -1.0]]);
        assert!(matches!(
            real_lift_log(&nearly_parallel, 1.0),
            Err(Error::NotLiftable(_))
        ));
    }
}
