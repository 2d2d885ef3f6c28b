use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{mat_exp, RealMatrix};
use crate::error::{Error, Result};

/// Relative tolerance of the closed-negative-real-axis test.
pub const NEGATIVE_AXIS_RTOL: f64 = 1e-10;

// Square roots are taken until ‖M − I‖₁ drops below this.
const SQRT_TARGET: f64 = 0.25;
const MAX_SQUARE_ROOTS: usize = 64;
const QUADRATURE_NODES: usize = 16;

/// Spectrum of a square matrix (order unspecified).
pub fn eigenvalues(m: &RealMatrix) -> Result<Vec<Complex64>> {
    m.require_square("eigenvalues")?;
    let n = m.rows();
    let dm = DMatrix::from_row_slice(n, n, m.as_slice());
    Ok(dm.complex_eigenvalues().iter().copied().collect())
}

/// Real principal logarithm by inverse scaling and squaring.
///
/// Fails with `NoRealPrincipalLog` when an eigenvalue sits on the closed
/// negative real axis, judged with tolerance `1e-10 · ρ(M)`.
pub fn mat_log_principal(m: &RealMatrix) -> Result<RealMatrix> {
    m.require_square("mat_log_principal")?;
    m.inverse()?;

    let spectrum = eigenvalues(m)?;
    let radius = spectrum.iter().fold(0.0, |r: f64, l| r.max(l.norm()));
    if let Some(l) = spectrum
        .iter()
        .find(|l| l.re < 0.0 && l.im.abs() <= NEGATIVE_AXIS_RTOL * radius)
    {
        return Err(Error::NoRealPrincipalLog { re: l.re, im: l.im });
    }
    let worst = || {
        let l = spectrum
            .iter()
            .max_by(|a, b| a.arg().abs().total_cmp(&b.arg().abs()))
            .copied()
            .unwrap_or_default();
        Error::NoRealPrincipalLog { re: l.re, im: l.im }
    };

    let n = m.rows();
    let ident = RealMatrix::identity(n);
    let mut root = m.clone();
    let mut k = 0;
    while (&root - &ident).norm_1() > SQRT_TARGET {
        if k == MAX_SQUARE_ROOTS {
            return Err(worst());
        }
        root = sqrt_denman_beavers(&root).ok_or_else(worst)?;
        k += 1;
    }

    let x = &root - &ident;
    let log = log1p_gauss_legendre(&x)?.scale(2f64.powi(k as i32));

    // Near-defective spectra close to the cut can slip past the eigenvalue
    // test; the exponential must reproduce the input.
    if mat_exp(&log, 1.0)?.relative_error(m) > 1e-6 {
        return Err(worst());
    }
    Ok(log)
}

/// Principal square root via the scaled Denman–Beavers iteration.
fn sqrt_denman_beavers(a: &RealMatrix) -> Option<RealMatrix> {
    let n = a.rows() as i32;
    let mut y = a.clone();
    let mut z = RealMatrix::identity(a.rows());
    for _ in 0..100 {
        let y_inv = y.inverse().ok()?;
        let z_inv = z.inverse().ok()?;
        let change_est = (&y - &z_inv).frobenius_norm() / y.frobenius_norm();
        // Determinantal scaling only while far from convergence.
        let g = if change_est > 1e-2 {
            let d = (y.det().ok()? * z.det().ok()?).abs();
            d.powf(-1.0 / (2.0 * n as f64))
        } else {
            1.0
        };
        let y_next = (&y.scale(g) + &z_inv.scale(1.0 / g)).scale(0.5);
        let z_next = (&z.scale(g) + &y_inv.scale(1.0 / g)).scale(0.5);
        let step = (&y_next - &y).frobenius_norm();
        let size = y_next.frobenius_norm();
        y = y_next;
        z = z_next;
        if !y.is_finite() {
            return None;
        }
        if step <= 1e-15 * size {
            return Some(y);
        }
    }
    // Last iterate is accepted only if it actually squares back.
    ((&y * &y).relative_error(a) < 1e-12).then_some(y)
}

/// `log(I + X) = ∫₀¹ X (I + tX)⁻¹ dt` by Gauss–Legendre quadrature, which is
/// the diagonal Padé approximant of matching degree.
fn log1p_gauss_legendre(x: &RealMatrix) -> Result<RealMatrix> {
    let n = x.rows();
    let ident = RealMatrix::identity(n);
    let mut acc = RealMatrix::zeros(n, n);
    for (node, weight) in gauss_legendre_unit(QUADRATURE_NODES) {
        let denom = &ident + &x.scale(node);
        let term = denom.solve(x)?;
        acc = &acc + &term.scale(weight);
    }
    Ok(acc)
}

/// Nodes and weights of the `m`-point Gauss–Legendre rule on `[0, 1]`.
fn gauss_legendre_unit(m: usize) -> Vec<(f64, f64)> {
    let mf = m as f64;
    (0..m)
        .map(|i| {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (mf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(m, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(m, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            (0.5 * (1.0 - x), 0.5 * w)
        })
        .collect()
}

/// `(P_m(x), P_m'(x))` by the three-term recurrence.
fn legendre(m: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=m {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = m as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
