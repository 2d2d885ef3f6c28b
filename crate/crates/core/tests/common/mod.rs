//! Independent reference computations. Nothing here calls the library's
//! exponential, logarithm or solvers; matrices are plain `Vec<Vec<f64>>`.

#![allow(dead_code)]

use num_complex::Complex64;
use pwlrec_core::RealMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Dense = Vec<Vec<f64>>;

pub fn dense(m: &RealMatrix) -> Dense {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

pub fn real(d: &Dense) -> RealMatrix {
    RealMatrix::from_rows(d).unwrap()
}

pub fn eye(n: usize) -> Dense {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

pub fn matmul(a: &Dense, b: &Dense) -> Dense {
    let (n, k, m) = (a.len(), b.len(), b[0].len());
    let mut out = vec![vec![0.0; m]; n];
    for i in 0..n {
        for l in 0..k {
            for j in 0..m {
                out[i][j] += a[i][l] * b[l][j];
            }
        }
    }
    out
}

fn axpy(y: &Dense, a: f64, x: &Dense) -> Dense {
    y.iter()
        .zip(x)
        .map(|(ry, rx)| ry.iter().zip(rx).map(|(p, q)| p + a * q).collect())
        .collect()
}

/// Taylor series after scaling by a power of two, then repeated squaring.
pub fn expm_taylor(a: &Dense, t: f64) -> Dense {
    let n = a.len();
    let norm: f64 = a.iter().flatten().map(|v| (v * t).abs()).sum();
    let mut s = 0;
    while norm / 2f64.powi(s) > 0.25 {
        s += 1;
    }
    let h = t / 2f64.powi(s);
    let mut term = eye(n);
    let mut sum = eye(n);
    for k in 1..40 {
        term = matmul(&term, a)
            .iter()
            .map(|r| r.iter().map(|v| v * h / k as f64).collect())
            .collect();
        sum = axpy(&sum, 1.0, &term);
    }
    for _ in 0..s {
        sum = matmul(&sum, &sum);
    }
    sum
}

/// Classical RK4 for `Ẋ = A X, X(0) = I` and `ġ = A g + B, g(0) = 0`,
/// returning `(Φ, Γ)` over `[0, t]`.
pub fn rk4_flow(a: &Dense, b: &Dense, t: f64, steps: usize) -> (Dense, Dense) {
    let n = a.len();
    let p = b[0].len();
    // Augmented state [X | g], n × (n + p), with forcing [0 | B].
    let mut y: Dense = (0..n)
        .map(|i| {
            let mut r = eye(n)[i].clone();
            r.extend(std::iter::repeat_n(0.0, p));
            r
        })
        .collect();
    let forcing: Dense = (0..n)
        .map(|i| {
            let mut r = vec![0.0; n];
            r.extend_from_slice(&b[i]);
            r
        })
        .collect();
    let f = |y: &Dense| axpy(&matmul(a, y), 1.0, &forcing);
    let h = t / steps as f64;
    for _ in 0..steps {
        let k1 = f(&y);
        let k2 = f(&axpy(&y, h / 2.0, &k1));
        let k3 = f(&axpy(&y, h / 2.0, &k2));
        let k4 = f(&axpy(&y, h, &k3));
        for i in 0..n {
            for j in 0..n + p {
                y[i][j] += h / 6.0 * (k1[i][j] + 2.0 * k2[i][j] + 2.0 * k3[i][j] + k4[i][j]);
            }
        }
    }
    let phi = y.iter().map(|r| r[..n].to_vec()).collect();
    let gamma = y.iter().map(|r| r[n..].to_vec()).collect();
    (phi, gamma)
}

/// Composite Simpson quadrature of `e^{Aτ}B` over `[0, t]`.
pub fn simpson_drive(a: &Dense, b: &Dense, t: f64, panels: usize) -> Dense {
    let panels = panels + panels % 2;
    let h = t / panels as f64;
    let mut acc = vec![vec![0.0; b[0].len()]; a.len()];
    for k in 0..=panels {
        let w = if k == 0 || k == panels {
            1.0
        } else if k % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let val = matmul(&expm_taylor(a, k as f64 * h), b);
        acc = axpy(&acc, w * h / 3.0, &val);
    }
    acc
}

/// Composed two-phase map `x_{k+1} = Φ_2(Φ_1 x + Γ_1 u) + Γ_2 u`, built from
/// RK4 flows.
pub fn two_phase_step(
    phases: [(&Dense, &Dense, f64); 2],
    x: &[f64],
    u: &[f64],
    steps: usize,
) -> Vec<f64> {
    let mut state = x.to_vec();
    for (a, b, t) in phases {
        let (phi, gamma) = rk4_flow(a, b, t, steps);
        state = (0..state.len())
            .map(|i| {
                let free: f64 = (0..state.len()).map(|j| phi[i][j] * state[j]).sum();
                let forced: f64 = (0..u.len()).map(|j| gamma[i][j] * u[j]).sum();
                free + forced
            })
            .collect();
    }
    state
}

/// `G(e^{jωTs}) ≈ D_z + Σ_{k≥1} C_z A_z^{k−1} B_z e^{−jωkTs}` summed over
/// `samples` impulse-response samples (SISO).
pub fn impulse_response_dft(
    a_z: &Dense,
    b_z: &Dense,
    c_z: &Dense,
    d_z: f64,
    omega_ts: f64,
    samples: usize,
) -> Complex64 {
    let mut acc = Complex64::new(d_z, 0.0);
    let mut v: Vec<f64> = b_z.iter().map(|r| r[0]).collect();
    for k in 1..samples {
        let h: f64 = c_z[0].iter().zip(&v).map(|(c, x)| c * x).sum();
        acc += h * Complex64::from_polar(1.0, -omega_ts * k as f64);
        v = (0..v.len())
            .map(|i| a_z[i].iter().zip(&v).map(|(a, x)| a * x).sum())
            .collect();
    }
    acc
}

pub fn rel_dense(x: &Dense, reference: &Dense) -> f64 {
    let diff: f64 = x
        .iter()
        .flatten()
        .zip(reference.iter().flatten())
        .map(|(p, q)| (p - q).powi(2))
        .sum::<f64>()
        .sqrt();
    let norm: f64 = reference
        .iter()
        .flatten()
        .map(|v| v * v)
        .sum::<f64>()
        .sqrt();
    diff / norm
}

pub fn rel_vec(x: &[f64], reference: &[f64]) -> f64 {
    let diff: f64 = x
        .iter()
        .zip(reference)
        .map(|(p, q)| (p - q).powi(2))
        .sum::<f64>()
        .sqrt();
    let norm: f64 = reference.iter().map(|v| v * v).sum::<f64>().sqrt();
    diff / norm
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: f64) -> RealMatrix {
    let data = (0..rows * cols)
        .map(|_| rng.gen_range(-bound..bound))
        .collect();
    RealMatrix::new(rows, cols, data).unwrap()
}

/// Random real `A = V·Λ·V⁻¹` with prescribed stable spectrum: complex pairs
/// `re ± j·im` with `re ∈ [−2, −0.1]/ts`, `im < im_max`, plus real poles.
/// `V` is a perturbed identity so the eigenbasis stays well conditioned.
pub fn random_stable(rng: &mut ChaCha8Rng, n: usize, ts: f64, im_max: f64) -> RealMatrix {
    let mut lam = RealMatrix::zeros(n, n);
    let mut k = 0;
    while k < n {
        let re = -rng.gen_range(0.1..2.0) / ts;
        if k + 1 < n && rng.gen_bool(0.5) {
            let im = rng.gen_range(0.0..im_max);
            lam[(k, k)] = re;
            lam[(k + 1, k + 1)] = re;
            lam[(k, k + 1)] = im;
            lam[(k + 1, k)] = -im;
            k += 2;
        } else {
            lam[(k, k)] = re;
            k += 1;
        }
    }
    let v = &RealMatrix::identity(n) + &random_matrix(rng, n, n, 0.3);
    let v_inv = real(&gauss_jordan_inverse(&dense(&v)));
    &(&v * &lam) * &v_inv
}

pub fn gauss_jordan_inverse(a: &Dense) -> Dense {
    let n = a.len();
    let mut m: Dense = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut r = r.clone();
            r.extend(eye(n)[i].iter());
            r
        })
        .collect();
    for k in 0..n {
        let piv = (k..n)
            .max_by(|&i, &j| m[i][k].abs().total_cmp(&m[j][k].abs()))
            .unwrap();
        m.swap(k, piv);
        let p = m[k][k];
        for v in m[k].iter_mut() {
            *v /= p;
        }
        for i in 0..n {
            if i != k {
                let f = m[i][k];
                let row_k = m[k].clone();
                for (v, rk) in m[i].iter_mut().zip(row_k) {
                    *v -= f * rk;
                }
            }
        }
    }
    m.iter().map(|r| r[n..].to_vec()).collect()
}
