//! Complex transfer-matrix values `C·(σI − A)⁻¹·B + D`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::smallmat::RealMatrix;

/// Pivot magnitude (relative to `|σ| + max|a_ij|`) below which `σI − A`
/// counts as singular.
pub const POLE_RTOL: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq)]
pub struct TransferMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl TransferMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn distance(&self, other: &TransferMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// Evaluates `C·(σI − A)⁻¹·B + D`.
pub(crate) fn evaluate(
    a: &RealMatrix,
    b: &RealMatrix,
    c: &RealMatrix,
    d: &RealMatrix,
    sigma: Complex64,
) -> Result<TransferMatrix> {
    let n = a.rows();
    if !a.is_square() || b.rows() != n || c.cols() != n || d.shape() != (c.rows(), b.cols()) {
        return Err(Error::dim("inconsistent state-space quadruple"));
    }
    let p = b.cols();
    let q = c.rows();

    // Gaussian elimination on [σI − A | B].
    let mut m: Vec<Complex64> = (0..n * n)
        .map(|k| {
            let (i, j) = (k / n, k % n);
            let diag = if i == j {
                sigma
            } else {
                Complex64::new(0.0, 0.0)
            };
            diag - a[(i, j)]
        })
        .collect();
    let mut x: Vec<Complex64> = b
        .as_slice()
        .iter()
        .map(|v| Complex64::new(*v, 0.0))
        .collect();
    let scale = sigma.norm() + a.max_abs();
    for k in 0..n {
        let piv = (k..n)
            .max_by(|&i, &j| m[i * n + k].norm().total_cmp(&m[j * n + k].norm()))
            .unwrap();
        if m[piv * n + k].norm() <= POLE_RTOL * scale {
            return Err(Error::PoleHit);
        }
        if piv != k {
            for j in 0..n {
                m.swap(k * n + j, piv * n + j);
            }
            for j in 0..p {
                x.swap(k * p + j, piv * p + j);
            }
        }
        let pivot = m[k * n + k];
        for i in k + 1..n {
            let f = m[i * n + k] / pivot;
            for j in k..n {
                let v = m[k * n + j];
                m[i * n + j] -= f * v;
            }
            for j in 0..p {
                let v = x[k * p + j];
                x[i * p + j] -= f * v;
            }
        }
    }
    for k in (0..n).rev() {
        for j in 0..p {
            let mut v = x[k * p + j];
            for i in k + 1..n {
                v -= m[k * n + i] * x[i * p + j];
            }
            x[k * p + j] = v / m[k * n + k];
        }
    }

    let mut data = Vec::with_capacity(q * p);
    for i in 0..q {
        for j in 0..p {
            let mut acc = Complex64::new(d[(i, j)], 0.0);
            for k in 0..n {
                acc += c[(i, k)] * x[k * p + j];
            }
            data.push(acc);
        }
    }
    Ok(TransferMatrix {
        rows: q,
        cols: p,
        data,
    })
}
