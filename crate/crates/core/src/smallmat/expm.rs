use super::RealMatrix;
use crate::error::{Error, Result};

// Padé(13/13) numerator coefficients of the exponential.
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

// 1-norm bound under which the degree-13 approximant is accurate to unit
// roundoff without scaling.
const THETA_13: f64 = 5.371920351148152;

/// `e^{A t}` by scaling and squaring around a fixed Padé(13) core.
pub fn mat_exp(a: &RealMatrix, t: f64) -> Result<RealMatrix> {
    a.require_square("mat_exp")?;
    if !t.is_finite() {
        return Err(Error::NonFinite);
    }
    let at = a.scale(t);
    let norm = at.norm_1();
    let squarings = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil() as i32
    } else {
        0
    };
    let scaled = at.scale(2f64.powi(-squarings));
    let mut e = pade13(&scaled)?;
    for _ in 0..squarings {
        e = &e * &e;
    }
    if !e.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(e)
}

fn pade13(a: &RealMatrix) -> Result<RealMatrix> {
    let n = a.rows();
    let b = &PADE13;
    let ident = RealMatrix::identity(n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;

    let lincomb = |c6: f64, c4: f64, c2: f64, c0: f64| {
        let mut m = a6.scale(c6);
        m = &m + &a4.scale(c4);
        m = &m + &a2.scale(c2);
        &m + &ident.scale(c0)
    };

    let inner_u = &a6 * &(&(&a6.scale(b[13]) + &a4.scale(b[11])) + &a2.scale(b[9]));
    let u = a * &(&inner_u + &lincomb(b[7], b[5], b[3], b[1]));
    let inner_v = &a6 * &(&(&a6.scale(b[12]) + &a4.scale(b[10])) + &a2.scale(b[8]));
    let v = &inner_v + &lincomb(b[6], b[4], b[2], b[0]);

    let denom = &v - &u;
    let numer = &v + &u;
    denom.solve(&numer)
}

/// `∫₀^T e^{Aτ} dτ · B`, read off the top-right block of the exponential of
/// the augmented generator `[[A, B], [0, 0]]`. Valid for singular `A`.
pub fn drive_integral(a: &RealMatrix, b: &RealMatrix, t: f64) -> Result<RealMatrix> {
    a.require_square("drive_integral")?;
    if b.rows() != a.rows() {
        return Err(Error::dim(format!(
            "drive matrix has {} rows, state dimension is {}",
            b.rows(),
            a.rows()
        )));
    }
    if !t.is_finite() || t < 0.0 {
        return Err(Error::Domain(format!(
            "duration must be finite and >= 0, got {t}"
        )));
    }
    let n = a.rows();
    let p = b.cols();
    let mut aug = RealMatrix::zeros(n + p, n + p);
    aug.set_block(0, 0, a);
    aug.set_block(0, n, b);
    let e = mat_exp(&aug, t)?;
    Ok(e.block(0, n, n, p))
}
