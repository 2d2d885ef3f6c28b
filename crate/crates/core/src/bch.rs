//! Truncated Baker–Campbell–Hausdorff series for `Log(e^Y e^X)` and the
//! state-space-averaged model as its leading term.
//!
//! Convention: `X` acts first, so for a two-phase cycle `X = A_1 T_1` and
//! `Y = A_2 T_2`. Norms are Frobenius throughout.

use crate::error::{Error, Result};
use crate::pwlmap::injection_formula;
use crate::pwlmap::SubintervalModel;
use crate::smallmat::{commutator, RealMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BchOrder {
    /// `X + Y`
    First,
    /// adds `½[Y,X]`
    Second,
    /// adds `(1/12)([Y,[Y,X]] + [X,[X,Y]])`; there is no quartic term.
    Fourth,
}

impl BchOrder {
    pub fn value(self) -> u8 {
        match self {
            BchOrder::First => 1,
            BchOrder::Second => 2,
            BchOrder::Fourth => 4,
        }
    }
}

impl TryFrom<u8> for BchOrder {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            1 => Ok(BchOrder::First),
            2 => Ok(BchOrder::Second),
            4 => Ok(BchOrder::Fourth),
            other => Err(Error::Domain(format!(
                "BCH order must be 1, 2 or 4, got {other}"
            ))),
        }
    }
}

pub fn bch_log_pair(x: &RealMatrix, y: &RealMatrix, order: BchOrder) -> Result<RealMatrix> {
    let yx = commutator(y, x)?;
    let mut omega = x + y;
    if order == BchOrder::First {
        return Ok(omega);
    }
    omega = &omega + &yx.scale(0.5);
    if order == BchOrder::Second {
        return Ok(omega);
    }
    let y_yx = commutator(y, &yx)?;
    let x_xy = commutator(x, &(-&yx))?;
    Ok(&omega + &(&y_yx + &x_xy).scale(1.0 / 12.0))
}

/// `(1/Ts)·bch_log_pair(A_1 T_1, A_2 T_2, order)` with `Ts = T_1 + T_2`.
pub fn ac_from_bch(
    a1: &RealMatrix,
    t1: f64,
    a2: &RealMatrix,
    t2: f64,
    order: BchOrder,
) -> Result<RealMatrix> {
    if !(t1 > 0.0 && t2 > 0.0) {
        return Err(Error::Domain(format!(
            "durations must be positive, got {t1}, {t2}"
        )));
    }
    Ok(bch_log_pair(&a1.scale(t1), &a2.scale(t2), order)?.scale(1.0 / (t1 + t2)))
}

/// `(1 − D)·A_1 + D·A_2`.
pub fn ssa_average(a1: &RealMatrix, a2: &RealMatrix, duty: f64) -> Result<RealMatrix> {
    if !(0.0..=1.0).contains(&duty) {
        return Err(Error::Domain(format!(
            "duty must lie in [0, 1], got {duty}"
        )));
    }
    a1.scale(1.0 - duty).try_add(&a2.scale(duty))
}

/// Equilibrium of the averaged model, `X_avg = −A_avg⁻¹ B_avg u`.
pub fn averaged_equilibrium(
    a1: &RealMatrix,
    a2: &RealMatrix,
    b1: &RealMatrix,
    b2: &RealMatrix,
    u: &[f64],
    duty: f64,
) -> Result<Vec<f64>> {
    let a_avg = ssa_average(a1, a2, duty)?;
    let b_avg = ssa_average(b1, b2, duty)?;
    let forcing = RealMatrix::column(&b_avg.mul_vec(u)?)?;
    Ok(a_avg.solve(&forcing)?.scale(-1.0).into_vec())
}

/// `(A_2 − A_1)·X_avg + (B_2 − B_1)·u`.
pub fn ssa_duty_direction(
    a1: &RealMatrix,
    a2: &RealMatrix,
    b1: &RealMatrix,
    b2: &RealMatrix,
    x_avg: &[f64],
    u: &[f64],
) -> Result<Vec<f64>> {
    // Durations do not enter the formula.
    let p1 = SubintervalModel::new(a1.clone(), b1.clone(), 1.0)?;
    let p2 = SubintervalModel::new(a2.clone(), b2.clone(), 1.0)?;
    injection_formula(&p1, &p2, x_avg, u)
}

/// Left-fold of pairwise truncated BCH over `e^{A_m T_m}···e^{A_1 T_1}`,
/// divided by the total duration.
///
/// For three or more factors the fold drops cross terms of the full
/// multi-factor series, so the truncation error is not controlled by the
/// order alone.
pub fn multi_factor_bch(factors: &[(RealMatrix, f64)], order: BchOrder) -> Result<RealMatrix> {
    if factors.len() < 2 {
        return Err(Error::Domain(format!(
            "multi-factor BCH needs at least two factors, got {}",
            factors.len()
        )));
    }
    if factors.iter().any(|(_, t)| !(t.is_finite() && *t > 0.0)) {
        return Err(Error::Domain("durations must be positive".into()));
    }
    let total: f64 = factors.iter().map(|(_, t)| t).sum();
    let mut acc = factors[0].0.scale(factors[0].1);
    for (a, t) in &factors[1..] {
        acc = bch_log_pair(&acc, &a.scale(*t), order)?;
    }
    Ok(acc.scale(1.0 / total))
}

/// `2·‖X‖·‖Y‖`, an upper bound on `‖[X, Y]‖`.
pub fn commutator_scale_bound(x: &RealMatrix, y: &RealMatrix) -> Result<f64> {
    commutator(x, y)?;
    Ok(2.0 * x.frobenius_norm() * y.frobenius_norm())
}
