//! Continuous-time surrogates reconstructed from a sampled-data baseline.
//!
//! Conventions of the baseline `(A_z, B_z, C_z, D_z, Ts)`:
//!
//! * `A_z = e^{A_c Ts}` is the one-period transition;
//! * `B_z = Ts·B_c` (the injection already carries the period);
//! * `C_z = C_c·A_z` (output phase-aligned with the end of the period);
//! * `D_z = D_c + (Ts/2)·C_c·B_c` (impulse-invariance alias constant).
//!
//! The reconstruction inverts each of these relations.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::smallmat::{mat_exp, mat_log_principal, RealMatrix};
use crate::transfer::{self, TransferMatrix};
use crate::two_by_two::real_lift_log;

/// Sampled-data quadruple `G̃(z) = C_z (zI − A_z)⁻¹ B_z + D_z`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteBaseline {
    pub a_z: RealMatrix,
    pub b_z: RealMatrix,
    pub c_z: RealMatrix,
    pub d_z: RealMatrix,
    pub period: f64,
}

impl DiscreteBaseline {
    pub fn new(
        a_z: RealMatrix,
        b_z: RealMatrix,
        c_z: RealMatrix,
        d_z: RealMatrix,
        period: f64,
    ) -> Result<Self> {
        check_quadruple(&a_z, &b_z, &c_z, &d_z)?;
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::Domain(format!(
                "sampling period must be positive, got {period}"
            )));
        }
        a_z.inverse()?;
        Ok(Self {
            a_z,
            b_z,
            c_z,
            d_z,
            period,
        })
    }

    pub fn state_dim(&self) -> usize {
        self.a_z.rows()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    ExactLog,
    RealLift,
    Bch2,
    Bch4,
    Ssa,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::ExactLog => "exact-log",
            Method::RealLift => "real-lift",
            Method::Bch2 => "bch2",
            Method::Bch4 => "bch4",
            Method::Ssa => "ssa",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "exact-log" => Method::ExactLog,
            "real-lift" => Method::RealLift,
            "bch2" => Method::Bch2,
            "bch4" => Method::Bch4,
            "ssa" => Method::Ssa,
            other => return Err(Error::Domain(format!("unknown method '{other}'"))),
        })
    }
}

/// `G_c(s) = C_c (sI − A_c)⁻¹ B_c + D_c`, possibly on a lifted state.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuousSurrogate {
    pub a_c: RealMatrix,
    pub b_c: RealMatrix,
    pub c_c: RealMatrix,
    pub d_c: RealMatrix,
    pub period: f64,
    pub lifted: bool,
    pub method: Method,
}

impl ContinuousSurrogate {
    pub fn state_dim(&self) -> usize {
        self.a_c.rows()
    }

    /// Forward map back to a sampled-data quadruple under the same
    /// conventions the reconstruction inverts.
    pub fn resample(&self) -> Result<DiscreteBaseline> {
        let ts = self.period;
        let a_z = mat_exp(&self.a_c, ts)?;
        let b_z = self.b_c.scale(ts);
        let c_z = &self.c_c * &a_z;
        let d_z = &self.d_c + &alias_direct_term(&self.c_c, &self.b_c, ts)?;
        DiscreteBaseline::new(a_z, b_z, c_z, d_z, ts)
    }
}

/// Boxed reconstruction with the real principal logarithm:
/// `A_c = Log(A_z)/Ts`, `B_c = B_z/Ts`, `C_c = C_z A_z⁻¹`,
/// `D_c = D_z − (Ts/2) C_c B_c`.
pub fn reconstruct_exact(baseline: &DiscreteBaseline) -> Result<ContinuousSurrogate> {
    let a_c = mat_log_principal(&baseline.a_z)?.scale(1.0 / baseline.period);
    reconstruct_with_generator(baseline, a_c, Method::ExactLog)
}

/// Reconstruction with a caller-supplied generator (BCH or averaged); the
/// remaining three matrices follow the same boxed relations.
pub fn reconstruct_with_generator(
    baseline: &DiscreteBaseline,
    a_c: RealMatrix,
    method: Method,
) -> Result<ContinuousSurrogate> {
    let n = baseline.state_dim();
    if a_c.shape() != (n, n) {
        return Err(Error::dim(format!("generator must be {n}x{n}")));
    }
    let ts = baseline.period;
    let b_c = baseline.b_z.scale(1.0 / ts);
    let c_c = baseline.c_z.try_mul(&baseline.a_z.inverse()?)?;
    let d_c = baseline.d_z.try_sub(&alias_direct_term(&c_c, &b_c, ts)?)?;
    Ok(ContinuousSurrogate {
        a_c,
        b_c,
        c_c,
        d_c,
        period: ts,
        lifted: false,
        method,
    })
}

/// Reconstruction of a 2-state baseline whose transition has one positive
/// and one negative eigenvalue, on the 3-state real lift
/// `S_ext = blkdiag(A_z, λ₋)`.
///
/// `B_c` gets a zero in the lifted coordinate; `C_c = [C_z 0]·S_ext⁻¹`.
pub fn reconstruct_with_real_lift(baseline: &DiscreteBaseline) -> Result<ContinuousSurrogate> {
    if baseline.state_dim() != 2 {
        return Err(Error::NotLiftable(format!(
            "real lift is defined for 2-state maps, got {}",
            baseline.state_dim()
        )));
    }
    let ts = baseline.period;
    let lift = real_lift_log(&baseline.a_z, ts)?;
    let b_c = (&lift.embed_state * &baseline.b_z).scale(1.0 / ts);
    let c_padded = &baseline.c_z * &lift.project_state;
    let c_c = c_padded.try_mul(&lift.s_ext.inverse()?)?;
    let d_c = baseline.d_z.try_sub(&alias_direct_term(&c_c, &b_c, ts)?)?;
    Ok(ContinuousSurrogate {
        a_c: lift.a_c,
        b_c,
        c_c,
        d_c,
        period: ts,
        lifted: true,
        method: Method::RealLift,
    })
}

/// Principal-log reconstruction, falling back to the real lift for 2-state
/// maps without a real principal logarithm.
pub fn reconstruct_auto(baseline: &DiscreteBaseline) -> Result<ContinuousSurrogate> {
    match reconstruct_exact(baseline) {
        Err(Error::NoRealPrincipalLog { .. }) if baseline.state_dim() == 2 => {
            reconstruct_with_real_lift(baseline)
        }
        other => other,
    }
}

/// Alias constant `(Ts/2)·C_c·B_c` carried by the sampled-data direct term.
pub fn alias_direct_term(c_c: &RealMatrix, b_c: &RealMatrix, ts: f64) -> Result<RealMatrix> {
    Ok(c_c.try_mul(b_c)?.scale(0.5 * ts))
}

pub fn continuous_transfer(model: &ContinuousSurrogate, s: Complex64) -> Result<TransferMatrix> {
    transfer::evaluate(&model.a_c, &model.b_c, &model.c_c, &model.d_c, s)
}

fn check_quadruple(a: &RealMatrix, b: &RealMatrix, c: &RealMatrix, d: &RealMatrix) -> Result<()> {
    a.require_square("transition matrix")?;
    let n = a.rows();
    if b.rows() != n || c.cols() != n || d.shape() != (c.rows(), b.cols()) {
        return Err(Error::dim(format!(
            "inconsistent quadruple: A {:?}, B {:?}, C {:?}, D {:?}",
            a.shape(),
            b.shape(),
            c.shape(),
            d.shape()
        )));
    }
    Ok(())
}
