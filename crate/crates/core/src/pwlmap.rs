//! Exact one-period map of a piecewise-linear switching cycle.
//!
//! Phase `k` of the cycle evolves as `ẋ = A_k x + B_k u` for `T_k` seconds.
//! Phase 1 is the earliest; the period map composes right-to-left,
//! `Φ = Φ_m ··· Φ_1`.

use crate::error::{Error, Result};
use crate::reconstruct::DiscreteBaseline;
use crate::smallmat::{drive_integral, mat_exp, RealMatrix};

/// Relative mismatch allowed between a declared period and `Σ T_k`.
pub const PERIOD_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SubintervalModel {
    a: RealMatrix,
    b: RealMatrix,
    duration: f64,
}

impl SubintervalModel {
    pub fn new(a: RealMatrix, b: RealMatrix, duration: f64) -> Result<Self> {
        a.require_square("subinterval system matrix")?;
        if b.rows() != a.rows() {
            return Err(Error::dim(format!(
                "input matrix has {} rows, state dimension is {}",
                b.rows(),
                a.rows()
            )));
        }
        if !(duration.is_finite() && duration > 0.0) {
            return Err(Error::InvalidCycle(format!(
                "subinterval duration must be positive, got {duration}"
            )));
        }
        Ok(Self { a, b, duration })
    }

    pub fn a(&self) -> &RealMatrix {
        &self.a
    }

    pub fn b(&self) -> &RealMatrix {
        &self.b
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    /// `(Φ_k, Γ_k)` for this phase.
    pub fn flow(&self) -> Result<(RealMatrix, RealMatrix)> {
        Ok((
            mat_exp(&self.a, self.duration)?,
            drive_integral(&self.a, &self.b, self.duration)?,
        ))
    }

    fn with_duration(&self, duration: f64) -> Result<Self> {
        Self::new(self.a.clone(), self.b.clone(), duration)
    }
}

/// An ordered switching period with a constant input vector.
///
/// An optional terminal jump `J` (a linear state reset applied at the end of
/// the period) models sign-flipping constructions such as half-cycle
/// rectification; the period map then becomes `J·Φ_m···Φ_1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SwitchingCycle {
    subintervals: Vec<SubintervalModel>,
    input: Vec<f64>,
    period: f64,
    jump: Option<RealMatrix>,
}

impl SwitchingCycle {
    /// Period is taken as the sum of the subinterval durations.
    pub fn new(subintervals: Vec<SubintervalModel>, input: Vec<f64>) -> Result<Self> {
        let first = subintervals
            .first()
            .ok_or_else(|| Error::InvalidCycle("a cycle needs at least one subinterval".into()))?;
        let (n, p) = (first.a.rows(), first.b.cols());
        for (k, s) in subintervals.iter().enumerate() {
            if s.a.rows() != n || s.b.cols() != p {
                return Err(Error::dim(format!(
                    "subinterval {} is {}-state/{}-input, expected {n}/{p}",
                    k + 1,
                    s.a.rows(),
                    s.b.cols()
                )));
            }
        }
        if input.len() != p {
            return Err(Error::dim(format!(
                "input vector has length {}, input dimension is {p}",
                input.len()
            )));
        }
        if input.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let period = subintervals.iter().map(|s| s.duration).sum();
        Ok(Self {
            subintervals,
            input,
            period,
            jump: None,
        })
    }

    /// Like [`SwitchingCycle::new`] but checks a declared period against the
    /// sum of durations.
    pub fn with_period(
        subintervals: Vec<SubintervalModel>,
        input: Vec<f64>,
        period: f64,
    ) -> Result<Self> {
        let cycle = Self::new(subintervals, input)?;
        if (cycle.period - period).abs() > PERIOD_RTOL * period.abs() {
            return Err(Error::InvalidCycle(format!(
                "durations sum to {:e} s, declared period is {period:e} s",
                cycle.period
            )));
        }
        Ok(cycle)
    }

    /// Two-phase PWM cycle with `T_1 = (1 − D)·Ts` and `T_2 = D·Ts`.
    #[allow(clippy::too_many_arguments)]
    pub fn two_phase(
        a1: RealMatrix,
        b1: RealMatrix,
        a2: RealMatrix,
        b2: RealMatrix,
        input: Vec<f64>,
        duty: f64,
        period: f64,
    ) -> Result<Self> {
        if !(duty > 0.0 && duty < 1.0) {
            return Err(Error::Domain(format!(
                "duty must lie in (0, 1), got {duty}"
            )));
        }
        Self::new(
            vec![
                SubintervalModel::new(a1, b1, (1.0 - duty) * period)?,
                SubintervalModel::new(a2, b2, duty * period)?,
            ],
            input,
        )
    }

    pub fn with_terminal_jump(mut self, jump: RealMatrix) -> Result<Self> {
        let n = self.state_dim();
        if jump.shape() != (n, n) {
            return Err(Error::dim(format!("jump must be {n}x{n}")));
        }
        self.jump = Some(jump);
        Ok(self)
    }

    /// Same phases and duty, period rescaled to `period`.
    pub fn rescaled(&self, period: f64) -> Result<Self> {
        let k = period / self.period;
        let subintervals = self
            .subintervals
            .iter()
            .map(|s| s.with_duration(s.duration * k))
            .collect::<Result<Vec<_>>>()?;
        let mut out = Self::new(subintervals, self.input.clone())?;
        out.jump = self.jump.clone();
        Ok(out)
    }

    pub fn subintervals(&self) -> &[SubintervalModel] {
        &self.subintervals
    }

    pub fn input(&self) -> &[f64] {
        &self.input
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn jump(&self) -> Option<&RealMatrix> {
        self.jump.as_ref()
    }

    pub fn state_dim(&self) -> usize {
        self.subintervals[0].a.rows()
    }

    pub fn input_dim(&self) -> usize {
        self.subintervals[0].b.cols()
    }

    /// `T_2 / Ts` for a two-phase cycle.
    pub fn duty(&self) -> Option<f64> {
        (self.subintervals.len() == 2).then(|| self.subintervals[1].duration / self.period)
    }

    fn two_phases(&self) -> Result<(&SubintervalModel, &SubintervalModel)> {
        match self.subintervals.as_slice() {
            [first, second] => Ok((first, second)),
            other => Err(Error::UnsupportedTopology(format!(
                "duty injection needs exactly two subintervals, cycle has {}",
                other.len()
            ))),
        }
    }
}

/// `x_{k+1} = Φ x_k + Γ u`.
#[derive(Debug, Clone, PartialEq)]
pub struct PoincareMap {
    pub phi: RealMatrix,
    pub gamma: RealMatrix,
    pub period: f64,
}

pub fn poincare_map(cycle: &SwitchingCycle) -> Result<PoincareMap> {
    let n = cycle.state_dim();
    let mut phi = RealMatrix::identity(n);
    let mut gamma = RealMatrix::zeros(n, cycle.input_dim());
    for sub in &cycle.subintervals {
        let (phi_k, gamma_k) = sub.flow()?;
        phi = &phi_k * &phi;
        gamma = &(&phi_k * &gamma) + &gamma_k;
    }
    if let Some(j) = &cycle.jump {
        phi = j * &phi;
        gamma = j * &gamma;
    }
    Ok(PoincareMap {
        phi,
        gamma,
        period: cycle.period,
    })
}

/// Fixed point `X* = (I − Φ)⁻¹ Γ u` of the period map.
pub fn periodic_steady_state(map: &PoincareMap, u: &[f64]) -> Result<Vec<f64>> {
    let n = map.phi.rows();
    let i_minus_phi = &RealMatrix::identity(n) - &map.phi;
    let det = i_minus_phi.det()?;
    let scale = map.phi.frobenius_norm().powi(n as i32).max(1.0);
    if det.abs() < 1e-12 * scale {
        return Err(Error::NoUniquePeriodicOrbit { det });
    }
    let forcing = RealMatrix::column(&map.gamma.mul_vec(u)?)?;
    let x = i_minus_phi
        .solve(&forcing)
        .map_err(|_| Error::NoUniquePeriodicOrbit { det })?;
    Ok(x.into_vec())
}

/// First-order discrete forcing of a switching-instant perturbation,
/// `γ_x = (A_2 − A_1)·x + (B_2 − B_1)·u`, evaluated at the supplied state.
///
/// Passing the exact periodic steady state gives the sampled-data
/// direction; passing the averaged equilibrium gives the classical
/// averaged-model direction.
pub fn duty_injection_direction(cycle: &SwitchingCycle, state: &[f64]) -> Result<Vec<f64>> {
    let (p1, p2) = cycle.two_phases()?;
    injection_formula(p1, p2, state, &cycle.input)
}

pub(crate) fn injection_formula(
    p1: &SubintervalModel,
    p2: &SubintervalModel,
    state: &[f64],
    u: &[f64],
) -> Result<Vec<f64>> {
    let da = p2.a.try_sub(&p1.a)?;
    let db = p2.b.try_sub(&p1.b)?;
    let lhs = da.mul_vec(state)?;
    let rhs = db.mul_vec(u)?;
    Ok(lhs.iter().zip(&rhs).map(|(a, b)| a + b).collect())
}

/// Exact derivative of `x_{k+1}` with respect to the length of the second
/// phase (switching instant moved earlier, period fixed), starting from
/// `x_k = state`:
///
/// `J·Φ_2·[(A_2 − A_1)·x_sw + (B_2 − B_1)·u]`, with `x_sw = Φ_1 x_k + Γ_1 u`
/// the state at the switching instant.
///
/// This is the propagated counterpart of [`duty_injection_direction`]; the
/// two agree to first order in the period.
pub fn switching_sensitivity(cycle: &SwitchingCycle, state: &[f64]) -> Result<Vec<f64>> {
    let (p1, p2) = cycle.two_phases()?;
    let (phi1, gamma1) = p1.flow()?;
    let phi2 = mat_exp(&p2.a, p2.duration)?;
    let at_switch: Vec<f64> = phi1
        .mul_vec(state)?
        .iter()
        .zip(gamma1.mul_vec(&cycle.input)?)
        .map(|(a, b)| a + b)
        .collect();
    let kick = injection_formula(p1, p2, &at_switch, &cycle.input)?;
    let mut out = phi2.mul_vec(&kick)?;
    if let Some(j) = &cycle.jump {
        out = j.mul_vec(&out)?;
    }
    Ok(out)
}

/// Packs a period map into the sampled-data quadruple used for
/// reconstruction:
///
/// * `A_z = Φ`
/// * `B_z = injection` (already carries the factor `Ts`)
/// * `C_z = C·Φ` (phase-aligned output)
/// * `D_z = D + ½·C·injection` (corrected impulse-invariance constant)
pub fn build_discrete_baseline(
    map: &PoincareMap,
    injection: &RealMatrix,
    c_phys: &RealMatrix,
    d_phys: &RealMatrix,
) -> Result<DiscreteBaseline> {
    let n = map.phi.rows();
    if injection.rows() != n || c_phys.cols() != n {
        return Err(Error::dim(
            "injection/output matrices do not match the state dimension",
        ));
    }
    if d_phys.shape() != (c_phys.rows(), injection.cols()) {
        return Err(Error::dim(format!(
            "direct term must be {}x{}",
            c_phys.rows(),
            injection.cols()
        )));
    }
    map.phi.inverse()?;
    let c_z = c_phys * &map.phi;
    let d_z = d_phys + &(c_phys * injection).scale(0.5);
    DiscreteBaseline::new(map.phi.clone(), injection.clone(), c_z, d_z, map.period)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> RealMatrix {
        RealMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn single_drift_free_phase() {
        let sub =
            SubintervalModel::new(RealMatrix::zeros(2, 2), m(&[&[1.0], &[0.0]]), 2.0).unwrap();
        let cycle = SwitchingCycle::new(vec![sub], vec![1.0]).unwrap();
        let map = poincare_map(&cycle).unwrap();
        assert_eq!(map.phi, RealMatrix::identity(2));
        assert!(map.gamma.relative_error(&m(&[&[2.0], &[0.0]])) < 1e-15);
    }

    #[test]
    fn identical_phases_compose_to_single_flow() {
        let a = m(&[&[-1.0, 2.0], &[-3.0, -0.5]]);
        let b = m(&[&[1.0], &[0.5]]);
        let cycle = SwitchingCycle::two_phase(
            a.clone(),
            b.clone(),
            a.clone(),
            b.clone(),
            vec![1.0],
            0.3,
            0.7,
        )
        .unwrap();
        let map = poincare_map(&cycle).unwrap();
        assert!(map.phi.relative_error(&mat_exp(&a, 0.7).unwrap()) < 1e-11);
        assert!(
            map.gamma
                .relative_error(&drive_integral(&a, &b, 0.7).unwrap())
                < 1e-11
        );
    }

    #[test]
    fn steady_state_examples() {
        let map = PoincareMap {
            phi: RealMatrix::identity(2).scale(0.5),
            gamma: m(&[&[1.0], &[1.0]]),
            period: 1.0,
        };
        let x = periodic_steady_state(&map, &[1.0]).unwrap();
        assert!((x[0] - 2.0).abs() < 1e-15 && (x[1] - 2.0).abs() < 1e-15);

        let stuck = PoincareMap {
            phi: RealMatrix::identity(2),
            ..map
        };
        assert!(matches!(
            periodic_steady_state(&stuck, &[1.0]),
            Err(Error::NoUniquePeriodicOrbit { .. })
        ));
    }

    #[test]
    fn injection_direction_examples() {
        let b = m(&[&[1.0], &[1.0]]);
        let a = m(&[&[-1.0, 0.0], &[0.0, -2.0]]);
        let same =
            SwitchingCycle::two_phase(a.clone(), b.clone(), a, b.clone(), vec![3.0], 0.5, 1.0)
                .unwrap();
        assert_eq!(
            duty_injection_direction(&same, &[4.0, 5.0]).unwrap(),
            vec![0.0, 0.0]
        );

        let cycle = SwitchingCycle::two_phase(
            RealMatrix::zeros(2, 2),
            b.clone(),
            RealMatrix::identity(2),
            b,
            vec![3.0],
            0.5,
            1.0,
        )
        .unwrap();
        assert_eq!(
            duty_injection_direction(&cycle, &[1.0, 2.0]).unwrap(),
            vec![1.0, 2.0]
        );
    }

    #[test]
    fn injection_needs_two_phases() {
        let sub = SubintervalModel::new(RealMatrix::diag(&[-1.0]), m(&[&[1.0]]), 1.0).unwrap();
        let cycle = SwitchingCycle::new(vec![sub.clone(), sub.clone(), sub], vec![1.0]).unwrap();
        assert!(matches!(
            duty_injection_direction(&cycle, &[0.0]),
            Err(Error::UnsupportedTopology(_))
        ));
    }

    #[test]
    fn baseline_packing() {
        let map = PoincareMap {
            phi: RealMatrix::diag(&[0.9, 0.8]),
            gamma: m(&[&[1.0], &[0.0]]),
            period: 1e-3,
        };
        let c = m(&[&[1.0, 0.0]]);
        let zero_inj = RealMatrix::zeros(2, 1);
        let base = build_discrete_baseline(&map, &zero_inj, &c, &RealMatrix::zeros(1, 1)).unwrap();
        assert_eq!(base.c_z, m(&[&[0.9, 0.0]]));
        assert_eq!(base.b_z, zero_inj);
        assert_eq!(base.d_z, RealMatrix::zeros(1, 1));

        let inj = m(&[&[4.0], &[1.0]]);
        let base = build_discrete_baseline(&map, &inj, &c, &m(&[&[0.25]])).unwrap();
        assert_eq!(base.d_z, m(&[&[2.25]]));
    }

    #[test]
    fn period_mismatch_is_rejected() {
        let sub = SubintervalModel::new(RealMatrix::diag(&[-1.0]), m(&[&[1.0]]), 1.0).unwrap();
        assert!(SwitchingCycle::with_period(vec![sub.clone()], vec![1.0], 1.0).is_ok());
        assert!(matches!(
            SwitchingCycle::with_period(vec![sub], vec![1.0], 1.0 + 1e-9),
            Err(Error::InvalidCycle(_))
        ));
        assert!(SubintervalModel::new(RealMatrix::diag(&[-1.0]), m(&[&[1.0]]), 0.0).is_err());
    }
}
