//! End-to-end assembly: switching cycle → period map → sampled-data
//! baseline → continuous surrogate.

use std::fmt;
use std::str::FromStr;

use crate::bch::{
    ac_from_bch, averaged_equilibrium, multi_factor_bch, ssa_duty_direction, BchOrder,
};
use crate::error::{Error, Result};
use crate::pwlmap::{
    build_discrete_baseline, duty_injection_direction, periodic_steady_state, poincare_map,
    PoincareMap, SubintervalModel, SwitchingCycle,
};
use crate::reconstruct::{
    reconstruct_auto, reconstruct_exact, reconstruct_with_generator, reconstruct_with_real_lift,
    ContinuousSurrogate, DiscreteBaseline, Method,
};
use crate::smallmat::{mat_exp, RealMatrix};

/// Which input drives the small-signal model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InjectionChannel {
    /// Perturbation of the switching instant; input matrix `γ_x`.
    Duty,
    /// The source vector itself; input matrix `Γ`.
    Source,
}

impl InjectionChannel {
    pub fn tag(self) -> &'static str {
        match self {
            InjectionChannel::Duty => "duty",
            InjectionChannel::Source => "source",
        }
    }
}

/// A reconstruction request; `Auto` tries the principal logarithm and falls
/// back to the real lift for 2-state maps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurrogateRequest {
    Method(Method),
    Auto,
}

impl fmt::Display for SurrogateRequest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurrogateRequest::Method(m) => m.fmt(f),
            SurrogateRequest::Auto => f.write_str("auto"),
        }
    }
}

impl FromStr for SurrogateRequest {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "auto" {
            Ok(SurrogateRequest::Auto)
        } else {
            s.parse().map(SurrogateRequest::Method)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConverterModel {
    cycle: SwitchingCycle,
    c_phys: RealMatrix,
    d_phys: RealMatrix,
    channel: InjectionChannel,
}

impl ConverterModel {
    /// `d_phys = None` means a zero direct term.
    pub fn new(
        cycle: SwitchingCycle,
        c_phys: RealMatrix,
        d_phys: Option<RealMatrix>,
        channel: InjectionChannel,
    ) -> Result<Self> {
        if c_phys.cols() != cycle.state_dim() {
            return Err(Error::dim(format!(
                "output matrix has {} columns, state dimension is {}",
                c_phys.cols(),
                cycle.state_dim()
            )));
        }
        if channel == InjectionChannel::Duty && cycle.subintervals().len() != 2 {
            return Err(Error::UnsupportedTopology(format!(
                "duty injection needs exactly two subintervals, cycle has {}",
                cycle.subintervals().len()
            )));
        }
        let p = match channel {
            InjectionChannel::Duty => 1,
            InjectionChannel::Source => cycle.input_dim(),
        };
        let d_phys = d_phys.unwrap_or_else(|| RealMatrix::zeros(c_phys.rows(), p));
        if d_phys.shape() != (c_phys.rows(), p) {
            return Err(Error::dim(format!(
                "direct term is {:?}, expected {:?}",
                d_phys.shape(),
                (c_phys.rows(), p)
            )));
        }
        Ok(Self {
            cycle,
            c_phys,
            d_phys,
            channel,
        })
    }

    pub fn cycle(&self) -> &SwitchingCycle {
        &self.cycle
    }

    pub fn c_phys(&self) -> &RealMatrix {
        &self.c_phys
    }

    pub fn d_phys(&self) -> &RealMatrix {
        &self.d_phys
    }

    pub fn channel(&self) -> InjectionChannel {
        self.channel
    }

    pub fn map(&self) -> Result<PoincareMap> {
        poincare_map(&self.cycle)
    }

    pub fn steady_state(&self) -> Result<Vec<f64>> {
        periodic_steady_state(&self.map()?, self.cycle.input())
    }

    /// `γ_x` at the periodic steady state, or `None` when the cycle is not
    /// two-phase.
    pub fn duty_direction(&self) -> Result<Option<Vec<f64>>> {
        if self.cycle.subintervals().len() != 2 {
            return Ok(None);
        }
        duty_injection_direction(&self.cycle, &self.steady_state()?).map(Some)
    }

    fn injection(&self, map: &PoincareMap) -> Result<RealMatrix> {
        match self.channel {
            InjectionChannel::Duty => {
                let x = periodic_steady_state(map, self.cycle.input())?;
                RealMatrix::column(&duty_injection_direction(&self.cycle, &x)?)
            }
            InjectionChannel::Source => Ok(map.gamma.clone()),
        }
    }

    pub fn baseline(&self) -> Result<DiscreteBaseline> {
        let map = self.map()?;
        let injection = self.injection(&map)?;
        build_discrete_baseline(&map, &injection, &self.c_phys, &self.d_phys)
    }

    pub fn surrogate(&self, request: SurrogateRequest) -> Result<ContinuousSurrogate> {
        let baseline = self.baseline()?;
        self.surrogate_from(&baseline, request)
    }

    /// Same as [`ConverterModel::surrogate`] with a precomputed baseline.
    pub fn surrogate_from(
        &self,
        baseline: &DiscreteBaseline,
        request: SurrogateRequest,
    ) -> Result<ContinuousSurrogate> {
        match request {
            SurrogateRequest::Auto => reconstruct_auto(baseline),
            SurrogateRequest::Method(Method::ExactLog) => reconstruct_exact(baseline),
            SurrogateRequest::Method(Method::RealLift) => reconstruct_with_real_lift(baseline),
            SurrogateRequest::Method(m @ (Method::Bch2 | Method::Bch4)) => {
                let order = if m == Method::Bch2 {
                    BchOrder::Second
                } else {
                    BchOrder::Fourth
                };
                let a_c = self.bch_generator(order)?;
                reconstruct_with_generator(baseline, a_c, m)
            }
            SurrogateRequest::Method(Method::Ssa) => self.ssa_surrogate(),
        }
    }

    fn require_no_jump(&self, what: &str) -> Result<()> {
        if self.cycle.jump().is_some() {
            return Err(Error::UnsupportedTopology(format!(
                "{what} is undefined for cycles with a terminal jump"
            )));
        }
        Ok(())
    }

    fn bch_generator(&self, order: BchOrder) -> Result<RealMatrix> {
        self.require_no_jump("BCH reconstruction")?;
        match self.cycle.subintervals() {
            [only] => Ok(only.a().clone()),
            [p1, p2] => ac_from_bch(p1.a(), p1.duration(), p2.a(), p2.duration(), order),
            many => {
                let factors: Vec<_> = many.iter().map(|s| (s.a().clone(), s.duration())).collect();
                multi_factor_bch(&factors, order)
            }
        }
    }

    /// Duration-weighted average model. Its input matrix is the averaged
    /// duty direction (divided by `Ts`, matching the baseline convention) on
    /// the duty channel, or the averaged input matrix on the source channel.
    fn ssa_surrogate(&self) -> Result<ContinuousSurrogate> {
        self.require_no_jump("state-space averaging")?;
        let ts = self.cycle.period();
        let subs = self.cycle.subintervals();
        let a_avg = duration_weighted(subs, ts, SubintervalModel::a)?;
        let b_c = match self.channel {
            InjectionChannel::Source => duration_weighted(subs, ts, SubintervalModel::b)?,
            InjectionChannel::Duty => {
                let (p1, p2) = (&subs[0], &subs[1]);
                let duty = p2.duration() / ts;
                let u = self.cycle.input();
                let x_avg = averaged_equilibrium(p1.a(), p2.a(), p1.b(), p2.b(), u, duty)?;
                let b_d = ssa_duty_direction(p1.a(), p2.a(), p1.b(), p2.b(), &x_avg, u)?;
                RealMatrix::column(&b_d)?.scale(1.0 / ts)
            }
        };
        Ok(ContinuousSurrogate {
            a_c: a_avg,
            b_c,
            c_c: self.c_phys.clone(),
            d_c: self.d_phys.clone(),
            period: ts,
            lifted: false,
            method: Method::Ssa,
        })
    }
}

fn duration_weighted(
    subs: &[SubintervalModel],
    ts: f64,
    pick: fn(&SubintervalModel) -> &RealMatrix,
) -> Result<RealMatrix> {
    let mut acc = pick(&subs[0]).scale(subs[0].duration() / ts);
    for s in &subs[1..] {
        acc = acc.try_add(&pick(s).scale(s.duration() / ts))?;
    }
    Ok(acc)
}

/// `‖[e^{A_c Ts}]_{n×n} − A_z‖_F / ‖A_z‖_F`, the leading block of the
/// surrogate's one-period transition against the baseline transition.
pub fn transition_residual(
    surrogate: &ContinuousSurrogate,
    baseline: &DiscreteBaseline,
) -> Result<f64> {
    let n = baseline.state_dim();
    let full = mat_exp(&surrogate.a_c, surrogate.period)?;
    if full.rows() < n {
        return Err(Error::dim(
            "surrogate state is smaller than the baseline state",
        ));
    }
    Ok(full.block(0, 0, n, n).relative_error(&baseline.a_z))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> RealMatrix {
        RealMatrix::from_rows(rows).unwrap()
    }

    fn commuting_model(channel: InjectionChannel) -> ConverterModel {
        let a = m(&[&[-2.0, -1.0], &[1.0, -0.5]]);
        let cycle = SwitchingCycle::two_phase(
            a.clone(),
            m(&[&[0.0], &[0.0]]),
            a,
            m(&[&[1.0], &[0.0]]),
            vec![3.0],
            0.4,
            0.1,
        )
        .unwrap();
        ConverterModel::new(cycle, m(&[&[0.0, 1.0]]), None, channel).unwrap()
    }

    #[test]
    fn request_parsing() {
        assert_eq!(
            "auto".parse::<SurrogateRequest>().unwrap(),
            SurrogateRequest::Auto
        );
        assert_eq!(
            "bch4".parse::<SurrogateRequest>().unwrap(),
            SurrogateRequest::Method(Method::Bch4)
        );
        assert!("exact".parse::<SurrogateRequest>().is_err());
    }

    #[test]
    fn commuting_generators_agree_across_methods() {
        for channel in [InjectionChannel::Duty, InjectionChannel::Source] {
            let model = commuting_model(channel);
            let exact = model
                .surrogate(SurrogateRequest::Method(Method::ExactLog))
                .unwrap();
            for method in [Method::Bch2, Method::Bch4, Method::Ssa] {
                let s = model.surrogate(SurrogateRequest::Method(method)).unwrap();
                assert!(s.a_c.relative_error(&exact.a_c) < 1e-12, "{method}");
            }
        }
    }

    #[test]
    fn exact_log_reproduces_transition() {
        let model = commuting_model(InjectionChannel::Duty);
        let base = model.baseline().unwrap();
        let s = model.surrogate_from(&base, SurrogateRequest::Auto).unwrap();
        assert!(transition_residual(&s, &base).unwrap() < 1e-10);
    }

    #[test]
    fn duty_channel_needs_two_phases() {
        let sub = SubintervalModel::new(RealMatrix::diag(&[-1.0]), m(&[&[1.0]]), 1.0).unwrap();
        let cycle = SwitchingCycle::new(vec![sub], vec![1.0]).unwrap();
        assert!(matches!(
            ConverterModel::new(cycle, m(&[&[1.0]]), None, InjectionChannel::Duty),
            Err(Error::UnsupportedTopology(_))
        ));
    }

    #[test]
    fn jump_blocks_bch_and_ssa() {
        let sub =
            SubintervalModel::new(m(&[&[-0.2, 0.3], &[-0.1, -0.4]]), m(&[&[1.0], &[0.0]]), 1.0)
                .unwrap();
        let cycle = SwitchingCycle::new(vec![sub], vec![1.0])
            .unwrap()
            .with_terminal_jump(RealMatrix::diag(&[-1.0, 1.0]))
            .unwrap();
        let model =
            ConverterModel::new(cycle, m(&[&[1.0, 0.0]]), None, InjectionChannel::Source).unwrap();
        for method in [Method::Bch2, Method::Ssa] {
            assert!(matches!(
                model.surrogate(SurrogateRequest::Method(method)),
                Err(Error::UnsupportedTopology(_))
            ));
        }
    }
}
