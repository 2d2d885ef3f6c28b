//! Reference converter cells used by the examples, tests and benches.
//!
//! State is `[inductor current, capacitor voltage]`; the output is the
//! capacitor voltage.

use crate::error::Result;
use crate::pipeline::{ConverterModel, InjectionChannel};
use crate::pwlmap::{SubintervalModel, SwitchingCycle};
use crate::smallmat::RealMatrix;

pub const INDUCTANCE: f64 = 100e-6;
pub const CAPACITANCE: f64 = 100e-6;
pub const LOAD: f64 = 10.0;
pub const SOURCE_VOLTS: f64 = 12.0;
pub const SWITCHING_PERIOD: f64 = 1e-5;

pub const BUCK_DUTY: f64 = 0.5;
pub const BOOST_DUTY: f64 = 0.4;

fn lc_tank(coupled: bool) -> RealMatrix {
    let (l, c, r) = (INDUCTANCE, CAPACITANCE, LOAD);
    let k = if coupled { 1.0 } else { 0.0 };
    RealMatrix::from_rows(&[[0.0, -k / l], [k / c, -1.0 / (r * c)]]).expect("finite")
}

fn source_column(on: bool) -> RealMatrix {
    let v = if on { 1.0 / INDUCTANCE } else { 0.0 };
    RealMatrix::column(&[v, 0.0]).expect("finite")
}

fn voltage_output() -> RealMatrix {
    RealMatrix::from_rows(&[[0.0, 1.0]]).expect("finite")
}

/// Ideal buck: both phases share the tank matrix (commuting generators), the
/// source is connected only while the switch is on.
pub fn ideal_buck_cycle(duty: f64, period: f64) -> Result<SwitchingCycle> {
    SwitchingCycle::two_phase(
        lc_tank(true),
        source_column(false),
        lc_tank(true),
        source_column(true),
        vec![SOURCE_VOLTS],
        duty,
        period,
    )
}

/// Ideal boost: phase 1 is switch off (inductor feeds the load), phase 2 is
/// switch on (inductor shorted across the source, capacitor isolated).
pub fn ideal_boost_cycle(duty: f64, period: f64) -> Result<SwitchingCycle> {
    SwitchingCycle::two_phase(
        lc_tank(true),
        source_column(true),
        lc_tank(false),
        source_column(true),
        vec![SOURCE_VOLTS],
        duty,
        period,
    )
}

pub fn ideal_buck() -> Result<ConverterModel> {
    ConverterModel::new(
        ideal_buck_cycle(BUCK_DUTY, SWITCHING_PERIOD)?,
        voltage_output(),
        None,
        InjectionChannel::Duty,
    )
}

pub fn ideal_boost() -> Result<ConverterModel> {
    ConverterModel::new(
        ideal_boost_cycle(BOOST_DUTY, SWITCHING_PERIOD)?,
        voltage_output(),
        None,
        InjectionChannel::Duty,
    )
}

pub const SIGN_SYMMETRIC_PERIOD: f64 = 1e-3;

/// Exponent `Ω` of the sign-symmetric example map `diag(−1, 1)·e^Ω`.
pub fn sign_symmetric_exponent() -> RealMatrix {
    RealMatrix::from_rows(&[[-0.3, 0.4], [0.2, -0.5]]).expect("finite")
}

/// One flow of `Ω/Ts` followed by the sign flip `diag(−1, 1)`, driven on
/// the source channel.
pub fn sign_symmetric() -> Result<ConverterModel> {
    let ts = SIGN_SYMMETRIC_PERIOD;
    let sub = SubintervalModel::new(
        sign_symmetric_exponent().scale(1.0 / ts),
        RealMatrix::column(&[500.0, 0.0])?,
        ts,
    )?;
    let cycle = SwitchingCycle::new(vec![sub], vec![1.0])?
        .with_terminal_jump(RealMatrix::diag(&[-1.0, 1.0]))?;
    ConverterModel::new(
        cycle,
        RealMatrix::from_rows(&[[1.0, 0.0]])?,
        None,
        InjectionChannel::Source,
    )
}
