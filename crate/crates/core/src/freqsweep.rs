//! Frequency-response comparison of a sampled-data baseline against its
//! continuous surrogates, and the truncation-order probe.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::bch::{ac_from_bch, BchOrder};
use crate::error::{Error, Result};
use crate::pwlmap::SwitchingCycle;
use crate::reconstruct::{continuous_transfer, ContinuousSurrogate, DiscreteBaseline};
use crate::smallmat::{mat_exp, mat_log_principal};
use crate::transfer::{self, TransferMatrix};

/// Denominator floor for relative errors at transmission zeros.
pub const REL_ERR_FLOOR: f64 = 1e-300;
pub const DEFAULT_GRID_POINTS: usize = 200;

/// Strictly increasing angular frequencies inside `(0, π/Ts)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyGrid {
    points: Vec<f64>,
    period: f64,
}

impl FrequencyGrid {
    pub fn new(points: Vec<f64>, period: f64) -> Result<Self> {
        let nyquist = PI / period;
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::Domain(format!(
                "period must be positive, got {period}"
            )));
        }
        if points.iter().any(|w| !(*w > 0.0 && *w < nyquist)) {
            return Err(Error::Domain(format!(
                "grid points must lie in (0, {nyquist:e}) rad/s"
            )));
        }
        if points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Domain(
                "grid points must be strictly increasing".into(),
            ));
        }
        Ok(Self { points, period })
    }

    /// `count` logarithmically spaced points on `[w_min, w_max]`.
    pub fn log_spaced(w_min: f64, w_max: f64, count: usize, period: f64) -> Result<Self> {
        if count == 0 || !(w_min > 0.0 && w_max >= w_min) {
            return Err(Error::Domain(format!(
                "need 0 < w_min <= w_max and count > 0, got {w_min:e}, {w_max:e}, {count}"
            )));
        }
        let points = if count == 1 {
            vec![w_min]
        } else {
            let (l0, l1) = (w_min.ln(), w_max.ln());
            (0..count)
                .map(|k| (l0 + (l1 - l0) * k as f64 / (count - 1) as f64).exp())
                .collect()
        };
        Self::new(points, period)
    }

    /// 200 points from `1e-3·π/Ts` to `0.99·π/Ts`.
    pub fn default_for(period: f64) -> Result<Self> {
        let nyquist = PI / period;
        Self::log_spaced(1e-3 * nyquist, 0.99 * nyquist, DEFAULT_GRID_POINTS, period)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn period(&self) -> f64 {
        self.period
    }
}

/// `G̃(e^{jωTs}) = C_z (e^{jωTs} I − A_z)⁻¹ B_z + D_z`.
pub fn discrete_transfer(baseline: &DiscreteBaseline, omega: f64) -> Result<TransferMatrix> {
    let z = Complex64::from_polar(1.0, omega * baseline.period);
    transfer::evaluate(
        &baseline.a_z,
        &baseline.b_z,
        &baseline.c_z,
        &baseline.d_z,
        z,
    )
}

/// One model's response at one grid point. Fields are NaN when the point
/// hits a pole of the model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelPoint {
    pub mag_db: f64,
    pub phase_deg: f64,
    pub rel_err: f64,
    pub pole_hit: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub omega: f64,
    pub baseline_mag_db: f64,
    pub baseline_phase_deg: f64,
    pub baseline_pole_hit: bool,
    pub models: Vec<ModelPoint>,
}

/// Evaluates the baseline and every model on the grid (single-input,
/// single-output). Phases are unwrapped along the grid per series.
pub fn bode_compare(
    baseline: &DiscreteBaseline,
    models: &[ContinuousSurrogate],
    grid: &FrequencyGrid,
) -> Result<Vec<ComparisonRow>> {
    if baseline.b_z.cols() != 1 || baseline.c_z.rows() != 1 {
        return Err(Error::dim(
            "frequency comparison is single-input single-output",
        ));
    }
    for m in models {
        if m.b_c.cols() != 1 || m.c_c.rows() != 1 {
            return Err(Error::dim(format!(
                "model {} is not single-input single-output",
                m.method
            )));
        }
    }

    let siso = |r: Result<TransferMatrix>| -> Result<Option<Complex64>> {
        match r {
            Ok(g) => Ok(Some(g.get(0, 0))),
            Err(Error::PoleHit) => Ok(None),
            Err(e) => Err(e),
        }
    };

    // Independent per-frequency evaluations; collect() keeps grid order.
    let raw: Vec<(Option<Complex64>, Vec<Option<Complex64>>)> = grid
        .points
        .par_iter()
        .map(|&w| {
            let base = siso(discrete_transfer(baseline, w))?;
            let s = Complex64::new(0.0, w);
            let per_model = models
                .iter()
                .map(|m| siso(continuous_transfer(m, s)))
                .collect::<Result<Vec<_>>>()?;
            Ok((base, per_model))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut base_unwrap = PhaseUnwrapper::default();
    let mut model_unwrap = vec![PhaseUnwrapper::default(); models.len()];
    let rows = grid
        .points
        .iter()
        .zip(raw)
        .map(|(&omega, (base, per_model))| {
            let (baseline_mag_db, baseline_phase_deg) = match base {
                Some(g) => (mag_db(g), base_unwrap.push(g)),
                None => (f64::NAN, f64::NAN),
            };
            let models = per_model
                .into_iter()
                .zip(model_unwrap.iter_mut())
                .map(|(g, unwrap)| match g {
                    Some(g) => ModelPoint {
                        mag_db: mag_db(g),
                        phase_deg: unwrap.push(g),
                        rel_err: base.map_or(f64::NAN, |b| relative_error(g, b)),
                        pole_hit: false,
                    },
                    None => ModelPoint {
                        mag_db: f64::NAN,
                        phase_deg: f64::NAN,
                        rel_err: f64::NAN,
                        pole_hit: true,
                    },
                })
                .collect();
            ComparisonRow {
                omega,
                baseline_mag_db,
                baseline_phase_deg,
                baseline_pole_hit: base.is_none(),
                models,
            }
        })
        .collect();
    Ok(rows)
}

/// `|g − reference| / max(|reference|, floor)`.
pub fn relative_error(g: Complex64, reference: Complex64) -> f64 {
    (g - reference).norm() / reference.norm().max(REL_ERR_FLOOR)
}

fn mag_db(g: Complex64) -> f64 {
    20.0 * g.norm().log10()
}

/// Accumulates phase so that consecutive samples differ by at most 180°.
#[derive(Debug, Clone, Default)]
struct PhaseUnwrapper {
    last: Option<f64>,
}

impl PhaseUnwrapper {
    fn push(&mut self, g: Complex64) -> f64 {
        let raw = g.arg().to_degrees();
        let phase = match self.last {
            None => raw,
            Some(prev) => {
                let mut step = (raw - prev).rem_euclid(360.0);
                if step > 180.0 {
                    step -= 360.0;
                }
                prev + step
            }
        };
        self.last = Some(phase);
        phase
    }
}

/// Result of the truncation-order probe.
#[derive(Debug, Clone, PartialEq)]
pub enum ProbeOutcome {
    /// Residuals are at machine precision for every period (commuting
    /// generators); no slope can be fitted.
    Exact { residuals: Vec<f64> },
    /// Least-squares slope of `ln r` against `ln Ts`.
    Slope { slope: f64, residuals: Vec<f64> },
}

impl ProbeOutcome {
    pub fn slope(&self) -> Option<f64> {
        match self {
            ProbeOutcome::Exact { .. } => None,
            ProbeOutcome::Slope { slope, .. } => Some(*slope),
        }
    }

    pub fn residuals(&self) -> &[f64] {
        match self {
            ProbeOutcome::Exact { residuals } | ProbeOutcome::Slope { residuals, .. } => residuals,
        }
    }
}

/// Residual relative to `‖A_c‖` under which the probe reports `Exact`.
pub const PROBE_EXACT_RTOL: f64 = 1e-11;

/// For each period `Ts` (duty held fixed) computes
/// `r(Ts) = ‖ac_from_bch(order) − Log(Φ(Ts))/Ts‖_F` and fits the log-log
/// slope.
pub fn order_probe(
    cycle: &SwitchingCycle,
    periods: &[f64],
    order: BchOrder,
) -> Result<ProbeOutcome> {
    let duty = cycle.duty().ok_or_else(|| {
        Error::UnsupportedTopology(format!(
            "order probe needs two subintervals, cycle has {}",
            cycle.subintervals().len()
        ))
    })?;
    if cycle.jump().is_some() {
        return Err(Error::UnsupportedTopology(
            "order probe is undefined for cycles with a terminal jump".into(),
        ));
    }
    if periods.len() < 4 {
        return Err(Error::Domain(format!(
            "need at least 4 periods, got {}",
            periods.len()
        )));
    }
    if periods.iter().any(|t| !(t.is_finite() && *t > 0.0)) || periods.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Domain(
            "periods must be positive and strictly decreasing".into(),
        ));
    }
    let span = periods[0] / periods[periods.len() - 1];
    if span < 8.0 * (1.0 - 1e-12) {
        return Err(Error::Domain(format!(
            "periods span {:.3} octaves, need 3",
            span.log2()
        )));
    }

    let a1 = cycle.subintervals()[0].a();
    let a2 = cycle.subintervals()[1].a();
    let mut residuals = Vec::with_capacity(periods.len());
    let mut all_exact = true;
    for &ts in periods {
        let (t1, t2) = ((1.0 - duty) * ts, duty * ts);
        let phi = &mat_exp(a2, t2)? * &mat_exp(a1, t1)?;
        let exact = match mat_log_principal(&phi) {
            Ok(l) => l.scale(1.0 / ts),
            Err(Error::NoRealPrincipalLog { .. }) => return Err(Error::ProbeInfeasible { ts }),
            Err(e) => return Err(e),
        };
        let approx = ac_from_bch(a1, t1, a2, t2, order)?;
        let r = (&approx - &exact).frobenius_norm();
        all_exact &= r <= PROBE_EXACT_RTOL * exact.frobenius_norm().max(f64::MIN_POSITIVE);
        residuals.push(r);
    }
    if all_exact {
        return Ok(ProbeOutcome::Exact { residuals });
    }

    let xs: Vec<f64> = periods.iter().map(|t| t.ln()).collect();
    let ys: Vec<f64> = residuals
        .iter()
        .map(|r| r.max(f64::MIN_POSITIVE).ln())
        .collect();
    Ok(ProbeOutcome::Slope {
        slope: least_squares_slope(&xs, &ys),
        residuals,
    })
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}
