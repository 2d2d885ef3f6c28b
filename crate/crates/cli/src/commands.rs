//! `map`, `reconstruct`, `compare` and `probe`.
//!
//! Each command returns what it would print plus the CSV files it would
//! write, so the binary and the tests share one code path.

use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use pwlrec_core::freqsweep::{bode_compare, order_probe, ProbeOutcome, DEFAULT_GRID_POINTS};
use pwlrec_core::pipeline::transition_residual;
use pwlrec_core::{BchOrder, ConverterModel, FrequencyGrid, Method, RealMatrix, SurrogateRequest};

use crate::format::{csv_matrix, matrix_block, num, vector_block, LONG_CSV_HEADER};
use crate::spec::CycleSpecFile;
use crate::CliError;

/// Tolerance for the `e^{A_c Ts} = Φ` line printed by `reconstruct`.
pub const TRANSITION_CHECK_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    /// `(file name, contents)` pairs destined for the output directory.
    pub files: Vec<(String, String)>,
}

impl Outcome {
    pub fn write_files(&self, dir: &Path) -> Result<(), CliError> {
        fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
        for (name, contents) in &self.files {
            let path = dir.join(name);
            fs::write(&path, contents)
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        }
        Ok(())
    }
}

pub fn load_model(path: &Path) -> Result<ConverterModel, CliError> {
    CycleSpecFile::load(path)?.to_model()
}

pub fn map(model: &ConverterModel) -> Result<Outcome, CliError> {
    let map = model.map()?;
    let x_star = model.steady_state()?;
    let gamma_x = model.duty_direction()?;

    let mut out = String::new();
    out.push_str(&format!("Ts = {} s\n", num(map.period)));
    out.push_str(&format!("Phi =\n{}", matrix_block(&map.phi)));
    out.push_str(&format!("Gamma =\n{}", matrix_block(&map.gamma)));
    out.push_str(&format!("X* =\n{}", vector_block(&x_star)));
    if let Some(g) = &gamma_x {
        out.push_str(&format!("gamma_x =\n{}", vector_block(g)));
    }

    let mut csv = String::from(LONG_CSV_HEADER);
    csv_matrix(&mut csv, "phi", &map.phi);
    csv_matrix(&mut csv, "gamma", &map.gamma);
    csv_matrix(&mut csv, "x_star", &RealMatrix::column(&x_star)?);
    if let Some(g) = &gamma_x {
        csv_matrix(&mut csv, "gamma_x", &RealMatrix::column(g)?);
    }
    Ok(Outcome {
        stdout: out,
        files: vec![("map.csv".into(), csv)],
    })
}

pub fn parse_request(tag: &str) -> Result<SurrogateRequest, CliError> {
    tag.trim().parse().map_err(|_| {
        CliError::Argument(format!(
            "unknown method '{tag}', expected exact-log, real-lift, bch2, bch4, ssa or auto"
        ))
    })
}

pub fn reconstruct(model: &ConverterModel, request: SurrogateRequest) -> Result<Outcome, CliError> {
    let base = model.baseline()?;
    let s = model.surrogate_from(&base, request)?;
    let residual = transition_residual(&s, &base)?;

    let mut out = String::new();
    out.push_str(&format!("requested: {request}\n"));
    out.push_str(&format!("path: {}\n", s.method));
    out.push_str(&format!(
        "lifted: {}\n",
        if s.lifted { "yes" } else { "no" }
    ));
    out.push_str(&format!("state_dim: {}\n", s.state_dim()));
    out.push_str(&format!("A_c =\n{}", matrix_block(&s.a_c)));
    out.push_str(&format!("B_c =\n{}", matrix_block(&s.b_c)));
    out.push_str(&format!("C_c =\n{}", matrix_block(&s.c_c)));
    out.push_str(&format!("D_c =\n{}", matrix_block(&s.d_c)));
    match s.method {
        Method::ExactLog | Method::RealLift => {
            let verdict = if residual <= TRANSITION_CHECK_TOL {
                "PASS"
            } else {
                "FAIL"
            };
            out.push_str(&format!(
                "exp(A_c Ts) = Phi: {verdict} (relative error {}, tolerance {})\n",
                num(residual),
                num(TRANSITION_CHECK_TOL)
            ));
        }
        _ => out.push_str(&format!(
            "exp(A_c Ts) vs Phi: relative error {} (truncated generator)\n",
            num(residual)
        )),
    }

    let mut csv = String::from(LONG_CSV_HEADER);
    csv_matrix(&mut csv, "A_c", &s.a_c);
    csv_matrix(&mut csv, "B_c", &s.b_c);
    csv_matrix(&mut csv, "C_c", &s.c_c);
    csv_matrix(&mut csv, "D_c", &s.d_c);
    Ok(Outcome {
        stdout: out,
        files: vec![("surrogate.csv".into(), csv)],
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareOptions {
    /// Comma-separated method tags; empty gives a baseline-only table.
    pub methods: String,
    pub fmin_hz: Option<f64>,
    pub fmax_hz: Option<f64>,
    pub points: usize,
}

impl Default for CompareOptions {
    fn default() -> Self {
        Self {
            methods: "auto".into(),
            fmin_hz: None,
            fmax_hz: None,
            points: DEFAULT_GRID_POINTS,
        }
    }
}

/// Frequencies default to `[1e-3, 0.99]` times the Nyquist frequency.
pub fn compare(model: &ConverterModel, opts: &CompareOptions) -> Result<Outcome, CliError> {
    let requests = opts
        .methods
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(parse_request)
        .collect::<Result<Vec<_>, _>>()?;

    let ts = model.cycle().period();
    let nyquist_hz = 0.5 / ts;
    let fmin = opts.fmin_hz.unwrap_or(1e-3 * nyquist_hz);
    let fmax = opts.fmax_hz.unwrap_or(0.99 * nyquist_hz);
    if opts.points == 0 {
        return Err(CliError::Argument("--points must be positive".into()));
    }
    if !(fmin > 0.0 && fmax >= fmin && fmax < nyquist_hz) {
        return Err(CliError::Argument(format!(
            "need 0 < fmin <= fmax < {} Hz (Nyquist), got {} and {}",
            num(nyquist_hz),
            num(fmin),
            num(fmax)
        )));
    }
    if opts.points > 1 && fmax == fmin {
        return Err(CliError::Argument(
            "fmin equals fmax with more than one point".into(),
        ));
    }
    let grid = FrequencyGrid::log_spaced(2.0 * PI * fmin, 2.0 * PI * fmax, opts.points, ts)?;

    let base = model.baseline()?;
    let surrogates = requests
        .iter()
        .map(|r| model.surrogate_from(&base, *r))
        .collect::<Result<Vec<_>, _>>()?;
    let rows = bode_compare(&base, &surrogates, &grid)?;

    let mut csv = String::from("omega_rad_s,baseline_mag_db,baseline_phase_deg");
    for r in &requests {
        csv.push_str(&format!(",{r}_mag_db,{r}_phase_deg,{r}_rel_err"));
    }
    csv.push('\n');
    for row in &rows {
        csv.push_str(&num(row.omega));
        csv.push(',');
        csv.push_str(&num(row.baseline_mag_db));
        csv.push(',');
        csv.push_str(&num(row.baseline_phase_deg));
        for m in &row.models {
            csv.push_str(&format!(
                ",{},{},{}",
                num(m.mag_db),
                num(m.phase_deg),
                num(m.rel_err)
            ));
        }
        csv.push('\n');
    }
    Ok(Outcome {
        stdout: csv.clone(),
        files: vec![("compare.csv".into(), csv)],
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeOptions {
    pub order: u8,
    pub ts_points: usize,
    pub ts_span_octaves: f64,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        Self {
            order: 1,
            ts_points: 4,
            ts_span_octaves: 3.0,
        }
    }
}

/// Periods run from the file's `Ts` downward over the requested span.
pub fn probe_periods(ts: f64, opts: &ProbeOptions) -> Result<Vec<f64>, CliError> {
    if opts.ts_points < 4 {
        return Err(CliError::Argument(format!(
            "--ts-points must be at least 4, got {}",
            opts.ts_points
        )));
    }
    if !(opts.ts_span_octaves >= 3.0 && opts.ts_span_octaves.is_finite()) {
        return Err(CliError::Argument(format!(
            "--ts-span must be at least 3 octaves, got {}",
            opts.ts_span_octaves
        )));
    }
    let last = (opts.ts_points - 1) as f64;
    Ok((0..opts.ts_points)
        .map(|k| ts * (-opts.ts_span_octaves * k as f64 / last).exp2())
        .collect())
}

pub fn probe(model: &ConverterModel, opts: &ProbeOptions) -> Result<Outcome, CliError> {
    let order = BchOrder::try_from(opts.order).map_err(|_| {
        CliError::Argument(format!("--order must be 1, 2 or 4, got {}", opts.order))
    })?;
    let periods = probe_periods(model.cycle().period(), opts)?;
    let outcome = order_probe(model.cycle(), &periods, order)?;

    let mut out = format!("order: {}\n", opts.order);
    out.push_str("Ts_seconds,residual\n");
    for (t, r) in periods.iter().zip(outcome.residuals()) {
        out.push_str(&format!("{},{}\n", num(*t), num(*r)));
    }
    match outcome {
        ProbeOutcome::Exact { .. } => out.push_str("exact (residual at machine precision)\n"),
        ProbeOutcome::Slope { slope, .. } => out.push_str(&format!("slope: {}\n", num(slope))),
    }
    Ok(Outcome {
        stdout: out,
        files: Vec::new(),
    })
}
