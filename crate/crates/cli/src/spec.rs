//! JSON cycle description files.

use std::fs;
use std::path::Path;

use pwlrec_core::{ConverterModel, InjectionChannel, RealMatrix, SubintervalModel, SwitchingCycle};
use serde::Deserialize;

use crate::CliError;

/// Relative tolerance between `Ts_seconds` and the sum of `T_seconds`.
pub const PERIOD_SUM_RTOL: f64 = 1e-9;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubintervalSpec {
    #[serde(rename = "A")]
    pub a: Vec<Vec<f64>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<f64>>,
    #[serde(rename = "T_seconds")]
    pub t_seconds: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CycleSpecFile {
    /// Free text, ignored by the tool.
    #[serde(default)]
    pub description: Option<String>,
    pub state_dim: usize,
    pub input_dim: usize,
    #[serde(rename = "Ts_seconds")]
    pub ts_seconds: f64,
    pub u: Vec<f64>,
    pub subintervals: Vec<SubintervalSpec>,
    /// Present when the small-signal input is the duty perturbation.
    #[serde(default)]
    pub duty: Option<f64>,
    #[serde(rename = "output_C")]
    pub output_c: Vec<Vec<f64>>,
    #[serde(rename = "output_D", default)]
    pub output_d: Option<Vec<Vec<f64>>>,
    /// Linear state reset applied at the end of every period.
    #[serde(default)]
    pub jump: Option<Vec<Vec<f64>>>,
}

impl CycleSpecFile {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| {
            let full = e.to_string();
            // serde_json appends its own " at line L column C".
            let message = match full.rsplit_once(" at line ") {
                Some((head, _)) => head.to_string(),
                None => full,
            };
            CliError::Parse {
                line: e.line(),
                column: e.column(),
                message,
            }
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn channel(&self) -> InjectionChannel {
        if self.duty.is_some() {
            InjectionChannel::Duty
        } else {
            InjectionChannel::Source
        }
    }

    /// Checks declared shapes and the period sum, then builds the model.
    /// Shape problems are input errors; model-level failures come back as
    /// numerical errors.
    pub fn to_model(&self) -> Result<ConverterModel, CliError> {
        let (n, p) = (self.state_dim, self.input_dim);
        if n == 0 || p == 0 {
            return Err(spec_err("state_dim and input_dim must be positive"));
        }
        if !(self.ts_seconds.is_finite() && self.ts_seconds > 0.0) {
            return Err(spec_err("Ts_seconds must be positive"));
        }
        if self.u.len() != p {
            return Err(spec_err(format!(
                "u has length {}, input_dim is {p}",
                self.u.len()
            )));
        }
        if self.subintervals.is_empty() {
            return Err(spec_err("subintervals must not be empty"));
        }
        let mut subs = Vec::with_capacity(self.subintervals.len());
        for (k, s) in self.subintervals.iter().enumerate() {
            let key = |name: &str| format!("subintervals[{k}].{name}");
            let a = matrix(&s.a, n, n, &key("A"))?;
            let b = matrix(&s.b, n, p, &key("B"))?;
            if !(s.t_seconds.is_finite() && s.t_seconds > 0.0) {
                return Err(spec_err(format!("{} must be positive", key("T_seconds"))));
            }
            subs.push(SubintervalModel::new(a, b, s.t_seconds)?);
        }
        let total: f64 = self.subintervals.iter().map(|s| s.t_seconds).sum();
        if (total - self.ts_seconds).abs() > PERIOD_SUM_RTOL * self.ts_seconds {
            return Err(spec_err(format!(
                "T_seconds sum to {total:e}, Ts_seconds is {:e}",
                self.ts_seconds
            )));
        }
        if let Some(d) = self.duty {
            if self.subintervals.len() == 2 {
                let implied = self.subintervals[1].t_seconds / total;
                if (implied - d).abs() > PERIOD_SUM_RTOL {
                    return Err(spec_err(format!(
                        "duty is {d}, second subinterval implies {implied}"
                    )));
                }
            }
        }
        let q = self.output_c.len();
        let c = matrix(&self.output_c, q.max(1), n, "output_C")?;
        let p_channel = if self.duty.is_some() { 1 } else { p };
        let d = self
            .output_d
            .as_ref()
            .map(|rows| matrix(rows, q, p_channel, "output_D"))
            .transpose()?;

        let mut cycle = SwitchingCycle::new(subs, self.u.clone())?;
        if let Some(j) = &self.jump {
            cycle = cycle.with_terminal_jump(matrix(j, n, n, "jump")?)?;
        }
        Ok(ConverterModel::new(cycle, c, d, self.channel())?)
    }
}

fn spec_err(msg: impl Into<String>) -> CliError {
    CliError::Spec(msg.into())
}

fn matrix(rows: &[Vec<f64>], r: usize, c: usize, key: &str) -> Result<RealMatrix, CliError> {
    if rows.len() != r || rows.iter().any(|row| row.len() != c) {
        let got_cols = rows.first().map_or(0, Vec::len);
        return Err(spec_err(format!(
            "{key} must be {r}x{c}, got {}x{got_cols}",
            rows.len()
        )));
    }
    RealMatrix::from_rows(rows).map_err(|e| spec_err(format!("{key}: {e}")))
}
