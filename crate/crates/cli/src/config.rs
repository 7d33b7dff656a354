use std::path::{Path, PathBuf};
use std::str::FromStr;

use charevo::gaussian::StateSpec;
use charevo::linalg::{c, re};
use charevo::params::{ComplexRepr, ParamsRecord};
use charevo::SystemParams;
use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Evolve,
    EofCurve,
    EofMap,
    PurityCurve,
    Pipeline,
    OracleCheck,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// System parameters: either the symmetric two-mode pair or the full record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamsSpec {
    Pair {
        eta1: f64,
        gamma: f64,
        #[serde(default)]
        nbar0: f64,
        #[serde(default)]
        gamma_phase: f64,
    },
    Full(ParamsRecord),
}

impl ParamsSpec {
    pub fn build(&self) -> CliResult<SystemParams> {
        match self {
            ParamsSpec::Pair { eta1, gamma, nbar0, gamma_phase } => {
                let p = SystemParams::two_mode_symmetric(re(*eta1), *gamma, *nbar0)?;
                Ok(p.with_gamma_phase(vec![*gamma_phase; 2])?)
            }
            ParamsSpec::Full(r) => Ok(SystemParams::try_from(r)?),
        }
    }

    fn set(&mut self, name: SweepParam, value: f64) {
        match self {
            ParamsSpec::Pair { eta1, gamma, nbar0, gamma_phase } => match name {
                SweepParam::Eta1 => *eta1 = value,
                SweepParam::EtaRatio => *eta1 = value * *gamma,
                SweepParam::Nbar0 => *nbar0 = value,
                SweepParam::Gamma => *gamma = value,
                SweepParam::GammaPhase => *gamma_phase = value,
            },
            ParamsSpec::Full(r) => {
                let s = r.eta.len();
                match name {
                    SweepParam::Eta1 | SweepParam::EtaRatio => {
                        let scale = if name == SweepParam::EtaRatio {
                            r.gamma_amp.first().copied().unwrap_or(0.0)
                        } else {
                            1.0
                        };
                        let z = ComplexRepr::from(c(value * scale, 0.0));
                        if s == 1 {
                            r.eta[0][0] = z;
                        } else if s > 1 {
                            r.eta[0][1] = z;
                            r.eta[1][0] = z;
                        }
                    }
                    SweepParam::Nbar0 => r.nbar = vec![value; s],
                    SweepParam::Gamma => r.gamma_amp = vec![value; s],
                    SweepParam::GammaPhase => r.gamma_phase = vec![value; s],
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    /// Drive `η₁`: the pair coupling, the one-mode `η` or the off-diagonal `η₀₁`.
    Eta1,
    /// Drive in units of the first damping rate, `η₁/Γ`.
    EtaRatio,
    /// Bath occupation of every mode.
    Nbar0,
    /// Amplitude damping rate of every mode.
    Gamma,
    /// Phase damping rate of every mode.
    GammaPhase,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::Eta1 => "eta1",
            SweepParam::EtaRatio => "eta_ratio",
            SweepParam::Nbar0 => "nbar0",
            SweepParam::Gamma => "gamma",
            SweepParam::GammaPhase => "gamma_phase",
        }
    }
}

impl FromStr for SweepParam {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        Ok(match s {
            "eta1" => SweepParam::Eta1,
            "eta_ratio" => SweepParam::EtaRatio,
            "nbar0" => SweepParam::Nbar0,
            "gamma" => SweepParam::Gamma,
            "gamma_phase" => SweepParam::GammaPhase,
            _ => {
                return Err(CliError::Config(format!(
                    "unknown sweep parameter {s:?} (expected eta1, eta_ratio, nbar0, gamma or gamma_phase)"
                )))
            }
        })
    }
}

/// One grid axis, `min + (max − min)k/(steps − 1)` for `k < steps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepAxis {
    pub name: SweepParam,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl SweepAxis {
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let span = self.max - self.min;
        (0..self.steps).map(|k| self.min + span * k as f64 / (self.steps - 1) as f64).collect()
    }

    fn validate(&self) -> CliResult<()> {
        if self.steps == 0 {
            return Err(CliError::Config(format!("sweep {} needs steps ≥ 1", self.name.name())));
        }
        if !self.min.is_finite() || !self.max.is_finite() || self.max < self.min {
            return Err(CliError::Config(format!("sweep {} needs finite min ≤ max", self.name.name())));
        }
        Ok(())
    }
}

/// Parses `name=min:max:steps`.
impl FromStr for SweepAxis {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        let bad = || CliError::Config(format!("sweep {s:?} is not name=min:max:steps"));
        let (name, range) = s.split_once('=').ok_or_else(bad)?;
        let parts: Vec<&str> = range.split(':').collect();
        let [min, max, steps] = parts.as_slice() else { return Err(bad()) };
        let axis = SweepAxis {
            name: name.trim().parse()?,
            min: min.trim().parse().map_err(|_| bad())?,
            max: max.trim().parse().map_err(|_| bad())?,
            steps: steps.trim().parse().map_err(|_| bad())?,
        };
        axis.validate()?;
        Ok(axis)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TimesSpec {
    List(Vec<f64>),
    Range { start: f64, stop: f64, steps: usize },
}

impl TimesSpec {
    pub fn values(&self) -> CliResult<Vec<f64>> {
        let v = match self {
            TimesSpec::List(v) => v.clone(),
            TimesSpec::Range { start, stop, steps } => {
                SweepAxis { name: SweepParam::Gamma, min: *start, max: *stop, steps: *steps }.values()
            }
        };
        if v.is_empty() {
            return Err(CliError::Config("times must not be empty".into()));
        }
        if v.iter().any(|t| !t.is_finite() || *t < 0.0) {
            return Err(CliError::Config("times must be finite and non-negative".into()));
        }
        Ok(v)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default)]
    pub path: Option<PathBuf>,
    /// CSV for tables; oracle-check and pipeline default to JSON.
    #[serde(default)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSettings {
    #[serde(default)]
    pub cutoff: Option<usize>,
    #[serde(default)]
    pub dt: Option<f64>,
}

/// One pipeline stage: evolve under `params` for `duration`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageSpec {
    pub params: ParamsSpec,
    pub duration: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub mode: Option<Command>,
    #[serde(default)]
    pub params: Option<ParamsSpec>,
    #[serde(default)]
    pub initial: Option<StateSpec>,
    #[serde(default)]
    pub times: Option<TimesSpec>,
    #[serde(default)]
    pub sweep: Vec<SweepAxis>,
    #[serde(default)]
    pub output: OutputSpec,
    #[serde(default)]
    pub oracle: Option<OracleSettings>,
    #[serde(default)]
    pub stages: Vec<StageSpec>,
    #[serde(default)]
    pub tol: Option<f64>,
    #[serde(default)]
    pub quad_order: Option<usize>,
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| CliError::ReadConfig { path: path.display().to_string(), source })?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn validate(&self) -> CliResult<()> {
        for axis in &self.sweep {
            axis.validate()?;
        }
        for (i, a) in self.sweep.iter().enumerate() {
            if self.sweep[..i].iter().any(|b| b.name == a.name) {
                return Err(CliError::Config(format!("sweep parameter {} given twice", a.name.name())));
            }
        }
        if let Some(t) = &self.times {
            t.values()?;
        }
        if let Some(tol) = self.tol {
            if !(tol > 0.0) {
                return Err(CliError::Config("tol must be positive".into()));
            }
        }
        if self.quad_order == Some(0) {
            return Err(CliError::Config("quad_order must be positive".into()));
        }
        if let Some(o) = &self.oracle {
            if o.cutoff == Some(0) || o.dt.is_some_and(|dt| !(dt > 0.0)) {
                return Err(CliError::Config("oracle cutoff and dt must be positive".into()));
            }
        }
        for s in &self.stages {
            if !(s.duration >= 0.0) || !s.duration.is_finite() {
                return Err(CliError::Config("stage durations must be finite and non-negative".into()));
            }
        }
        Ok(())
    }

    pub fn params_spec(&self) -> CliResult<&ParamsSpec> {
        self.params.as_ref().ok_or_else(|| CliError::Config("params missing".into()))
    }

    pub fn times(&self) -> CliResult<Vec<f64>> {
        self.times.as_ref().ok_or_else(|| CliError::Config("times missing".into()))?.values()
    }

    /// Cartesian product of the sweep axes, first axis slowest. A config
    /// without sweep yields the single unswept point.
    pub fn grid(&self) -> Vec<Vec<f64>> {
        let mut cells = vec![Vec::new()];
        for axis in &self.sweep {
            let values = axis.values();
            cells = cells
                .into_iter()
                .flat_map(|cell| {
                    values.iter().map(move |&v| {
                        let mut next = cell.clone();
                        next.push(v);
                        next
                    })
                })
                .collect();
        }
        cells
    }

    /// Parameters of one grid cell. `eta_ratio` is applied last so it scales
    /// the swept damping rate.
    pub fn params_at(&self, cell: &[f64]) -> CliResult<SystemParams> {
        let mut spec = self.params_spec()?.clone();
        let mut ordered: Vec<(SweepParam, f64)> = self.sweep.iter().map(|a| a.name).zip(cell.iter().copied()).collect();
        ordered.sort_by_key(|(name, _)| *name == SweepParam::EtaRatio);
        for (name, value) in ordered {
            spec.set(name, value);
        }
        spec.build()
    }

    pub fn sweep_columns(&self) -> Vec<String> {
        self.sweep.iter().map(|a| a.name.name().to_string()).collect()
    }
}
