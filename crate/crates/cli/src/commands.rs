use charevo::charfunc::{
    evolve_chi_amp_phase, evolve_chi_general, evolve_chi_phase_damping, purity_from_chi, square_grid,
    DEFAULT_QUAD_ORDER,
};
use charevo::fock::{chi_from_rho, purity_from_rho, state_to_fock, FockRun, Integrator};
use charevo::gaussian::StateSpec;
use charevo::metrics::{eof_saturation, eof_time_curve, purity_general};
use charevo::{evolve_gaussian, CharFunc, Error, GaussianState, OracleReport, ParamsRecord, SystemParams, C64};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{ParamsSpec, RunConfig, SweepAxis, SweepParam};
use crate::error::{CliError, CliResult};
use crate::table::Table;

pub const DEFAULT_TOL: f64 = 1e-4;
pub const DEFAULT_ORACLE_DT: f64 = 1e-3;
const PURITY_QUAD_ORDER: usize = 48;
/// Automatic cutoff doublings when the default cutoff loses too much trace.
const MAX_CUTOFF_DOUBLINGS: usize = 2;

/// Evaluates every sweep cell in parallel and concatenates the rows in grid order.
fn sweep_rows<F>(cfg: &RunConfig, f: F) -> CliResult<Vec<Vec<f64>>>
where
    F: Fn(&SystemParams) -> CliResult<Vec<Vec<f64>>> + Sync,
{
    let cells = cfg.grid();
    let results: Vec<CliResult<Vec<Vec<f64>>>> = cells
        .par_iter()
        .map(|cell| {
            let p = cfg.params_at(cell)?;
            Ok(f(&p)?.into_iter().map(|row| cell.iter().copied().chain(row).collect()).collect())
        })
        .collect();
    let mut rows = Vec::new();
    for r in results {
        rows.extend(r?);
    }
    Ok(rows)
}

fn gaussian_initial(cfg: &RunConfig, modes: usize) -> CliResult<GaussianState> {
    let spec = cfg.initial.clone().unwrap_or(StateSpec::Vacuum { modes });
    if spec.modes() != modes {
        return Err(CliError::Config(format!("initial state has {} modes, params have {modes}", spec.modes())));
    }
    if !spec.is_gaussian() {
        return Err(CliError::Config("this command needs a Gaussian initial state".into()));
    }
    Ok(spec.to_gaussian()?)
}

fn modes_of(cfg: &RunConfig) -> CliResult<usize> {
    Ok(cfg.params_at(&cfg.grid()[0])?.modes())
}

/// `(t, σ_ij for i ≤ j, Re m_j, Im m_j, purity)` per time.
pub fn evolve(cfg: &RunConfig) -> CliResult<Table> {
    let times = cfg.times()?;
    let s = modes_of(cfg)?;
    let init = gaussian_initial(cfg, s)?;
    let mut columns = cfg.sweep_columns();
    columns.push("t".into());
    for i in 0..2 * s {
        for j in i..2 * s {
            columns.push(format!("sigma_{i}_{j}"));
        }
    }
    for j in 0..s {
        columns.push(format!("m{j}_re"));
        columns.push(format!("m{j}_im"));
    }
    columns.push("purity".into());
    let rows = sweep_rows(cfg, |p| {
        times
            .iter()
            .map(|&t| {
                let g = evolve_gaussian(&init, p, t)?;
                let rcm = g.to_real()?;
                let mut row = vec![t];
                for i in 0..2 * s {
                    for j in i..2 * s {
                        row.push(rcm.matrix()[(i, j)]);
                    }
                }
                for m in g.mean().iter() {
                    row.push(m.re);
                    row.push(m.im);
                }
                row.push(purity_general(&g)?);
                Ok(row)
            })
            .collect()
    })?;
    Ok(Table { columns, rows })
}

/// `(t, purity)` per time.
pub fn purity_curve(cfg: &RunConfig) -> CliResult<Table> {
    let times = cfg.times()?;
    let init = gaussian_initial(cfg, modes_of(cfg)?)?;
    let mut columns = cfg.sweep_columns();
    columns.extend(["t".into(), "purity".into()]);
    let rows = sweep_rows(cfg, |p| {
        times.iter().map(|&t| Ok(vec![t, purity_general(&evolve_gaussian(&init, p, t)?)?])).collect()
    })?;
    Ok(Table { columns, rows })
}

/// `(t, z, E_f)` per time for the symmetric pair.
pub fn eof_curve(cfg: &RunConfig) -> CliResult<Table> {
    let times = cfg.times()?;
    let init = gaussian_initial(cfg, 2)?;
    let mut columns = cfg.sweep_columns();
    columns.extend(["t".into(), "z".into(), "eof".into()]);
    let rows = sweep_rows(cfg, |p| {
        let curve = eof_time_curve(p, &init, &times)?;
        Ok(times.iter().zip(curve).map(|(&t, e)| vec![t, e.z, e.value]).collect())
    })?;
    Ok(Table { columns, rows })
}

/// Long-time `(z, E_f)` over the sweep grid, by default `η₁/Γ, n̄₀ ∈ [0, 1]` on 50 × 50 points.
pub fn eof_map(cfg: &RunConfig) -> CliResult<Table> {
    let mut cfg = cfg.clone();
    if cfg.params.is_none() {
        cfg.params = Some(ParamsSpec::Pair { eta1: 0.0, gamma: 1.0, nbar0: 0.0, gamma_phase: 0.0 });
    }
    if cfg.sweep.is_empty() {
        cfg.sweep = vec![
            SweepAxis { name: SweepParam::EtaRatio, min: 0.0, max: 1.0, steps: 50 },
            SweepAxis { name: SweepParam::Nbar0, min: 0.0, max: 1.0, steps: 50 },
        ];
    }
    let mut columns = cfg.sweep_columns();
    columns.extend(["z".into(), "eof".into()]);
    let rows = sweep_rows(&cfg, |p| {
        let e = eof_saturation(p)?;
        Ok(vec![vec![e.z, e.value]])
    })?;
    Ok(Table { columns, rows })
}

/// Pointwise evolution for any initial characteristic function. Stages with
/// phase damping need `η = 0`.
pub fn evolve_pointwise(chi: &CharFunc, p: &SystemParams, t: f64, quad_order: usize) -> CliResult<CharFunc> {
    if !p.has_phase_damping() {
        return Ok(evolve_chi_general(chi, p, t)?);
    }
    if !p.eta_is_zero() {
        return Err(Error::Unsupported("amplification together with phase damping has no solution".into()).into());
    }
    if p.has_amplitude_damping() {
        Ok(evolve_chi_amp_phase(chi, p, t, quad_order)?)
    } else {
        Ok(evolve_chi_phase_damping(chi, p, t, quad_order)?)
    }
}

/// Probe points: the 25-point square `|Re μ|, |Im μ| ≤ 2` for one mode, a
/// 9 × 9 product of `|Re μ|, |Im μ| ≤ 1` squares for two modes.
pub fn probe_points(modes: usize) -> Vec<Vec<C64>> {
    match modes {
        1 => square_grid(5, 2.0).into_iter().map(|z| vec![z]).collect(),
        _ => {
            let g = square_grid(3, 1.0);
            let mut pts = vec![Vec::new()];
            for _ in 0..modes {
                pts = pts.into_iter().flat_map(|p| g.iter().map(move |&z| [p.clone(), vec![z]].concat())).collect();
            }
            pts
        }
    }
}

enum PipeState {
    Gaussian(GaussianState),
    Pointwise(CharFunc),
}

impl PipeState {
    fn purity(&self) -> CliResult<f64> {
        match self {
            PipeState::Gaussian(g) => Ok(purity_general(g)?),
            PipeState::Pointwise(chi) if chi.modes() == 1 => {
                Ok(purity_from_chi(chi, PURITY_QUAD_ORDER, PURITY_QUAD_ORDER)?)
            }
            PipeState::Pointwise(_) => Ok(f64::NAN),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FinalState {
    Gaussian {
        mean: Vec<[f64; 2]>,
        real_cm: Vec<Vec<f64>>,
    },
    /// Rows of `(Re μ_j, Im μ_j …, Re χ, Im χ)` on the probe points.
    Pointwise {
        chi: Vec<Vec<f64>>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineResult {
    pub stages: Table,
    #[serde(rename = "final")]
    pub final_state: FinalState,
}

/// Applies the stages in order. Gaussian stages stay exact on the covariance
/// matrix; the first phase-damping stage or a non-Gaussian start switches to
/// pointwise characteristic functions, where purity is reported for one mode only.
pub fn pipeline(cfg: &RunConfig) -> CliResult<PipelineResult> {
    if !cfg.sweep.is_empty() {
        return Err(CliError::Config("pipeline does not take a sweep".into()));
    }
    let stages = cfg.stages.iter().map(|s| Ok((s.params.build()?, s.duration))).collect::<CliResult<Vec<_>>>()?;
    let spec = match (&cfg.initial, stages.first()) {
        (Some(spec), _) => spec.clone(),
        (None, Some((p, _))) => StateSpec::Vacuum { modes: p.modes() },
        (None, None) => return Err(CliError::Config("pipeline needs an initial state or a stage".into())),
    };
    if let Some((p, _)) = stages.iter().find(|(p, _)| p.modes() != spec.modes()) {
        return Err(CliError::Config(format!("stage has {} modes, initial state {}", p.modes(), spec.modes())));
    }
    let order = cfg.quad_order.unwrap_or(DEFAULT_QUAD_ORDER);
    let mut state = if spec.is_gaussian() {
        PipeState::Gaussian(spec.to_gaussian()?)
    } else {
        PipeState::Pointwise(CharFunc::from_spec(&spec)?)
    };
    let mut table = Table::new(vec!["stage".into(), "t".into(), "gaussian".into(), "purity".into()]);
    let mut t = 0.0;
    let gaussian_flag = |s: &PipeState| if matches!(s, PipeState::Gaussian(_)) { 1.0 } else { 0.0 };
    table.rows.push(vec![0.0, t, gaussian_flag(&state), state.purity()?]);
    for (k, (p, duration)) in stages.iter().enumerate() {
        state = match state {
            PipeState::Gaussian(g) if !p.has_phase_damping() => PipeState::Gaussian(evolve_gaussian(&g, p, *duration)?),
            PipeState::Gaussian(g) => {
                PipeState::Pointwise(evolve_pointwise(&CharFunc::gaussian(g), p, *duration, order)?)
            }
            PipeState::Pointwise(chi) => PipeState::Pointwise(evolve_pointwise(&chi, p, *duration, order)?),
        };
        t += duration;
        table.rows.push(vec![(k + 1) as f64, t, gaussian_flag(&state), state.purity()?]);
    }
    let final_state = match &state {
        PipeState::Gaussian(g) => FinalState::Gaussian {
            mean: g.mean().iter().map(|z| [z.re, z.im]).collect(),
            real_cm: g.to_real()?.matrix().row_iter().map(|r| r.iter().copied().collect()).collect(),
        },
        PipeState::Pointwise(chi) => {
            let chi_rows = probe_points(chi.modes())
                .into_iter()
                .map(|mu| {
                    let v = chi.eval(&mu)?;
                    Ok(mu.iter().flat_map(|z| [z.re, z.im]).chain([v.re, v.im]).collect())
                })
                .collect::<CliResult<Vec<_>>>()?;
            FinalState::Pointwise { chi: chi_rows }
        }
    };
    Ok(PipelineResult { stages: table, final_state })
}

/// Outcome of an oracle comparison: the report and whether it met the tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleOutcome {
    pub report: OracleReport,
    pub tol: f64,
}

impl OracleOutcome {
    pub fn passed(&self) -> bool {
        let ok = |x: f64| x.is_nan() || x <= self.tol;
        ok(self.report.max_abs_chi_error) && ok(self.report.max_purity_error)
    }
}

fn default_cutoff(modes: usize) -> usize {
    if modes == 1 {
        30
    } else {
        14
    }
}

/// Runs the Fock-space integrator next to the analytic solution at every
/// configured time and reports the largest deviations. Purity is compared
/// where an analytic value is available (Gaussian runs, or one mode).
pub fn oracle_check(cfg: &RunConfig) -> CliResult<OracleOutcome> {
    if !cfg.sweep.is_empty() {
        return Err(CliError::Config("oracle-check does not take a sweep".into()));
    }
    let p = cfg.params_spec()?.build()?;
    let s = p.modes();
    if s > 2 {
        return Err(CliError::Config("the Fock oracle covers one or two modes".into()));
    }
    let spec = cfg.initial.clone().unwrap_or(StateSpec::Vacuum { modes: s });
    if spec.modes() != s {
        return Err(CliError::Config(format!("initial state has {} modes, params have {s}", spec.modes())));
    }
    let times = cfg.times()?;
    let t_max = times.iter().copied().fold(0.0, f64::max);
    let eta_norm = p.eta().iter().map(|z| z.norm()).fold(0.0, f64::max);
    if charevo::evolution::max_drift_eigenvalue(&p) >= 0.0 && eta_norm * t_max > 1.0 {
        return Err(CliError::Config("over-amplified oracle runs are limited to |η|t ≤ 1".into()));
    }
    let settings = cfg.oracle.clone().unwrap_or_default();
    let dt = settings.dt.unwrap_or(DEFAULT_ORACLE_DT);
    let order = cfg.quad_order.unwrap_or(DEFAULT_QUAD_ORDER);

    let (cutoff, runs) = match settings.cutoff {
        Some(cutoff) => (cutoff, run_oracle(&spec, &p, &times, cutoff, dt)?),
        None => {
            let mut cutoff = default_cutoff(s);
            let mut doublings = 0;
            loop {
                match run_oracle(&spec, &p, &times, cutoff, dt) {
                    Ok(runs) => break (cutoff, runs),
                    Err(CliError::Core(Error::CutoffTooSmall { suggested, .. }))
                        if doublings < MAX_CUTOFF_DOUBLINGS =>
                    {
                        cutoff = suggested;
                        doublings += 1;
                    }
                    Err(e) => return Err(e),
                }
            }
        }
    };

    let chi0 = CharFunc::from_spec(&spec)?;
    let gaussian_start = spec.is_gaussian().then(|| spec.to_gaussian()).transpose()?;
    let probes = probe_points(s);
    let mut report = OracleReport {
        params: ParamsRecord::from(&p),
        cutoff,
        dt,
        trace_loss: 0.0,
        max_abs_chi_error: 0.0,
        max_purity_error: f64::NAN,
    };
    for (run, &t) in runs.iter().zip(&times) {
        report.trace_loss = report.trace_loss.max(run.trace_loss);
        let chi = evolve_pointwise(&chi0, &p, t, order)?;
        for mu in &probes {
            let err = (chi.eval(mu)? - chi_from_rho(&run.rho, mu)?).norm();
            report.max_abs_chi_error = report.max_abs_chi_error.max(err);
        }
        let analytic = match &gaussian_start {
            Some(g) if !p.has_phase_damping() => purity_general(&evolve_gaussian(g, &p, t)?)?,
            _ if s == 1 => purity_from_chi(&chi, PURITY_QUAD_ORDER, PURITY_QUAD_ORDER)?,
            _ => continue,
        };
        let err = (analytic - purity_from_rho(&run.rho)).abs();
        report.max_purity_error = if report.max_purity_error.is_nan() { err } else { report.max_purity_error.max(err) };
    }
    Ok(OracleOutcome { report, tol: cfg.tol.unwrap_or(DEFAULT_TOL) })
}

fn run_oracle(spec: &StateSpec, p: &SystemParams, times: &[f64], cutoff: usize, dt: f64) -> CliResult<Vec<FockRun>> {
    let rho0 = state_to_fock(spec, cutoff)?;
    Ok(Integrator::new(rho0.space(), p)?.run(&rho0, times, dt)?)
}
