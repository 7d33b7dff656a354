//! Master-equation parameters: parametric drive, amplitude damping with a
//! (possibly squeezed) thermal bath, and phase damping.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{block2, c, conj, diag_complex, diag_real, re, CMat, C64};

const SYMMETRY_TOL: f64 = 1e-12;

/// Parameters of the optical master equation for `s` modes.
///
/// `eta` is the complex symmetric amplification matrix, `gamma_amp[j]` the
/// amplitude damping rate of mode `j`, `nbar[j]` its bath occupation,
/// `w[j]` the bath squeezing and `gamma_phase[j]` the dephasing rate.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams {
    eta: CMat,
    gamma_amp: Vec<f64>,
    nbar: Vec<f64>,
    w: Vec<C64>,
    gamma_phase: Vec<f64>,
}

impl SystemParams {
    pub fn new(eta: CMat, gamma_amp: Vec<f64>, nbar: Vec<f64>, w: Vec<C64>, gamma_phase: Vec<f64>) -> Result<Self> {
        let s = eta.nrows();
        if s == 0 || !eta.is_square() {
            return Err(Error::InvalidParameter("eta must be a non-empty square matrix".into()));
        }
        for (name, len) in
            [("gamma_amp", gamma_amp.len()), ("nbar", nbar.len()), ("w", w.len()), ("gamma_phase", gamma_phase.len())]
        {
            if len != s {
                return Err(Error::InvalidParameter(format!("{name} has {len} entries for {s} modes")));
            }
        }
        let scale = eta.iter().fold(1.0f64, |a, z| a.max(z.norm()));
        for j in 0..s {
            for k in 0..j {
                if (eta[(j, k)] - eta[(k, j)]).norm() > SYMMETRY_TOL * scale {
                    return Err(Error::InvalidParameter("eta must be symmetric".into()));
                }
            }
        }
        if eta.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParameter("eta must be finite".into()));
        }
        for j in 0..s {
            if !(gamma_amp[j] >= 0.0) || !gamma_amp[j].is_finite() {
                return Err(Error::InvalidParameter(format!("gamma_amp[{j}] must be >= 0")));
            }
            if !(nbar[j] >= 0.0) || !nbar[j].is_finite() {
                return Err(Error::InvalidParameter(format!("nbar[{j}] must be >= 0")));
            }
            if !(gamma_phase[j] >= 0.0) || !gamma_phase[j].is_finite() {
                return Err(Error::InvalidParameter(format!("gamma_phase[{j}] must be >= 0")));
            }
            let bound = nbar[j] * (nbar[j] + 1.0);
            if w[j].norm_sqr() > bound * (1.0 + 1e-12) + 1e-15 {
                return Err(Error::InvalidParameter(format!(
                    "|w[{j}]|^2 = {} exceeds nbar(nbar+1) = {bound}",
                    w[j].norm_sqr()
                )));
            }
        }
        Ok(Self { eta, gamma_amp, nbar, w, gamma_phase })
    }

    /// One mode with drive `eta`, damping `gamma`, bath `nbar`, squeezing `w`.
    pub fn one_mode(eta: C64, gamma: f64, nbar: f64, w: C64) -> Result<Self> {
        Self::new(CMat::from_element(1, 1, eta), vec![gamma], vec![nbar], vec![w], vec![0.0])
    }

    /// Two modes driven by `eta1 σ₁` with equal damping and equal thermal noise.
    pub fn two_mode_symmetric(eta1: C64, gamma: f64, nbar0: f64) -> Result<Self> {
        let z = c(0.0, 0.0);
        let eta = CMat::from_row_slice(2, 2, &[z, eta1, eta1, z]);
        Self::new(eta, vec![gamma; 2], vec![nbar0; 2], vec![z; 2], vec![0.0; 2])
    }

    /// Pure dephasing of `s` modes.
    pub fn phase_damping(gamma_phase: Vec<f64>) -> Result<Self> {
        let s = gamma_phase.len();
        Self::new(CMat::zeros(s, s), vec![0.0; s], vec![0.0; s], vec![c(0.0, 0.0); s], gamma_phase)
    }

    pub fn with_gamma_phase(mut self, gamma_phase: Vec<f64>) -> Result<Self> {
        self.gamma_phase = gamma_phase;
        Self::new(self.eta, self.gamma_amp, self.nbar, self.w, self.gamma_phase)
    }

    pub fn modes(&self) -> usize {
        self.eta.nrows()
    }
    pub fn eta(&self) -> &CMat {
        &self.eta
    }
    pub fn gamma_amp(&self) -> &[f64] {
        &self.gamma_amp
    }
    pub fn nbar(&self) -> &[f64] {
        &self.nbar
    }
    pub fn w(&self) -> &[C64] {
        &self.w
    }
    pub fn gamma_phase(&self) -> &[f64] {
        &self.gamma_phase
    }

    /// The common damping rate when every mode is damped equally.
    pub fn equal_damping(&self) -> Option<f64> {
        let g0 = self.gamma_amp[0];
        let scale = g0.abs().max(1.0);
        self.gamma_amp.iter().all(|g| (g - g0).abs() <= 1e-14 * scale).then_some(g0)
    }

    pub fn eta_is_real(&self) -> bool {
        let scale = self.eta.iter().fold(1.0f64, |a, z| a.max(z.norm()));
        self.eta.iter().all(|z| z.im.abs() <= 1e-14 * scale)
    }

    pub fn eta_is_zero(&self) -> bool {
        self.eta.iter().all(|z| *z == c(0.0, 0.0))
    }

    pub fn has_amplitude_damping(&self) -> bool {
        self.gamma_amp.iter().any(|&g| g != 0.0)
    }

    pub fn has_phase_damping(&self) -> bool {
        self.gamma_phase.iter().any(|&g| g != 0.0)
    }

    pub fn has_squeezed_bath(&self) -> bool {
        self.w.iter().any(|z| *z != c(0.0, 0.0))
    }

    pub fn gamma_matrix(&self) -> CMat {
        diag_real(&self.gamma_amp)
    }

    /// Drift generator `[[-Γ/2, η*], [η, -Γ/2]]` of the block propagator.
    pub fn drift(&self) -> CMat {
        let half_gamma = self.gamma_matrix() * re(-0.5);
        block2(&half_gamma, &conj(&self.eta), &self.eta, &half_gamma)
    }

    /// Diffusion matrix `[[Γ(n̄+½), Γw*], [Γw, Γ(n̄+½)]]` of the complex CM.
    pub fn diffusion(&self) -> CMat {
        let s = self.modes();
        let d: Vec<f64> = (0..s).map(|j| self.gamma_amp[j] * (self.nbar[j] + 0.5)).collect();
        let gw: Vec<C64> = (0..s).map(|j| self.w[j] * self.gamma_amp[j]).collect();
        let gws: Vec<C64> = gw.iter().map(|z| z.conj()).collect();
        block2(&diag_real(&d), &diag_complex(&gws), &diag_complex(&gw), &diag_real(&d))
    }
}

/// A complex number in JSON: either a bare real or `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexRepr {
    Real(f64),
    Pair([f64; 2]),
}

impl From<ComplexRepr> for C64 {
    fn from(v: ComplexRepr) -> Self {
        match v {
            ComplexRepr::Real(x) => c(x, 0.0),
            ComplexRepr::Pair([x, y]) => c(x, y),
        }
    }
}

impl From<C64> for ComplexRepr {
    fn from(z: C64) -> Self {
        ComplexRepr::Pair([z.re, z.im])
    }
}

/// Serializable form of [`SystemParams`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamsRecord {
    pub eta: Vec<Vec<ComplexRepr>>,
    pub gamma_amp: Vec<f64>,
    #[serde(default)]
    pub nbar: Vec<f64>,
    #[serde(default)]
    pub w: Vec<ComplexRepr>,
    #[serde(default)]
    pub gamma_phase: Vec<f64>,
}

impl TryFrom<&ParamsRecord> for SystemParams {
    type Error = Error;

    fn try_from(r: &ParamsRecord) -> Result<Self> {
        let s = r.eta.len();
        if r.eta.iter().any(|row| row.len() != s) {
            return Err(Error::InvalidParameter("eta must be square".into()));
        }
        let eta = CMat::from_fn(s, s, |i, j| r.eta[i][j].into());
        let or_zero = |v: &Vec<f64>| if v.is_empty() { vec![0.0; s] } else { v.clone() };
        let w = if r.w.is_empty() { vec![c(0.0, 0.0); s] } else { r.w.iter().map(|&z| z.into()).collect() };
        SystemParams::new(eta, r.gamma_amp.clone(), or_zero(&r.nbar), w, or_zero(&r.gamma_phase))
    }
}

impl From<&SystemParams> for ParamsRecord {
    fn from(p: &SystemParams) -> Self {
        let s = p.modes();
        ParamsRecord {
            eta: (0..s).map(|i| (0..s).map(|j| p.eta[(i, j)].into()).collect()).collect(),
            gamma_amp: p.gamma_amp.clone(),
            nbar: p.nbar.clone(),
            w: p.w.iter().map(|&z| z.into()).collect(),
            gamma_phase: p.gamma_phase.clone(),
        }
    }
}
