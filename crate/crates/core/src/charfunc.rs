//! Pointwise characteristic functions `χ(μ) = tr[ρD(μ)]` and their time
//! evolution for arbitrary, including non-Gaussian, initial states.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::evolution::{evolve_gaussian_with, noise_matrix, propagate_mn, EvolveOptions};
use crate::gaussian::{GaussianState, StateSpec};
use crate::linalg::{c, re, CMat, C64};
use crate::params::SystemParams;
use crate::quadrature::{gauss_hermite, gauss_legendre, Rule};

pub const DEFAULT_QUAD_ORDER: usize = 64;
/// Largest change allowed when the quadrature order is doubled.
pub const QUAD_DOUBLING_TOL: f64 = 1e-8;

type Evaluator = dyn Fn(&[C64]) -> Result<C64> + Send + Sync;

#[derive(Clone)]
pub struct CharFunc {
    modes: usize,
    eval: Arc<Evaluator>,
    gaussian: Option<GaussianState>,
}

impl fmt::Debug for CharFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CharFunc").field("modes", &self.modes).field("gaussian", &self.gaussian.is_some()).finish()
    }
}

impl CharFunc {
    /// Wraps a black-box evaluator.
    pub fn new<F>(modes: usize, f: F) -> Self
    where
        F: Fn(&[C64]) -> Result<C64> + Send + Sync + 'static,
    {
        Self { modes, eval: Arc::new(f), gaussian: None }
    }

    pub fn gaussian(state: GaussianState) -> Self {
        let backing = state.clone();
        Self {
            modes: state.modes(),
            eval: Arc::new(move |mu| Ok(eval_gaussian_chi(&backing, mu))),
            gaussian: Some(state),
        }
    }

    /// Product of number states `|n_1⟩ ⊗ … ⊗ |n_s⟩`, with
    /// `⟨n|D(μ)|n⟩ = e^{−|μ|²/2} L_n(|μ|²)`.
    pub fn fock_number(n: &[usize]) -> Self {
        let n = n.to_vec();
        Self::new(n.len(), move |mu| {
            Ok(n.iter()
                .zip(mu)
                .map(|(&k, z)| {
                    let x = z.norm_sqr();
                    re((-0.5 * x).exp() * laguerre(k, x))
                })
                .product())
        })
    }

    /// Characteristic function of a state family. Products with non-Gaussian
    /// factors multiply the factor functions mode-block by mode-block.
    pub fn from_spec(spec: &StateSpec) -> Result<Self> {
        if spec.is_gaussian() {
            return Ok(Self::gaussian(spec.to_gaussian()?));
        }
        match spec {
            StateSpec::Fock { n } => Ok(Self::fock_number(&[*n])),
            StateSpec::Product { factors } => {
                let parts = factors.iter().map(Self::from_spec).collect::<Result<Vec<_>>>()?;
                let modes = parts.iter().map(|f| f.modes).sum();
                Ok(Self::new(modes, move |mu| {
                    let mut offset = 0;
                    let mut acc = re(1.0);
                    for f in &parts {
                        acc *= f.eval(&mu[offset..offset + f.modes])?;
                        offset += f.modes;
                    }
                    Ok(acc)
                }))
            }
            _ => Err(Error::Unsupported("state family has no characteristic function".into())),
        }
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn is_gaussian(&self) -> bool {
        self.gaussian.is_some()
    }

    pub fn gaussian_state(&self) -> Option<&GaussianState> {
        self.gaussian.as_ref()
    }

    pub fn eval(&self, mu: &[C64]) -> Result<C64> {
        if mu.len() != self.modes {
            return Err(Error::Dimension { expected: self.modes, found: mu.len() });
        }
        (self.eval)(mu)
    }

    fn with_backing(mut self, g: Option<GaussianState>) -> Self {
        self.gaussian = g;
        self
    }
}

/// Laguerre polynomial `L_n(x)` by the three-term recurrence.
pub fn laguerre(n: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - x) * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `(μ, −μ*) γ (μ*, −μ)ᵀ`.
pub fn quadratic_form(cm: &CMat, mu: &[C64]) -> C64 {
    let s = mu.len();
    let u: Vec<C64> = mu.iter().copied().chain(mu.iter().map(|z| -z.conj())).collect();
    let v: Vec<C64> = mu.iter().map(|z| z.conj()).chain(mu.iter().map(|z| -z)).collect();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..2 * s {
        for j in 0..2 * s {
            acc += u[i] * cm[(i, j)] * v[j];
        }
    }
    acc
}

/// `exp[μm† − μ*mᵀ − ½(μ, −μ*)γ(μ*, −μ)ᵀ]`.
pub fn eval_gaussian_chi(state: &GaussianState, mu: &[C64]) -> C64 {
    let m = state.mean();
    let lin: C64 = mu.iter().zip(m.iter()).map(|(z, a)| z * a.conj() - z.conj() * a).sum();
    (lin - quadratic_form(state.cm(), mu) * 0.5).exp()
}

fn check_modes(chi0: &CharFunc, p: &SystemParams) -> Result<()> {
    if chi0.modes() != p.modes() {
        return Err(Error::Dimension { expected: p.modes(), found: chi0.modes() });
    }
    Ok(())
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::InvalidParameter(format!("time {t} must be finite and >= 0")));
    }
    Ok(())
}

fn evolved_backing(chi0: &CharFunc, p: &SystemParams, t: f64, opts: &EvolveOptions) -> Option<GaussianState> {
    chi0.gaussian_state().and_then(|g| evolve_gaussian_with(g, p, t, opts).ok())
}

/// Pure parametric amplification (`Γ = 0`): `χ(μ, t) = χ₀(μM + μ*N)`.
pub fn evolve_chi_amplification(chi0: &CharFunc, p: &SystemParams, t: f64) -> Result<CharFunc> {
    check_modes(chi0, p)?;
    check_time(t)?;
    if p.has_amplitude_damping() || p.has_phase_damping() {
        return Err(Error::Unsupported("amplification solution needs Γ = 0 and γ = 0".into()));
    }
    let opts = EvolveOptions::default();
    let (prop, _) = propagate_mn(p, t, &opts)?;
    let inner = chi0.clone();
    let backing = evolved_backing(chi0, p, t, &opts);
    Ok(CharFunc::new(p.modes(), move |mu| inner.eval(&prop.map_argument(mu))).with_backing(backing))
}

/// Pure amplitude damping (`η = 0`):
/// `χ(μe^{−Γt/2}, 0) exp{−Σ_j (1 − e^{−Γ_j t})[(n̄_j+½)|μ_j|² − ½w_j*μ_j² − ½w_jμ_j*²]}`.
pub fn evolve_chi_amplitude_damping(chi0: &CharFunc, p: &SystemParams, t: f64) -> Result<CharFunc> {
    check_modes(chi0, p)?;
    check_time(t)?;
    if !p.eta_is_zero() || p.has_phase_damping() {
        return Err(Error::Unsupported("amplitude-damping solution needs η = 0 and γ = 0".into()));
    }
    let decay: Vec<f64> = p.gamma_amp().iter().map(|g| (-0.5 * g * t).exp()).collect();
    let nbar = p.nbar().to_vec();
    let w = p.w().to_vec();
    let inner = chi0.clone();
    let backing = evolved_backing(chi0, p, t, &EvolveOptions::default());
    Ok(CharFunc::new(p.modes(), move |mu| {
        let scaled: Vec<C64> = mu.iter().zip(&decay).map(|(z, d)| z * d).collect();
        let mut expo = C64::new(0.0, 0.0);
        for j in 0..mu.len() {
            let f = 1.0 - decay[j] * decay[j];
            let z = mu[j];
            expo -=
                (re((nbar[j] + 0.5) * z.norm_sqr()) - w[j].conj() * z * z * 0.5 - w[j] * z.conj() * z.conj() * 0.5) * f;
        }
        Ok(inner.eval(&scaled)? * expo.exp())
    })
    .with_backing(backing))
}

/// Gauss–Hermite average of `f(x)` over independent normal phases `x_j` with
/// variances `var_j`; modes with zero variance are not integrated.
struct PhaseAverage {
    var: Vec<f64>,
    order: usize,
    rule: Rule,
    doubled: Rule,
}

impl PhaseAverage {
    fn new(var: Vec<f64>, order: usize) -> Result<Self> {
        Ok(Self { var, order, rule: gauss_hermite(order)?, doubled: gauss_hermite(2 * order)? })
    }

    fn average_with(&self, rule: &Rule, f: &dyn Fn(&[f64]) -> Result<C64>) -> Result<C64> {
        let active: Vec<usize> = (0..self.var.len()).filter(|&j| self.var[j] > 0.0).collect();
        let n = rule.len();
        let norm = std::f64::consts::PI.sqrt().powi(active.len() as i32);
        let total = n.pow(active.len() as u32);
        let mut phases = vec![0.0; self.var.len()];
        let mut acc = C64::new(0.0, 0.0);
        for idx in 0..total {
            let mut rest = idx;
            let mut weight = 1.0;
            for &j in &active {
                let k = rest % n;
                rest /= n;
                phases[j] = (2.0 * self.var[j]).sqrt() * rule.nodes[k];
                weight *= rule.weights[k];
            }
            acc += f(&phases)? * weight;
        }
        Ok(acc / norm)
    }

    fn average(&self, f: &dyn Fn(&[f64]) -> Result<C64>) -> Result<C64> {
        if self.var.iter().all(|&v| v == 0.0) {
            return f(&vec![0.0; self.var.len()]);
        }
        let coarse = self.average_with(&self.rule, f)?;
        let fine = self.average_with(&self.doubled, f)?;
        let change = (fine - coarse).norm();
        if change > QUAD_DOUBLING_TOL {
            return Err(Error::QuadratureOrder { order: self.order, change });
        }
        Ok(fine)
    }
}

/// Pure phase damping: `χ(μ, t) = ∫∏dx_j N(x_j; 0, γ_j t) χ₀(μ_j e^{ix_j})`.
pub fn evolve_chi_phase_damping(chi0: &CharFunc, p: &SystemParams, t: f64, quad_order: usize) -> Result<CharFunc> {
    check_modes(chi0, p)?;
    check_time(t)?;
    if !p.eta_is_zero() || p.has_amplitude_damping() {
        return Err(Error::Unsupported("phase-damping solution needs η = 0 and Γ = 0".into()));
    }
    let var: Vec<f64> = p.gamma_phase().iter().map(|g| g * t).collect();
    let avg = PhaseAverage::new(var, quad_order)?;
    let inner = chi0.clone();
    let backing = if p.has_phase_damping() && t > 0.0 { None } else { chi0.gaussian.clone() };
    Ok(CharFunc::new(p.modes(), move |mu| {
        let mu = mu.to_vec();
        avg.average(&|x| {
            let rotated: Vec<C64> = mu.iter().zip(x).map(|(z, &xj)| z * C64::from_polar(1.0, xj)).collect();
            inner.eval(&rotated)
        })
    })
    .with_backing(backing))
}

/// Simultaneous amplitude and phase damping with an unsqueezed bath:
/// `χ(μ,t) = ∫∏dx_j N(x_j; 0, γ_j t) χ₀(μ_j e^{−Γ_j t/2 + ix_j}) exp[−Σ_j(1 − e^{−Γ_j t})(n̄_j+½)|μ_j|²]`.
pub fn evolve_chi_amp_phase(chi0: &CharFunc, p: &SystemParams, t: f64, quad_order: usize) -> Result<CharFunc> {
    check_modes(chi0, p)?;
    check_time(t)?;
    if !p.eta_is_zero() {
        return Err(Error::Unsupported("amplitude plus phase damping solution needs η = 0".into()));
    }
    if p.has_squeezed_bath() {
        return Err(Error::Unsupported("amplitude plus phase damping is solved for w = 0 only".into()));
    }
    let var: Vec<f64> = p.gamma_phase().iter().map(|g| g * t).collect();
    let avg = PhaseAverage::new(var, quad_order)?;
    let decay: Vec<f64> = p.gamma_amp().iter().map(|g| (-0.5 * g * t).exp()).collect();
    let nbar = p.nbar().to_vec();
    let inner = chi0.clone();
    let backing =
        if p.has_phase_damping() && t > 0.0 { None } else { evolved_backing(chi0, p, t, &EvolveOptions::default()) };
    Ok(CharFunc::new(p.modes(), move |mu| {
        let envelope: f64 =
            (0..mu.len()).map(|j| -(1.0 - decay[j] * decay[j]) * (nbar[j] + 0.5) * mu[j].norm_sqr()).sum();
        let mu = mu.to_vec();
        let avg = avg.average(&|x| {
            let rotated: Vec<C64> = (0..mu.len()).map(|j| mu[j] * C64::from_polar(decay[j], x[j])).collect();
            inner.eval(&rotated)
        })?;
        Ok(avg * envelope.exp())
    })
    .with_backing(backing))
}

/// General amplification plus amplitude damping:
/// `χ(μ,t) = χ₀(ν) exp[½(ν,−ν*)Γαβ(ν*,−ν)ᵀ − ½(μ,−μ*)Γαβ(μ*,−μ)ᵀ]`, `ν = μM + μ*N`.
/// The exponent is evaluated as `−½(μ,−μ*)Σ(t)(μ*,−μ)ᵀ` with the accumulated
/// noise `Σ(t)`, which also covers the degenerate point `Γ = 2|η|`.
pub fn evolve_chi_general(chi0: &CharFunc, p: &SystemParams, t: f64) -> Result<CharFunc> {
    evolve_chi_general_with(chi0, p, t, &EvolveOptions::default())
}

pub fn evolve_chi_general_with(chi0: &CharFunc, p: &SystemParams, t: f64, opts: &EvolveOptions) -> Result<CharFunc> {
    check_modes(chi0, p)?;
    check_time(t)?;
    if p.has_phase_damping() {
        return Err(Error::Unsupported("general solution needs γ = 0".into()));
    }
    let (prop, _) = propagate_mn(p, t, opts)?;
    let sigma = noise_matrix(p, &prop, opts)?;
    let inner = chi0.clone();
    let backing = evolved_backing(chi0, p, t, opts);
    Ok(CharFunc::new(p.modes(), move |mu| {
        let nu = prop.map_argument(mu);
        Ok(inner.eval(&nu)? * (-quadratic_form(&sigma, mu) * 0.5).exp())
    })
    .with_backing(backing))
}

/// Cartesian grid of `n × n` points over `Re μ, Im μ ∈ [−h, h]`.
pub fn square_grid(n: usize, half_width: f64) -> Vec<C64> {
    let coord = |k: usize| if n == 1 { 0.0 } else { -half_width + 2.0 * half_width * k as f64 / (n - 1) as f64 };
    (0..n).flat_map(|i| (0..n).map(move |j| c(coord(i), coord(j)))).collect()
}

/// Purity `∫∏(d²μ_j/π)|χ(μ)|²` by polar product quadrature: Gauss–Legendre
/// in the radius on `[0, R]` and the trapezoid rule in angle. `R` is grown
/// until `|χ|²` is below `1e-18` on the shell `[R, 2R]` of every single-mode
/// axis.
pub fn purity_from_chi(chi: &CharFunc, radial_order: usize, angular_order: usize) -> Result<f64> {
    let s = chi.modes();
    if s == 0 || s > 2 {
        return Err(Error::Unsupported(format!("purity quadrature for {s} modes")));
    }
    let mut radius: f64 = 1.0;
    'grow: while radius < 64.0 {
        for j in 0..s {
            for k in 0..8 {
                for shell in [1.0, 1.3, 1.7, 2.0] {
                    let mut mu = vec![C64::new(0.0, 0.0); s];
                    mu[j] = C64::from_polar(radius * shell, std::f64::consts::PI * k as f64 / 4.0);
                    if chi.eval(&mu)?.norm_sqr() > 1e-18 {
                        radius *= 1.5;
                        continue 'grow;
                    }
                }
            }
        }
        break;
    }
    let radial = gauss_legendre(radial_order)?.rescaled(0.0, radius);
    let dtheta = 2.0 * std::f64::consts::PI / angular_order as f64;
    let mut points = Vec::with_capacity(radial.len() * angular_order);
    for (r, w) in radial.nodes.iter().zip(&radial.weights) {
        for k in 0..angular_order {
            let th = dtheta * k as f64;
            points.push((C64::from_polar(*r, th), w * r * dtheta / std::f64::consts::PI));
        }
    }
    let mut acc = 0.0;
    if s == 1 {
        for (z, w) in &points {
            acc += w * chi.eval(&[*z])?.norm_sqr();
        }
    } else {
        for (z1, w1) in &points {
            for (z2, w2) in &points {
                acc += w1 * w2 * chi.eval(&[*z1, *z2])?.norm_sqr();
            }
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::evolve_gaussian;

    const Z: C64 = C64::new(0.0, 0.0);

    #[test]
    fn gaussian_chi_basics() {
        let vac = GaussianState::vacuum(1);
        assert_eq!(eval_gaussian_chi(&vac, &[Z]), re(1.0));
        assert!((eval_gaussian_chi(&vac, &[re(1.0)]) - re((-0.5f64).exp())).norm() < 1e-15);
        let th = GaussianState::thermal(0.7).unwrap();
        let mu = c(0.3, -1.1);
        let expect = (-(1.2) * mu.norm_sqr()).exp();
        assert!((eval_gaussian_chi(&th, &[mu]) - re(expect)).norm() < 1e-15);
    }

    #[test]
    fn coherent_chi_phase() {
        let m = c(0.5, 0.2);
        let st = GaussianState::coherent(&[m]);
        let mu = c(-0.4, 0.9);
        let expect = (mu * m.conj() - mu.conj() * m - re(0.5 * mu.norm_sqr())).exp();
        assert!((eval_gaussian_chi(&st, &[mu]) - expect).norm() < 1e-15);
    }

    #[test]
    fn laguerre_values() {
        assert_eq!(laguerre(0, 3.0), 1.0);
        assert_eq!(laguerre(1, 3.0), -2.0);
        assert!((laguerre(2, 3.0) - (9.0 - 12.0 + 2.0) / 2.0).abs() < 1e-15);
        assert!((laguerre(3, 0.5) - (-0.125 + 2.25 - 9.0 + 6.0) / 6.0).abs() < 1e-15);
    }

    #[test]
    fn fock_zero_is_vacuum() {
        let f = CharFunc::fock_number(&[0]);
        let mu = [c(0.7, 0.1)];
        assert!((f.eval(&mu).unwrap() - eval_gaussian_chi(&GaussianState::vacuum(1), &mu)).norm() < 1e-15);
        assert!(f.eval(&[Z, Z]).is_err());
    }

    #[test]
    fn amplification_matches_gaussian_evolution() {
        let p = SystemParams::one_mode(c(0.3, 0.1), 0.0, 0.0, Z).unwrap();
        let st = GaussianState::coherent(&[c(0.4, -0.2)]);
        let chi = evolve_chi_amplification(&CharFunc::gaussian(st.clone()), &p, 0.8).unwrap();
        let g = evolve_gaussian(&st, &p, 0.8).unwrap();
        for mu in square_grid(5, 2.0) {
            assert!((chi.eval(&[mu]).unwrap() - eval_gaussian_chi(&g, &[mu])).norm() < 1e-12);
        }
        assert!(chi.is_gaussian());
    }

    #[test]
    fn amplification_rejects_damping() {
        let p = SystemParams::one_mode(re(0.3), 1.0, 0.0, Z).unwrap();
        assert!(evolve_chi_amplification(&CharFunc::gaussian(GaussianState::vacuum(1)), &p, 1.0).is_err());
    }

    #[test]
    fn damping_reaches_thermal() {
        let p = SystemParams::one_mode(Z, 1.0, 0.3, Z).unwrap();
        let chi = evolve_chi_amplitude_damping(&CharFunc::fock_number(&[2]), &p, 60.0).unwrap();
        let th = GaussianState::thermal(0.3).unwrap();
        for mu in square_grid(5, 2.0) {
            assert!((chi.eval(&[mu]).unwrap() - eval_gaussian_chi(&th, &[mu])).norm() < 1e-12);
        }
    }

    #[test]
    fn thermal_is_phase_invariant() {
        let p = SystemParams::phase_damping(vec![0.8]).unwrap();
        let th = GaussianState::thermal(0.5).unwrap();
        let chi = evolve_chi_phase_damping(&CharFunc::gaussian(th.clone()), &p, 2.0, 64).unwrap();
        for mu in square_grid(5, 2.0) {
            assert!((chi.eval(&[mu]).unwrap() - eval_gaussian_chi(&th, &[mu])).norm() < 1e-12);
        }
        assert!(!chi.is_gaussian());
    }

    #[test]
    fn phase_damping_coherent_mean_decays() {
        // ∂χ/∂μ* at μ=0 is −⟨a⟩, so a small-μ probe sees ⟨a⟩e^{−γt/2}.
        let p = SystemParams::phase_damping(vec![1.0]).unwrap();
        let chi0 = CharFunc::gaussian(GaussianState::coherent(&[re(1.0)]));
        let chi = evolve_chi_phase_damping(&chi0, &p, 0.5, 64).unwrap();
        let h = 1e-5;
        let d = (chi.eval(&[re(h)]).unwrap() - chi.eval(&[re(-h)]).unwrap()) / (2.0 * h);
        // d/dx χ(x) at 0 = m* − m for real x: purely imaginary, here 0 for real m.
        assert!(d.norm() < 1e-6);
        let dy = (chi.eval(&[c(0.0, h)]).unwrap() - chi.eval(&[c(0.0, -h)]).unwrap()) / (2.0 * h);
        assert!((dy - c(0.0, 2.0 * (-0.25f64).exp())).norm() < 1e-6);
    }

    #[test]
    fn low_quadrature_order_is_flagged() {
        let p = SystemParams::phase_damping(vec![1.0]).unwrap();
        let chi0 = CharFunc::gaussian(GaussianState::coherent(&[re(3.0)]));
        let chi = evolve_chi_phase_damping(&chi0, &p, 5.0, 2).unwrap();
        assert!(matches!(chi.eval(&[re(1.5)]), Err(Error::QuadratureOrder { .. })));
    }

    #[test]
    fn amp_phase_rejects_squeezed_bath() {
        let p = SystemParams::one_mode(Z, 1.0, 0.5, re(0.1)).unwrap();
        assert!(evolve_chi_amp_phase(&CharFunc::gaussian(GaussianState::vacuum(1)), &p, 1.0, 64).is_err());
    }

    #[test]
    fn general_rejects_phase_damping() {
        let p = SystemParams::one_mode(re(0.2), 1.0, 0.0, Z).unwrap().with_gamma_phase(vec![0.1]).unwrap();
        assert!(evolve_chi_general(&CharFunc::gaussian(GaussianState::vacuum(1)), &p, 1.0).is_err());
    }

    #[test]
    fn purity_quadrature_gaussian() {
        let th = CharFunc::gaussian(GaussianState::thermal(1.0).unwrap());
        assert!((purity_from_chi(&th, 48, 32).unwrap() - 1.0 / 3.0).abs() < 1e-10);
        let sq = CharFunc::gaussian(GaussianState::squeezed(0.5, 0.3).unwrap());
        assert!((purity_from_chi(&sq, 64, 64).unwrap() - 1.0).abs() < 1e-8);
        let f1 = CharFunc::fock_number(&[1]);
        assert!((purity_from_chi(&f1, 48, 32).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn grid_shape() {
        let g = square_grid(5, 2.0);
        assert_eq!(g.len(), 25);
        assert_eq!(g[0], c(-2.0, -2.0));
        assert_eq!(g[24], c(2.0, 2.0));
        assert_eq!(g[12], Z);
    }

    #[test]
    fn product_spec_multiplies_factors() {
        let spec = StateSpec::Product { factors: vec![StateSpec::Fock { n: 1 }, StateSpec::Thermal { n: 0.3 }] };
        let chi = CharFunc::from_spec(&spec).unwrap();
        assert!(!chi.is_gaussian());
        let th = GaussianState::thermal(0.3).unwrap();
        let mu = [c(0.4, -0.3), c(0.2, 0.5)];
        let expected = CharFunc::fock_number(&[1]).eval(&mu[..1]).unwrap() * eval_gaussian_chi(&th, &mu[1..]);
        assert!((chi.eval(&mu).unwrap() - expected).norm() < 1e-15);
        assert!(CharFunc::from_spec(&StateSpec::Thermal { n: 0.3 }).unwrap().is_gaussian());
    }
}
