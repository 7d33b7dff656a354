//! Purity, two-mode separability and entanglement of formation.

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::{evolve_gaussian, one_mode_alpha_beta};
use crate::gaussian::{GaussianState, RealCM};
use crate::linalg::{sqrt_psd, symplectic_form, to_complex, RMat, C64};
use crate::params::SystemParams;

/// Tolerance on the separability margin and the PPT eigenvalue.
pub const SEPARABILITY_TOL: f64 = 1e-12;

/// `1/(2√(γ₁² − |γ₂|²))` with `γ₁ = A`, `γ₂ = B` of a one-mode complex CM.
pub fn purity_one_mode(state: &GaussianState) -> Result<f64> {
    if state.modes() != 1 {
        return Err(Error::Dimension { expected: 1, found: state.modes() });
    }
    let a = state.cm()[(0, 0)].re;
    let b = state.cm()[(1, 0)];
    let disc = a * a - b.norm_sqr();
    if !(disc > 0.0) {
        return Err(Error::Unphysical(format!("purity discriminant {disc} is not positive")));
    }
    Ok(0.5 / disc.sqrt())
}

/// `(2^s √det γ_re)⁻¹`.
pub fn purity_general(state: &GaussianState) -> Result<f64> {
    let det = state.to_real()?.determinant();
    if !(det > 0.0) {
        return Err(Error::Unphysical(format!("CM determinant {det} is not positive")));
    }
    Ok(1.0 / (2f64.powi(state.modes() as i32) * det.sqrt()))
}

fn check_contractive_one_mode(p: &SystemParams) -> Result<(f64, C64)> {
    if p.modes() != 1 {
        return Err(Error::Dimension { expected: 1, found: p.modes() });
    }
    let g = p.gamma_amp()[0];
    let eta = p.eta()[(0, 0)];
    if g <= 2.0 * eta.norm() {
        return Err(Error::NotContractive(eta.norm() - 0.5 * g));
    }
    Ok((g, eta))
}

/// Purity of the one-mode steady state, `½(α² − |β|²)^{−½}`.
pub fn ultimate_purity(p: &SystemParams) -> Result<f64> {
    check_contractive_one_mode(p)?;
    let ab = one_mode_alpha_beta(p)?;
    let a = ab.alpha[(0, 0)].re;
    let b = ab.beta[(0, 0)];
    Ok(0.5 / (a * a - b.norm_sqr()).sqrt())
}

/// Largest ultimate purity over the phase of the bath squeezing at fixed
/// `|w|`: `½{Γ²[(n̄+½)² − |w|²]/(Γ² − 4|η|²)}^{−½}`.
pub fn ultimate_purity_max(p: &SystemParams) -> Result<f64> {
    let (g, eta) = check_contractive_one_mode(p)?;
    let nh = p.nbar()[0] + 0.5;
    let w2 = p.w()[0].norm_sqr();
    let den = g * g - 4.0 * eta.norm_sqr();
    Ok(0.5 / (g * g * (nh * nh - w2) / den).sqrt())
}

/// Purity of a one-mode squeezed thermal input `(N, r)` (real squeezing)
/// under real amplification `η > Γ/2` and an unsqueezed bath:
///
/// ```text
/// μ_p(t) = ½ {[N′e^{(2η−Γ)t+2r} + n̄′e^{r₀}(e^{(2η−Γ)t} − 1)]
///            ·[N′e^{−(2η+Γ)t−2r} + n̄′e^{−r₀}(1 − e^{−(2η+Γ)t})]}^{−½}
/// ```
///
/// with `N′ = N + ½`, `n̄′ = (n̄ + ½) sinh r₀`, `cosh r₀ = 2η/√(4η² − Γ²)`.
pub fn purity_squeezed_thermal_t(n: f64, r: f64, nbar: f64, eta: f64, gamma: f64, t: f64) -> Result<f64> {
    if !(eta > 0.0) || !(gamma >= 0.0) || gamma >= 2.0 * eta {
        return Err(Error::InvalidParameter("requires real η > 0 and 0 ≤ Γ < 2η".into()));
    }
    if !(n >= 0.0) || !(nbar >= 0.0) || !(t >= 0.0) || !r.is_finite() {
        return Err(Error::InvalidParameter("requires N, n̄, t ≥ 0 and finite r".into()));
    }
    let (np, nbp, r0) = overamplified_constants(n, nbar, eta, gamma);
    let up = ((2.0 * eta - gamma) * t).exp();
    let down = (-(2.0 * eta + gamma) * t).exp();
    let f1 = np * up * (2.0 * r).exp() + nbp * r0.exp() * (up - 1.0);
    let f2 = np * down * (-2.0 * r).exp() + nbp * (-r0).exp() * (1.0 - down);
    Ok(0.5 / (f1 * f2).sqrt())
}

/// Large-time limit of `μ_p(t) e^{(η−Γ/2)t}` for a thermal input `N`:
/// `½/√(n̄′² + n̄′N′e^{−r₀})`.
pub fn squeezed_thermal_purity_asymptote(n: f64, nbar: f64, eta: f64, gamma: f64) -> Result<f64> {
    if !(eta > 0.0) || !(gamma >= 0.0) || gamma >= 2.0 * eta {
        return Err(Error::InvalidParameter("requires real η > 0 and 0 ≤ Γ < 2η".into()));
    }
    let (np, nbp, r0) = overamplified_constants(n, nbar, eta, gamma);
    Ok(0.5 / (nbp * nbp + nbp * np * (-r0).exp()).sqrt())
}

fn overamplified_constants(n: f64, nbar: f64, eta: f64, gamma: f64) -> (f64, f64, f64) {
    let r0 = (2.0 * eta / (4.0 * eta * eta - gamma * gamma).sqrt()).acosh();
    (n + 0.5, (nbar + 0.5) * r0.sinh(), r0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeparabilityReport {
    pub separable: bool,
    /// Left side minus right side of the Simon inequality.
    pub margin: f64,
    pub standard_form: RealCM,
}

fn det2(m: &Matrix2<f64>) -> f64 {
    m.determinant()
}

fn simon_margin(a: &Matrix2<f64>, b: &Matrix2<f64>, cc: &Matrix2<f64>) -> f64 {
    let j = Matrix2::new(0.0, 1.0, -1.0, 0.0);
    let trace = (a * j * cc * j * b * j * cc.transpose() * j).trace();
    let (da, db, dc) = (det2(a), det2(b), det2(cc));
    da * db + (0.25 - dc.abs()).powi(2) - trace - 0.25 * (da + db)
}

fn require_two_modes(rcm: &RealCM) -> Result<()> {
    if rcm.modes() != 2 {
        return Err(Error::Dimension { expected: 2, found: rcm.modes() });
    }
    Ok(())
}

/// Simon's criterion
/// `det γ_a det γ_b + (¼ − |det γ_c|)² − tr(γ_a J γ_c J γ_b J γ_cᵀ J) ≥ ¼(det γ_a + det γ_b)`.
/// The margin is evaluated both as given and with every block conjugated by
/// `σ₃` (the `p → −p` quadrature convention); the two must agree.
pub fn simon_separability(rcm: &RealCM) -> Result<SeparabilityReport> {
    require_two_modes(rcm)?;
    let (a, b, cc) = (rcm.gamma_a(), rcm.gamma_b(), rcm.gamma_c());
    let margin = simon_margin(&a, &b, &cc);
    let s3 = Matrix2::new(1.0, 0.0, 0.0, -1.0);
    let alt = simon_margin(&(s3 * a * s3), &(s3 * b * s3), &(s3 * cc * s3));
    let scale = rcm.matrix().amax().max(1.0).powi(4);
    if (margin - alt).abs() > 1e-10 * scale {
        return Err(Error::Structure("invariant under p → −p"));
    }
    Ok(SeparabilityReport {
        separable: margin >= -SEPARABILITY_TOL * scale,
        margin,
        standard_form: standard_form(rcm)?,
    })
}

/// Symplectic eigenvalues of the partially transposed CM (`p_b → −p_b`),
/// ascending.
pub fn ppt_symplectic_eigenvalues(rcm: &RealCM) -> Result<[f64; 2]> {
    require_two_modes(rcm)?;
    let p = RMat::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 1.0, 1.0, -1.0]));
    let pt = &p * rcm.matrix() * &p;
    let root = to_complex(&sqrt_psd(&pt));
    let omega = to_complex(&symplectic_form(2)) * C64::new(0.0, 1.0);
    let h = &root * omega * &root;
    let h = (&h + h.adjoint()) * C64::new(0.5, 0.0);
    let mut ev: Vec<f64> = h.symmetric_eigen().eigenvalues.iter().copied().filter(|v| *v > 0.0).collect();
    ev.sort_by(f64::total_cmp);
    if ev.len() != 2 {
        // Zero eigenvalues only occur for singular CMs.
        return Err(Error::Unphysical("singular partially transposed CM".into()));
    }
    Ok([ev[0], ev[1]])
}

/// PPT test: separable iff the smallest partially transposed symplectic
/// eigenvalue is at least ½.
pub fn ppt_separable(rcm: &RealCM) -> Result<bool> {
    Ok(ppt_symplectic_eigenvalues(rcm)?[0] >= 0.5 - SEPARABILITY_TOL)
}

/// Local symplectic invariants `(det γ_a, det γ_b, det γ_c, det γ)`.
pub fn local_invariants(rcm: &RealCM) -> Result<[f64; 4]> {
    require_two_modes(rcm)?;
    Ok([det2(&rcm.gamma_a()), det2(&rcm.gamma_b()), det2(&rcm.gamma_c()), rcm.determinant()])
}

fn inv_sqrt_2x2(m: &Matrix2<f64>) -> Matrix2<f64> {
    let eig = m.symmetric_eigen();
    let d = eig.eigenvalues.map(|v| 1.0 / v.sqrt());
    eig.eigenvectors * Matrix2::from_diagonal(&d) * eig.eigenvectors.transpose()
}

fn proper(u: &mut Matrix2<f64>, sv: &mut [f64; 2]) {
    if u.determinant() < 0.0 {
        u[(0, 1)] = -u[(0, 1)];
        u[(1, 1)] = -u[(1, 1)];
        sv[1] = -sv[1];
    }
}

/// Local normal form `γ_a = aσ₀`, `γ_b = bσ₀`, `γ_c = diag(c₊, c₋)` with
/// `c₊ ≥ |c₋|` and `sign c₋ = sign det γ_c`.
pub fn standard_form(rcm: &RealCM) -> Result<RealCM> {
    require_two_modes(rcm)?;
    let (a, b, cc) = (rcm.gamma_a(), rcm.gamma_b(), rcm.gamma_c());
    let (da, db) = (det2(&a), det2(&b));
    if da <= 1e-14 || db <= 1e-14 || a.trace() <= 0.0 || b.trace() <= 0.0 {
        return standard_form_from_invariants(rcm);
    }
    let sa = inv_sqrt_2x2(&(a / da.sqrt()));
    let sb = inv_sqrt_2x2(&(b / db.sqrt()));
    let c2 = sa * cc * sb;
    let svd = c2.svd(true, true);
    let (mut u, mut v) = (svd.u.unwrap(), svd.v_t.unwrap().transpose());
    let mut su = [svd.singular_values[0], svd.singular_values[1]];
    proper(&mut u, &mut su);
    let mut sv = [1.0, 1.0];
    proper(&mut v, &mut sv);
    let cp = su[0] * sv[0];
    let cm = su[1] * sv[1];
    let (ea, eb) = (da.sqrt(), db.sqrt());
    RealCM::from_blocks(&(Matrix2::identity() * ea), &(Matrix2::identity() * eb), &Matrix2::new(cp, 0.0, 0.0, cm))
}

fn standard_form_from_invariants(rcm: &RealCM) -> Result<RealCM> {
    let [da, db, dc, dg] = local_invariants(rcm)?;
    let (a, b) = (da.max(0.0).sqrt(), db.max(0.0).sqrt());
    let ab = a * b;
    let (cp, cm) = if ab <= 1e-14 {
        (0.0, 0.0)
    } else {
        let sum = (ab * ab + dc * dc - dg) / ab;
        let disc = (sum * sum - 4.0 * dc * dc).max(0.0).sqrt();
        let p = (0.5 * (sum + disc)).max(0.0).sqrt();
        let q = (0.5 * (sum - disc)).max(0.0).sqrt();
        (p, if dc < 0.0 { -q } else { q })
    };
    RealCM::from_blocks(&(Matrix2::identity() * a), &(Matrix2::identity() * b), &Matrix2::new(cp, 0.0, 0.0, cm))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EofResult {
    pub z: f64,
    pub delta: f64,
    pub value: f64,
}

/// Bosonic entropy `g(x) = (x+1)log₂(x+1) − x log₂ x`, `g(0) = 0`.
pub fn bosonic_entropy(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    (x + 1.0) * (x + 1.0).log2() - x * x.log2()
}

/// `Δ(z) = (z + 1/z − 2)/4`.
pub fn eof_delta(z: f64) -> f64 {
    (z + 1.0 / z - 2.0) / 4.0
}

/// EoF of a symmetric two-mode Gaussian state with `z = 2ν̃₋`.
pub fn eof_symmetric(z: f64) -> Result<EofResult> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::InvalidParameter(format!("EoF argument z = {z} must be positive")));
    }
    let delta = eof_delta(z);
    let value = if z < 1.0 { bosonic_entropy(delta) } else { 0.0 };
    Ok(EofResult { z, delta, value })
}

/// `(|η₁|, Γ, n̄₀)` of a symmetric two-mode drive `η = η₁σ₁` with equal
/// damping, equal bath occupation and no bath squeezing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricPair {
    pub eta1: f64,
    pub gamma: f64,
    pub nbar0: f64,
}

impl SymmetricPair {
    pub fn from_params(p: &SystemParams) -> Result<Self> {
        if p.modes() != 2 {
            return Err(Error::Dimension { expected: 2, found: p.modes() });
        }
        let eta = p.eta();
        if eta[(0, 0)].norm() > 1e-14 || eta[(1, 1)].norm() > 1e-14 {
            return Err(Error::Unsupported("symmetric pair needs η = η₁σ₁".into()));
        }
        let gamma = p.equal_damping().ok_or_else(|| Error::Unsupported("symmetric pair needs equal Γ".into()))?;
        if !(gamma > 0.0) {
            return Err(Error::InvalidParameter("symmetric pair needs Γ > 0".into()));
        }
        let nb = p.nbar();
        if (nb[0] - nb[1]).abs() > 1e-14 {
            return Err(Error::Unsupported("symmetric pair needs equal n̄".into()));
        }
        if p.has_squeezed_bath() || p.has_phase_damping() {
            return Err(Error::Unsupported("symmetric pair needs w = 0 and γ = 0".into()));
        }
        Ok(Self { eta1: eta[(0, 1)].norm(), gamma, nbar0: nb[0] })
    }

    /// `z(∞) = Γ(2n̄₀+1)/(Γ+2η₁)`, written as `1 − 2(η₁ − n̄₀Γ)/(Γ+2η₁)` so that
    /// the threshold `η₁ = n̄₀Γ` gives exactly 1.
    pub fn saturation_z(&self) -> f64 {
        1.0 - 2.0 * (self.eta1 - self.nbar0 * self.gamma) / (self.gamma + 2.0 * self.eta1)
    }

    /// Closed-form evolution of `A = aσ₀`, `B = bσ₁` under a real drive:
    /// `a ± b` relax at rates `Γ ∓ 2η₁` towards `Γ(n̄₀+½)/(Γ ∓ 2η₁)`.
    pub fn evolve_ab(&self, a0: f64, b0: f64, t: f64) -> (f64, f64) {
        let (sp, sm) = self.evolve_modes(a0, b0, t);
        (0.5 * (sp + sm), 0.5 * (sp - sm))
    }

    /// `(a + b, a − b)` at time `t`.
    pub fn evolve_modes(&self, a0: f64, b0: f64, t: f64) -> (f64, f64) {
        let src = self.gamma * (self.nbar0 + 0.5);
        let relax = |s0: f64, rate: f64| -> f64 {
            // s(t) = e^{−rate t}s₀ + src (1 − e^{−rate t})/rate, smooth at rate = 0.
            let x = -rate * t;
            let phi = if x.abs() < 1e-8 { t * (1.0 + 0.5 * x) } else { x.exp_m1() / -rate };
            x.exp() * s0 + src * phi
        };
        let sp = relax(a0 + b0, self.gamma - 2.0 * self.eta1);
        let sm = relax(a0 - b0, self.gamma + 2.0 * self.eta1);
        (sp, sm)
    }
}

/// Ultimate EoF `g(Δ(Γ(2n̄₀+1)/(Γ+2η₁)))`, zero unless `η₁/Γ > n̄₀`.
pub fn eof_saturation(p: &SystemParams) -> Result<EofResult> {
    let pair = SymmetricPair::from_params(p)?;
    let z = pair.saturation_z();
    if pair.eta1 <= pair.nbar0 * pair.gamma {
        return Ok(EofResult { z: z.max(1.0), delta: eof_delta(z.max(1.0)), value: 0.0 });
    }
    eof_symmetric(z)
}

fn symmetric_ppt_z(state: &GaussianState) -> Result<f64> {
    let rcm = state.to_real()?;
    let sf = standard_form(&rcm)?;
    let (a, b) = (sf.gamma_a()[(0, 0)], sf.gamma_b()[(0, 0)]);
    if (a - b).abs() > 1e-9 * a.abs().max(1.0) {
        return Err(Error::Unsupported("EoF formula holds for symmetric two-mode states only".into()));
    }
    Ok(2.0 * ppt_symplectic_eigenvalues(&rcm)?[0])
}

/// `A = aσ₀`, `B = bσ₁` with real `a`, `b`, if the state has that form.
fn pair_form(state: &GaussianState) -> Option<(f64, f64)> {
    let cm = state.cm();
    let a = cm[(0, 0)];
    let b = cm[(3, 0)];
    let tol = 1e-12 * a.norm().max(1.0);
    let zero_a = [(0, 1), (1, 0)].iter().all(|&ij| cm[ij].norm() < tol);
    let zero_b = [(2, 0), (3, 1)].iter().all(|&ij| cm[ij].norm() < tol);
    let same = (cm[(1, 1)] - a).norm() < tol && (cm[(2, 1)] - b).norm() < tol;
    let real = a.im.abs() < tol && b.im.abs() < tol;
    (zero_a && zero_b && same && real).then_some((a.re, b.re))
}

/// EoF along a trajectory of a symmetric two-mode system. States of the
/// form `A = aσ₀`, `B = bσ₁` under a real drive use the closed form
/// `z = 2(a(t) − |b(t)|)`; other symmetric inputs are evolved exactly and
/// `z = 2ν̃₋` is read from the partial transpose.
pub fn eof_time_curve(p: &SystemParams, initial: &GaussianState, times: &[f64]) -> Result<Vec<EofResult>> {
    let pair = SymmetricPair::from_params(p)?;
    if initial.modes() != 2 {
        return Err(Error::Dimension { expected: 2, found: initial.modes() });
    }
    symmetric_ppt_z(initial)?;
    let eta1 = p.eta()[(0, 1)];
    let closed = if eta1.im == 0.0 && eta1.re >= 0.0 { pair_form(initial) } else { None };
    times
        .iter()
        .map(|&t| {
            let z = match closed {
                Some((a0, b0)) => {
                    // a − |b| = min(a + b, a − b), free of cancellation when a + b grows
                    let (sp, sm) = pair.evolve_modes(a0, b0, t);
                    2.0 * sp.min(sm)
                }
                None => symmetric_ppt_z(&evolve_gaussian(initial, p, t)?)?,
            };
            eof_symmetric(z)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ThresholdCriteria {
    /// `η₁/Γ > n̄₀`: entanglement at long times.
    pub combined: bool,
    /// `Γn̄₀ < η₁ < Γ/2`: steady-state branch.
    pub below_degeneracy: bool,
    /// `η₁ > max{n̄₀Γ, Γ/2}`: over-amplified branch.
    pub above_degeneracy: bool,
}

pub fn threshold_criteria(p: &SystemParams) -> Result<ThresholdCriteria> {
    let SymmetricPair { eta1, gamma, nbar0 } = SymmetricPair::from_params(p)?;
    Ok(ThresholdCriteria {
        combined: eta1 > nbar0 * gamma,
        below_degeneracy: gamma * nbar0 < eta1 && eta1 < 0.5 * gamma,
        above_degeneracy: eta1 > (nbar0 * gamma).max(0.5 * gamma),
    })
}

/// True iff `η₁/Γ > n̄₀`.
pub fn entanglement_threshold(p: &SystemParams) -> Result<bool> {
    Ok(threshold_criteria(p)?.combined)
}
