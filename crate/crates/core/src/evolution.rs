//! Propagators of the characteristic-function argument and exact Gaussian
//! evolution under parametric amplification plus amplitude damping.
//!
//! The argument map is `ν = μM + μ*N` where `M(0) = I`, `N(0) = 0` and
//!
//! ```text
//! dM/dt = −η*N − ΓM/2
//! dN/dt = −ηM − ΓN/2
//! ```
//!
//! In the complex-CM picture this is the block propagator
//! `T = [[M, −N*], [−N, M*]] = exp(Gt)` with drift `G = [[−Γ/2, η*], [η, −Γ/2]]`.
//! The steady quadratic form `[[α, β*], [β, α*]]` solves
//!
//! ```text
//! 2ηα + 2α*η − Γβ − βΓ + Γw + wΓ = 0
//! Γα + αΓ − 2η*β − 2β*η − Γ(n̄+½) − (n̄+½)Γ = 0
//! ```

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::gaussian::GaussianState;
use crate::linalg::{
    block2, c, conj, diag_complex, diag_real, max_abs, max_eigenvalue_hermitian, re, to_complex, CMat, CVec, RMat, C64,
};
use crate::matfun::{matrix_cosh_sinh, pauli_components};
use crate::params::SystemParams;

/// Relative singular-value threshold below which the α/β system is treated
/// as degenerate (`Γ = 2|η|` in the one-mode case).
pub const DEGENERACY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct PropagatorMN {
    pub m: CMat,
    pub n: CMat,
    pub t: f64,
}

impl PropagatorMN {
    pub fn identity(modes: usize) -> Self {
        Self { m: CMat::identity(modes, modes), n: CMat::zeros(modes, modes), t: 0.0 }
    }

    pub fn modes(&self) -> usize {
        self.m.nrows()
    }

    /// Block propagator `T = [[M, −N*], [−N, M*]]` acting on complex CMs.
    pub fn block(&self) -> CMat {
        block2(&self.m, &(-conj(&self.n)), &(-&self.n), &conj(&self.m))
    }

    /// `ν = μM + μ*N` for a row vector `μ`.
    pub fn map_argument(&self, mu: &[C64]) -> Vec<C64> {
        let s = self.modes();
        (0..s).map(|l| (0..s).map(|k| mu[k] * self.m[(k, l)] + mu[k].conj() * self.n[(k, l)]).sum()).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().chain(self.n.iter()).all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

/// Right-hand side `(dM/dt, dN/dt)`.
pub fn mn_rhs(p: &SystemParams, m: &CMat, n: &CMat) -> (CMat, CMat) {
    let half_gamma = p.gamma_matrix() * re(0.5);
    let eta = p.eta();
    let dm = -(conj(eta) * n) - &half_gamma * m;
    let dn = -(eta * m) - &half_gamma * n;
    (dm, dn)
}

/// Steady quadratic-form coefficients: `α` Hermitian, `β` symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct SteadyAlphaBeta {
    pub alpha: CMat,
    pub beta: CMat,
}

impl SteadyAlphaBeta {
    pub fn zero(modes: usize) -> Self {
        Self { alpha: CMat::zeros(modes, modes), beta: CMat::zeros(modes, modes) }
    }

    /// `[[α, β*], [β, α*]]`.
    pub fn full(&self) -> CMat {
        block2(&self.alpha, &conj(&self.beta), &self.beta, &conj(&self.alpha))
    }

    /// Largest absolute entry of the two defining matrix equations.
    pub fn residual(&self, p: &SystemParams) -> f64 {
        let (r3, r4) = alpha_beta_residual(p, &self.alpha, &self.beta);
        max_abs(&r3).max(max_abs(&r4))
    }
}

/// Left-hand sides of the α/β equations.
pub fn alpha_beta_residual(p: &SystemParams, alpha: &CMat, beta: &CMat) -> (CMat, CMat) {
    let eta = p.eta();
    let g = p.gamma_matrix();
    let w = diag_complex(p.w());
    let nh = diag_real(&p.nbar().iter().map(|n| n + 0.5).collect::<Vec<_>>());
    let two = re(2.0);
    let r3 = eta * alpha * two + conj(alpha) * eta * two - &g * beta - beta * &g + &g * &w + &w * &g;
    let r4 = &g * alpha + alpha * &g - conj(eta) * beta * two - conj(beta) * eta * two - &g * &nh - &nh * &g;
    (r3, r4)
}

/// Solves the α/β equations as one real linear system in the stacked real
/// and imaginary parts of every entry of `α` and `β`.
pub fn solve_alpha_beta(p: &SystemParams) -> Result<SteadyAlphaBeta> {
    let s = p.modes();
    let nn = s * s;
    let unknowns = 4 * nn;
    let unpack = |x: &DVector<f64>| -> (CMat, CMat) {
        let alpha = CMat::from_fn(s, s, |i, j| c(x[i * s + j], x[nn + i * s + j]));
        let beta = CMat::from_fn(s, s, |i, j| c(x[2 * nn + i * s + j], x[3 * nn + i * s + j]));
        (alpha, beta)
    };
    let pack = |r3: &CMat, r4: &CMat| -> DVector<f64> {
        let mut v = DVector::zeros(unknowns);
        for i in 0..s {
            for j in 0..s {
                v[i * s + j] = r3[(i, j)].re;
                v[nn + i * s + j] = r3[(i, j)].im;
                v[2 * nn + i * s + j] = r4[(i, j)].re;
                v[3 * nn + i * s + j] = r4[(i, j)].im;
            }
        }
        v
    };
    let zero = DVector::zeros(unknowns);
    let (a0, b0) = unpack(&zero);
    let (c3, c4) = alpha_beta_residual(p, &a0, &b0);
    let constant = pack(&c3, &c4);
    let mut sys = RMat::zeros(unknowns, unknowns);
    for k in 0..unknowns {
        let mut e = DVector::zeros(unknowns);
        e[k] = 1.0;
        let (a, b) = unpack(&e);
        let (r3, r4) = alpha_beta_residual(p, &a, &b);
        let col = pack(&r3, &r4) - &constant;
        sys.set_column(k, &col);
    }
    let sv = sys.singular_values();
    let smax = sv.max();
    let ratio = if smax > 0.0 { sv.min() / smax } else { 0.0 };
    if ratio < DEGENERACY_TOL {
        return Err(Error::Degenerate(ratio));
    }
    let lu = sys.clone().full_piv_lu();
    let rhs = -&constant;
    let mut x = lu.solve(&rhs).ok_or(Error::Degenerate(ratio))?;
    // One step of iterative refinement.
    if let Some(dx) = lu.solve(&(&rhs - &sys * &x)) {
        x += dx;
    }
    let (alpha, beta) = unpack(&x);
    let alpha = (&alpha + alpha.adjoint()) * re(0.5);
    let beta = (&beta + beta.transpose()) * re(0.5);
    Ok(SteadyAlphaBeta { alpha, beta })
}

/// Closed-form one-mode coefficients, valid for `Γ ≠ 2|η|`:
///
/// ```text
/// α = Γ[Γ(n̄+½) + η*w + ηw*] / (Γ² − 4|η|²)
/// β = [2Γη(n̄+½) + (Γ² − 2|η|²)w + 2η²w*] / (Γ² − 4|η|²)
/// ```
pub fn one_mode_alpha_beta(p: &SystemParams) -> Result<SteadyAlphaBeta> {
    if p.modes() != 1 {
        return Err(Error::Dimension { expected: 1, found: p.modes() });
    }
    let g = p.gamma_amp()[0];
    let eta = p.eta()[(0, 0)];
    let w = p.w()[0];
    let nh = p.nbar()[0] + 0.5;
    let den = g * g - 4.0 * eta.norm_sqr();
    if den.abs() < 1e-12 {
        return Err(Error::Degenerate(den.abs()));
    }
    let alpha = (eta.conj() * w + eta * w.conj() + g * nh) * (g / den);
    let beta = (eta * (2.0 * g * nh) + w * (g * g - 2.0 * eta.norm_sqr()) + eta * eta * w.conj() * 2.0) / den;
    Ok(SteadyAlphaBeta { alpha: CMat::from_element(1, 1, re(alpha.re)), beta: CMat::from_element(1, 1, beta) })
}

/// Equal damping `Γ = Γ₁I`: `M = e^{−Γt/2} cosh*(|η|t)`,
/// `N = −e^{−Γt/2} sinh(|η|t)/|η| · η`.
pub fn propagate_mn_equal_damping(p: &SystemParams, t: f64) -> Result<PropagatorMN> {
    let gamma =
        p.equal_damping().ok_or_else(|| Error::Unsupported("equal-damping propagator needs equal Γ_j".into()))?;
    let (ch, sh) = matrix_cosh_sinh(&(p.eta() * re(t)));
    let decay = re((-0.5 * gamma * t).exp());
    Ok(PropagatorMN { m: conj(&ch) * decay, n: -(sh * decay), t })
}

fn real_eta(p: &SystemParams) -> Result<RMat> {
    if !p.eta_is_real() {
        return Err(Error::Unsupported("real-η propagator needs a real drive matrix".into()));
    }
    Ok(p.eta().map(|z| z.re))
}

/// Real `η` with arbitrary damping:
/// `M = ½[e^{−ηt−Γt/2} + e^{ηt−Γt/2}]`, `N = ½[e^{−ηt−Γt/2} − e^{ηt−Γt/2}]`.
pub fn propagate_mn_real_eta(p: &SystemParams, t: f64) -> Result<PropagatorMN> {
    let eta = real_eta(p)?;
    let half_gamma = RMat::from_diagonal(&DVector::from_column_slice(p.gamma_amp())) * 0.5;
    let e1 = ((-&eta - &half_gamma) * t).exp();
    let e2 = ((&eta - &half_gamma) * t).exp();
    Ok(PropagatorMN { m: to_complex(&((&e1 + &e2) * 0.5)), n: to_complex(&((&e1 - &e2) * 0.5)), t })
}

/// Two-mode Pauli closed form of [`propagate_mn_real_eta`]:
/// `E₁,₂ = e^{−C₁,₂t}[cosh(B₁,₂t)σ₀ − sinh(B₁,₂t) σ·b̂₁,₂]`, `M = (E₁+E₂)/2`,
/// `N = (E₁−E₂)/2`.
pub fn real_eta_two_mode_closed_form(p: &SystemParams, t: f64) -> Result<PropagatorMN> {
    if p.modes() != 2 {
        return Err(Error::Dimension { expected: 2, found: p.modes() });
    }
    real_eta(p)?;
    let (e0, e1, e3) = pauli_components(p.eta())?;
    let (e0, e1, e3) = (e0.re, e1.re, e3.re);
    let (g1, g2) = (p.gamma_amp()[0], p.gamma_amp()[1]);
    let dg = 0.25 * (g1 - g2);
    let branch = |sign: f64| -> RMat {
        let cc = sign * e0 + 0.25 * (g1 + g2);
        let v = [sign * e1, sign * e3 + dg];
        let b = (v[0] * v[0] + v[1] * v[1]).sqrt();
        let (bx, bz) = if b > 0.0 { (v[0] / b, v[1] / b) } else { (0.0, 0.0) };
        let ch = (b * t).cosh();
        let sh = (b * t).sinh();
        RMat::from_row_slice(2, 2, &[ch - sh * bz, -sh * bx, -sh * bx, ch + sh * bz]) * (-cc * t).exp()
    };
    let (b1, b2) = (branch(1.0), branch(-1.0));
    Ok(PropagatorMN { m: to_complex(&((&b1 + &b2) * 0.5)), n: to_complex(&((&b1 - &b2) * 0.5)), t })
}

/// Fixed-step RK4 integration of the `M`, `N` equations; works for any
/// complex `η` and unequal damping.
pub fn propagate_mn_numeric(p: &SystemParams, t: f64, dt: f64) -> Result<PropagatorMN> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidParameter(format!("time step {dt} must be positive")));
    }
    if !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!("time {t} must be >= 0")));
    }
    let s = p.modes();
    let steps = (t / dt).ceil() as usize;
    let mut m = CMat::identity(s, s);
    let mut n = CMat::zeros(s, s);
    if steps == 0 {
        return Ok(PropagatorMN { m, n, t });
    }
    let h = t / steps as f64;
    let hc = re(h);
    let half = re(0.5 * h);
    for _ in 0..steps {
        let (k1m, k1n) = mn_rhs(p, &m, &n);
        let (k2m, k2n) = mn_rhs(p, &(&m + &k1m * half), &(&n + &k1n * half));
        let (k3m, k3n) = mn_rhs(p, &(&m + &k2m * half), &(&n + &k2n * half));
        let (k4m, k4n) = mn_rhs(p, &(&m + &k3m * hc), &(&n + &k3n * hc));
        let sixth = re(h / 6.0);
        m += (k1m + (k2m + k3m) * re(2.0) + k4m) * sixth;
        n += (k1n + (k2n + k3n) * re(2.0) + k4n) * sixth;
    }
    Ok(PropagatorMN { m, n, t })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropagatorKind {
    EqualDamping,
    RealEta,
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveOptions {
    /// Allow RK4 fallbacks where no closed form applies.
    pub allow_numeric: bool,
    /// Step used by the RK4 fallbacks.
    pub numeric_dt: f64,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        Self { allow_numeric: true, numeric_dt: 1e-3 }
    }
}

/// Picks the equal-damping closed form, then the real-η closed form, then
/// the numeric fallback.
pub fn propagate_mn(p: &SystemParams, t: f64, opts: &EvolveOptions) -> Result<(PropagatorMN, PropagatorKind)> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::InvalidParameter(format!("time {t} must be finite and >= 0")));
    }
    if p.equal_damping().is_some() {
        return Ok((propagate_mn_equal_damping(p, t)?, PropagatorKind::EqualDamping));
    }
    if p.eta_is_real() {
        return Ok((propagate_mn_real_eta(p, t)?, PropagatorKind::RealEta));
    }
    if !opts.allow_numeric {
        return Err(Error::NoPropagator);
    }
    Ok((propagate_mn_numeric(p, t, opts.numeric_dt)?, PropagatorKind::Numeric))
}

/// Steady coefficients when they exist. Without amplitude damping the noise
/// vanishes and `α = β = 0` is used.
pub fn steady_alpha_beta(p: &SystemParams) -> Result<SteadyAlphaBeta> {
    if !p.has_amplitude_damping() {
        return Ok(SteadyAlphaBeta::zero(p.modes()));
    }
    solve_alpha_beta(p)
}

/// Accumulated noise `Σ(t) = Γαβ − T Γαβ T†`, so that a Gaussian CM evolves
/// as `γ(t) = T γ(0) T† + Σ(t)`. At the degenerate point the Lyapunov
/// equation `dΣ/dt = GΣ + ΣG† + D` is integrated instead.
pub fn noise_matrix(p: &SystemParams, prop: &PropagatorMN, opts: &EvolveOptions) -> Result<CMat> {
    match steady_alpha_beta(p) {
        Ok(ab) => {
            let gab = ab.full();
            let tb = prop.block();
            Ok(&gab - &tb * &gab * tb.adjoint())
        }
        Err(Error::Degenerate(_)) if opts.allow_numeric => Ok(noise_matrix_numeric(p, prop.t, opts.numeric_dt)),
        Err(e) => Err(e),
    }
}

fn noise_matrix_numeric(p: &SystemParams, t: f64, dt: f64) -> CMat {
    let s = p.modes();
    let g = p.drift();
    let gd = g.adjoint();
    let d = p.diffusion();
    let rhs = |x: &CMat| &g * x + x * &gd + &d;
    let steps = (t / dt).ceil().max(0.0) as usize;
    let mut x = CMat::zeros(2 * s, 2 * s);
    if steps == 0 {
        return x;
    }
    let h = t / steps as f64;
    for _ in 0..steps {
        let k1 = rhs(&x);
        let k2 = rhs(&(&x + &k1 * re(0.5 * h)));
        let k3 = rhs(&(&x + &k2 * re(0.5 * h)));
        let k4 = rhs(&(&x + &k3 * re(h)));
        x += (k1 + (k2 + k3) * re(2.0) + k4) * re(h / 6.0);
    }
    x
}

/// Exact evolution of a Gaussian state:
/// `γ(t) = T(γ(0) − Γαβ)T† + Γαβ` and `m(t) = M*m(0) − N m*(0)`.
pub fn evolve_gaussian(state: &GaussianState, p: &SystemParams, t: f64) -> Result<GaussianState> {
    evolve_gaussian_with(state, p, t, &EvolveOptions::default())
}

pub fn evolve_gaussian_with(
    state: &GaussianState,
    p: &SystemParams,
    t: f64,
    opts: &EvolveOptions,
) -> Result<GaussianState> {
    if state.modes() != p.modes() {
        return Err(Error::Dimension { expected: p.modes(), found: state.modes() });
    }
    if p.has_phase_damping() {
        return Err(Error::Unsupported(
            "phase damping does not preserve Gaussianity; use the characteristic-function route".into(),
        ));
    }
    if t == 0.0 {
        return Ok(state.clone());
    }
    let (prop, _) = propagate_mn(p, t, opts)?;
    let tb = prop.block();
    let sigma = noise_matrix(p, &prop, opts)?;
    let cm = &tb * state.cm() * tb.adjoint() + sigma;
    let m0 = state.mean();
    let mean: CVec = conj(&prop.m) * m0 - &prop.n * m0.map(|z| z.conj());
    GaussianState::new(mean, cm)
}

/// Largest eigenvalue of the (Hermitian) drift generator; negative iff the
/// dynamics contracts to a steady state.
pub fn max_drift_eigenvalue(p: &SystemParams) -> f64 {
    max_eigenvalue_hermitian(&p.drift())
}

/// The Gaussian fixed point `[[α, β*], [β, α*]]` with zero mean.
pub fn steady_state(p: &SystemParams) -> Result<GaussianState> {
    if p.has_phase_damping() && p.has_squeezed_bath() {
        return Err(Error::Unsupported("steady state with phase damping and squeezed bath".into()));
    }
    let lam = max_drift_eigenvalue(p);
    if lam >= -1e-12 {
        return Err(Error::NotContractive(lam));
    }
    let ab = solve_alpha_beta(p)?;
    GaussianState::new(CVec::zeros(p.modes()), ab.full())
}

/// One-mode complex CM for a thermal input `N` in the over-amplified regime
/// `Γ < 2η` (real `η > 0`, `w = 0`), with `cosh r₀ = 2η/√(4η² − Γ²)`:
///
/// ```text
/// γ(t) = e^{−Γt}(N+½)[cosh 2ηt σ₀ + sinh 2ηt σ₁]
///      + (n̄+½) sinh r₀ [e^{−Γt}(sinh(2ηt+r₀)σ₀ + cosh(2ηt+r₀)σ₁) − (sinh r₀ σ₀ + cosh r₀ σ₁)]
/// ```
pub fn overamplified_thermal_cm(n: f64, nbar: f64, eta: f64, gamma: f64, t: f64) -> Result<CMat> {
    if !(eta > 0.0) || !(gamma >= 0.0) || gamma >= 2.0 * eta {
        return Err(Error::InvalidParameter("requires real η > 0 and 0 ≤ Γ < 2η".into()));
    }
    let root = (4.0 * eta * eta - gamma * gamma).sqrt();
    let r0 = (2.0 * eta / root).acosh();
    let decay = (-gamma * t).exp();
    let x = 2.0 * eta * t;
    let a = decay * (n + 0.5) * x.cosh() + (nbar + 0.5) * r0.sinh() * (decay * (x + r0).sinh() - r0.sinh());
    let b = decay * (n + 0.5) * x.sinh() + (nbar + 0.5) * r0.sinh() * (decay * (x + r0).cosh() - r0.cosh());
    Ok(CMat::from_row_slice(2, 2, &[re(a), re(b), re(b), re(a)]))
}
