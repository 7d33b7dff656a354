//! Truncated Fock-space Lindblad integrator used as a brute-force reference
//! for the analytic solutions.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{GaussianState, StateSpec};
use crate::linalg::{block2, max_abs_diff, min_eigenvalue_hermitian, re, CMat, CVec, C64};
use crate::params::{ParamsRecord, SystemParams};

/// Largest boundary population accepted by [`integrate`].
pub const MAX_TRACE_LOSS: f64 = 1e-3;
/// RK4 reaches `|z| ≈ 2.78` on the negative real axis; keep some margin.
const RK4_STABILITY: f64 = 2.5;

/// Product basis `|n_1, …, n_s⟩` with `0 ≤ n_j ≤ cutoff`; mode 0 is the most
/// significant digit, matching Kronecker products of single-mode matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockSpace {
    pub cutoff: usize,
    pub modes: usize,
}

impl FockSpace {
    pub fn new(cutoff: usize, modes: usize) -> Result<Self> {
        if cutoff == 0 || modes == 0 {
            return Err(Error::InvalidParameter("cutoff and mode count must be positive".into()));
        }
        Ok(Self { cutoff, modes })
    }

    pub fn dim(&self) -> usize {
        (self.cutoff + 1).pow(self.modes as u32)
    }

    fn stride(&self, j: usize) -> usize {
        (self.cutoff + 1).pow((self.modes - 1 - j) as u32)
    }

    pub fn occupation(&self, idx: usize, j: usize) -> usize {
        (idx / self.stride(j)) % (self.cutoff + 1)
    }

    pub fn index(&self, occ: &[usize]) -> usize {
        occ.iter().enumerate().map(|(j, &n)| n * self.stride(j)).sum()
    }

    pub fn on_boundary(&self, idx: usize) -> bool {
        (0..self.modes).any(|j| self.occupation(idx, j) == self.cutoff)
    }
}

/// Weighted partial permutation: row `p` holds at most one entry `(col, value)`.
/// Monomials in the ladder operators have this shape.
#[derive(Debug, Clone)]
struct LadderOp {
    map: Vec<Option<(usize, f64)>>,
}

impl LadderOp {
    fn identity(dim: usize) -> Self {
        Self { map: (0..dim).map(|p| Some((p, 1.0))).collect() }
    }

    fn lower(space: &FockSpace, j: usize) -> Self {
        let stride = space.stride(j);
        let map = (0..space.dim())
            .map(|p| {
                let n = space.occupation(p, j);
                (n < space.cutoff).then(|| (p + stride, ((n + 1) as f64).sqrt()))
            })
            .collect();
        Self { map }
    }

    fn raise(space: &FockSpace, j: usize) -> Self {
        Self::lower(space, j).adjoint()
    }

    fn mul(&self, other: &LadderOp) -> Self {
        let map = self.map.iter().map(|e| e.and_then(|(q, va)| other.map[q].map(|(r, vb)| (r, va * vb)))).collect();
        Self { map }
    }

    fn adjoint(&self) -> Self {
        let mut map = vec![None; self.map.len()];
        for (p, e) in self.map.iter().enumerate() {
            if let Some((q, v)) = *e {
                map[q] = Some((p, v));
            }
        }
        Self { map }
    }

    fn expectation(&self, rho: &CMat) -> C64 {
        self.map.iter().enumerate().filter_map(|(p, e)| e.map(|(q, v)| rho[(q, p)] * v)).sum()
    }
}

/// Sparse linear map on column-major `vec(ρ)`.
#[derive(Debug, Clone)]
pub struct Superoperator {
    dim: usize,
    row_start: Vec<usize>,
    src: Vec<usize>,
    coef: Vec<C64>,
}

impl Superoperator {
    /// Terms `c · A ρ B`.
    fn assemble(dim: usize, terms: &[(C64, LadderOp, LadderOp)]) -> Self {
        let mut entries: Vec<(usize, usize, C64)> = Vec::new();
        for (coef, a, b) in terms {
            if *coef == C64::new(0.0, 0.0) {
                continue;
            }
            let bt = b.adjoint();
            for (p, ea) in a.map.iter().enumerate() {
                let Some((pp, va)) = *ea else { continue };
                for (q, eb) in bt.map.iter().enumerate() {
                    let Some((qq, vb)) = *eb else { continue };
                    entries.push((p + q * dim, pp + qq * dim, coef * (va * vb)));
                }
            }
        }
        entries.sort_unstable_by_key(|&(o, s, _)| (o, s));
        let n = dim * dim;
        let mut row_start = Vec::with_capacity(n + 1);
        let mut src = Vec::with_capacity(entries.len());
        let mut coef: Vec<C64> = Vec::with_capacity(entries.len());
        let mut k = 0;
        for row in 0..n {
            row_start.push(src.len());
            while k < entries.len() && entries[k].0 == row {
                let (_, s, v) = entries[k];
                if src.len() > row_start[row] && *src.last().unwrap() == s {
                    *coef.last_mut().unwrap() += v;
                } else {
                    src.push(s);
                    coef.push(v);
                }
                k += 1;
            }
        }
        row_start.push(src.len());
        Self { dim, row_start, src, coef }
    }

    pub fn apply(&self, x: &[C64], out: &mut [C64]) {
        for (row, o) in out.iter_mut().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for k in self.row_start[row]..self.row_start[row + 1] {
                acc += self.coef[k] * x[self.src[k]];
            }
            *o = acc;
        }
    }

    /// Largest absolute row sum, an upper bound on the spectral radius.
    pub fn row_norm(&self) -> f64 {
        (0..self.dim * self.dim)
            .map(|row| (self.row_start[row]..self.row_start[row + 1]).map(|k| self.coef[k].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn nnz(&self) -> usize {
        self.src.len()
    }
}

/// Builds `dρ/dt` for the master equation
///
/// ```text
/// dρ/dt = ½Σ_jk [η_jk a_j†a_k† − η*_jk a_j a_k, ρ]
///       + Σ_j (Γ_j/2){(n̄_j+1)L[a_j] + n̄_j L[a_j†] − w_j* M[a_j] − w_j M[a_j†]}ρ
///       + Σ_j (γ_j/2) L[a_j†a_j]ρ
/// ```
///
/// with `L[o]ρ = 2oρo† − o†oρ − ρo†o` and `M[o]ρ = 2oρo − ooρ − ρoo`.
pub fn lindblad_superoperator(space: &FockSpace, p: &SystemParams) -> Result<Superoperator> {
    if space.modes != p.modes() {
        return Err(Error::Dimension { expected: p.modes(), found: space.modes });
    }
    let dim = space.dim();
    let id = LadderOp::identity(dim);
    let lower: Vec<LadderOp> = (0..space.modes).map(|j| LadderOp::lower(space, j)).collect();
    let raise: Vec<LadderOp> = (0..space.modes).map(|j| LadderOp::raise(space, j)).collect();
    let mut terms: Vec<(C64, LadderOp, LadderOp)> = Vec::new();
    let eta = p.eta();
    for j in 0..space.modes {
        for k in 0..space.modes {
            let e = eta[(j, k)];
            if e == C64::new(0.0, 0.0) {
                continue;
            }
            let up = raise[j].mul(&raise[k]);
            let down = lower[j].mul(&lower[k]);
            terms.push((e * 0.5, up.clone(), id.clone()));
            terms.push((-e * 0.5, id.clone(), up));
            terms.push((-e.conj() * 0.5, down.clone(), id.clone()));
            terms.push((e.conj() * 0.5, id.clone(), down));
        }
    }
    let dissipator = |terms: &mut Vec<(C64, LadderOp, LadderOp)>, kappa: f64, o: &LadderOp| {
        if kappa == 0.0 {
            return;
        }
        let od = o.adjoint();
        let n = od.mul(o);
        terms.push((re(2.0 * kappa), o.clone(), od));
        terms.push((re(-kappa), n.clone(), id.clone()));
        terms.push((re(-kappa), id.clone(), n));
    };
    let squeezer = |terms: &mut Vec<(C64, LadderOp, LadderOp)>, mu: C64, o: &LadderOp| {
        if mu == C64::new(0.0, 0.0) {
            return;
        }
        let oo = o.mul(o);
        terms.push((mu * 2.0, o.clone(), o.clone()));
        terms.push((-mu, oo.clone(), id.clone()));
        terms.push((-mu, id.clone(), oo));
    };
    for j in 0..space.modes {
        let g = p.gamma_amp()[j];
        let nb = p.nbar()[j];
        let w = p.w()[j];
        dissipator(&mut terms, 0.5 * g * (nb + 1.0), &lower[j]);
        dissipator(&mut terms, 0.5 * g * nb, &raise[j]);
        squeezer(&mut terms, -w.conj() * (0.5 * g), &lower[j]);
        squeezer(&mut terms, -w * (0.5 * g), &raise[j]);
        dissipator(&mut terms, 0.5 * p.gamma_phase()[j], &raise[j].mul(&lower[j]));
    }
    Ok(Superoperator::assemble(dim, &terms))
}

#[derive(Debug, Clone, PartialEq)]
pub struct FockDensity {
    space: FockSpace,
    rho: CMat,
}

impl FockDensity {
    pub fn new(space: FockSpace, rho: CMat) -> Result<Self> {
        if rho.nrows() != space.dim() || rho.ncols() != space.dim() {
            return Err(Error::Dimension { expected: space.dim(), found: rho.nrows() });
        }
        Ok(Self { space, rho })
    }

    pub fn pure(space: FockSpace, psi: &CVec) -> Result<Self> {
        Self::new(space, psi * psi.adjoint())
    }

    pub fn space(&self) -> FockSpace {
        self.space
    }

    pub fn cutoff(&self) -> usize {
        self.space.cutoff
    }

    pub fn modes(&self) -> usize {
        self.space.modes
    }

    pub fn matrix(&self) -> &CMat {
        &self.rho
    }

    pub fn trace(&self) -> C64 {
        self.rho.trace()
    }

    /// Population of basis states with some `n_j` at the cutoff.
    pub fn boundary_weight(&self) -> f64 {
        (0..self.space.dim()).filter(|&i| self.space.on_boundary(i)).map(|i| self.rho[(i, i)].re.abs()).sum()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        (&self.rho - self.rho.adjoint()).iter().fold(0.0, |a, z| a.max(z.norm()))
    }

    pub fn min_eigenvalue(&self) -> f64 {
        min_eigenvalue_hermitian(&self.rho)
    }

    /// `⟨a_j⟩`.
    pub fn mean(&self) -> CVec {
        CVec::from_iterator(
            self.modes(),
            (0..self.modes()).map(|j| LadderOp::lower(&self.space, j).expectation(&self.rho)),
        )
    }

    /// Gaussian moments `A_jk = ⟨δa_j†δa_k⟩ + ½δ_jk`, `B_jk = ⟨δa_jδa_k⟩`.
    pub fn moments(&self) -> Result<GaussianState> {
        let s = self.modes();
        let m = self.mean();
        let lower: Vec<LadderOp> = (0..s).map(|j| LadderOp::lower(&self.space, j)).collect();
        let mut a = CMat::zeros(s, s);
        let mut b = CMat::zeros(s, s);
        for j in 0..s {
            for k in 0..s {
                let adag_a = lower[j].adjoint().mul(&lower[k]).expectation(&self.rho);
                let aa = lower[j].mul(&lower[k]).expectation(&self.rho);
                a[(j, k)] = adag_a - m[j].conj() * m[k] + if j == k { re(0.5) } else { re(0.0) };
                b[(j, k)] = aa - m[j] * m[k];
            }
        }
        let a = (&a + a.adjoint()) * re(0.5);
        let b = (&b + b.transpose()) * re(0.5);
        GaussianState::new(m, block2(&a, &b.map(|z| z.conj()), &b, &a.map(|z| z.conj())))
    }

    fn symmetrize(&mut self) {
        self.rho = (&self.rho + self.rho.adjoint()) * re(0.5);
    }
}

/// `⟨m|D(μ)|n⟩` from the generalized Laguerre closed form, for
/// `0 ≤ m, n ≤ cutoff`.
pub fn displacement_matrix_exact(mu: C64, cutoff: usize) -> CMat {
    let x = mu.norm_sqr();
    let pref = (-0.5 * x).exp();
    let d = cutoff + 1;
    let ln_fact: Vec<f64> = std::iter::once(0.0)
        .chain((1..d).scan(0.0, |acc, k| {
            *acc += (k as f64).ln();
            Some(*acc)
        }))
        .collect();
    CMat::from_fn(d, d, |m, n| {
        let (lo, hi) = (m.min(n), m.max(n));
        let k = hi - lo;
        let base = if m >= n { mu } else { -mu.conj() };
        let ratio = (0.5 * (ln_fact[lo] - ln_fact[hi])).exp();
        base.powu(k as u32) * (pref * ratio * gen_laguerre(lo, k as f64, x))
    })
}

/// Generalized Laguerre polynomial `L_n^{(k)}(x)`.
pub fn gen_laguerre(n: usize, k: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + k - x;
    for i in 1..n {
        let fi = i as f64;
        let next = ((2.0 * fi + 1.0 + k - x) * cur - (fi + k) * prev) / (fi + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `exp(μa† − μ*a)` on the truncated space.
pub fn displacement_operator(mu: C64, cutoff: usize) -> CMat {
    let d = cutoff + 1;
    let mut gen = CMat::zeros(d, d);
    for n in 0..cutoff {
        let s = ((n + 1) as f64).sqrt();
        gen[(n + 1, n)] = mu * s;
        gen[(n, n + 1)] = -mu.conj() * s;
    }
    gen.exp()
}

/// `max |DD† − I|`.
pub fn unitary_defect(d: &CMat) -> f64 {
    let n = d.nrows();
    (d * d.adjoint() - CMat::identity(n, n)).iter().fold(0.0, |a, z| a.max(z.norm()))
}

/// `tr[ρ ⊗_j D(μ_j)]`.
pub fn chi_from_rho(rho: &FockDensity, mu: &[C64]) -> Result<C64> {
    let space = rho.space();
    if mu.len() != space.modes {
        return Err(Error::Dimension { expected: space.modes, found: mu.len() });
    }
    let ds: Vec<CMat> = mu.iter().map(|&z| displacement_matrix_exact(z, space.cutoff)).collect();
    let dim = space.dim();
    let occ: Vec<Vec<usize>> = (0..dim).map(|i| (0..space.modes).map(|j| space.occupation(i, j)).collect()).collect();
    let mut acc = C64::new(0.0, 0.0);
    for p in 0..dim {
        for q in 0..dim {
            let r = rho.rho[(p, q)];
            if r == C64::new(0.0, 0.0) {
                continue;
            }
            let mut d = re(1.0);
            for j in 0..space.modes {
                d *= ds[j][(occ[q][j], occ[p][j])];
            }
            acc += r * d;
        }
    }
    Ok(acc)
}

/// `tr ρ²`.
pub fn purity_from_rho(rho: &FockDensity) -> f64 {
    rho.rho.iter().map(|z| z.norm_sqr()).sum()
}

#[derive(Debug, Clone)]
pub struct FockRun {
    pub rho: FockDensity,
    pub t: f64,
    /// Largest boundary population seen along the trajectory.
    pub trace_loss: f64,
    pub steps: usize,
}

/// Fixed-step RK4 with Hermitian symmetrization after every step.
pub struct Integrator {
    space: FockSpace,
    superop: Superoperator,
    bound: f64,
}

impl Integrator {
    pub fn new(space: FockSpace, p: &SystemParams) -> Result<Self> {
        let superop = lindblad_superoperator(&space, p)?;
        let norm = superop.row_norm();
        let bound = if norm > 0.0 { RK4_STABILITY / norm } else { f64::INFINITY };
        Ok(Self { space, superop, bound })
    }

    pub fn stability_bound(&self) -> f64 {
        self.bound
    }

    pub fn rhs(&self, rho: &CMat) -> CMat {
        let mut out = CMat::zeros(rho.nrows(), rho.ncols());
        self.superop.apply(rho.as_slice(), out.as_mut_slice());
        out
    }

    /// Integrates through the ascending `times`, returning the state at each.
    pub fn run(&self, rho0: &FockDensity, times: &[f64], dt: f64) -> Result<Vec<FockRun>> {
        if rho0.space() != self.space {
            return Err(Error::Dimension { expected: self.space.dim(), found: rho0.space().dim() });
        }
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::InvalidParameter(format!("time step {dt} must be positive")));
        }
        if dt > self.bound {
            return Err(Error::StepTooLarge { dt, bound: self.bound });
        }
        let n = rho0.rho.len();
        let mut state = rho0.clone();
        let mut now = 0.0;
        let mut loss = state.boundary_weight();
        let mut total_steps = 0;
        let mut out = Vec::with_capacity(times.len());
        let (mut k1, mut k2, mut k3, mut k4) =
            (vec![C64::default(); n], vec![C64::default(); n], vec![C64::default(); n], vec![C64::default(); n]);
        let mut tmp = vec![C64::default(); n];
        for &t in times {
            if !(t >= now) || !t.is_finite() {
                return Err(Error::InvalidParameter("times must be finite and ascending from 0".into()));
            }
            let steps = ((t - now) / dt).ceil() as usize;
            if steps > 0 {
                let h = (t - now) / steps as f64;
                for _ in 0..steps {
                    let x = state.rho.as_slice();
                    self.superop.apply(x, &mut k1);
                    axpy(&mut tmp, x, &k1, 0.5 * h);
                    self.superop.apply(&tmp, &mut k2);
                    axpy(&mut tmp, x, &k2, 0.5 * h);
                    self.superop.apply(&tmp, &mut k3);
                    axpy(&mut tmp, x, &k3, h);
                    self.superop.apply(&tmp, &mut k4);
                    let xs = state.rho.as_mut_slice();
                    for i in 0..n {
                        xs[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (h / 6.0);
                    }
                    state.symmetrize();
                    loss = loss.max(state.boundary_weight());
                }
                total_steps += steps;
            }
            now = t;
            if loss > MAX_TRACE_LOSS {
                return Err(Error::CutoffTooSmall {
                    cutoff: self.space.cutoff,
                    weight: loss,
                    suggested: 2 * self.space.cutoff,
                });
            }
            out.push(FockRun { rho: state.clone(), t, trace_loss: loss, steps: total_steps });
        }
        Ok(out)
    }
}

fn axpy(out: &mut [C64], x: &[C64], k: &[C64], h: f64) {
    for i in 0..out.len() {
        out[i] = x[i] + k[i] * h;
    }
}

/// Single-time convenience wrapper around [`Integrator::run`].
pub fn integrate(rho0: &FockDensity, p: &SystemParams, t: f64, dt: f64) -> Result<FockRun> {
    let integ = Integrator::new(rho0.space(), p)?;
    Ok(integ.run(rho0, &[t], dt)?.remove(0))
}

fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

fn single_mode_pure(amps: Vec<C64>) -> CMat {
    let v = CVec::from_vec(amps);
    &v * v.adjoint()
}

fn ln_factorial(n: usize) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}

/// `exp(G)` applied to a density matrix built at a larger working cutoff and
/// truncated back, for squeezing transformations without closed forms.
fn conjugate_truncated(gen: &CMat, rho: &CMat, keep: usize) -> CMat {
    let u = gen.exp();
    let full = &u * rho * u.adjoint();
    full.view((0, 0), (keep, keep)).into_owned()
}

fn thermal_diag(n: f64, cutoff: usize) -> Vec<f64> {
    (0..=cutoff).map(|k| (n / (n + 1.0)).powi(k as i32) / (n + 1.0)).collect()
}

/// Extra levels used for squeezing thermal states before truncation.
const WORK_MARGIN: usize = 40;

fn one_mode_rho(spec: &StateSpec, cutoff: usize) -> Result<CMat> {
    let d = cutoff + 1;
    match spec {
        StateSpec::Vacuum { modes: 1 } | StateSpec::Fock { n: 0 } => {
            let mut r = CMat::zeros(d, d);
            r[(0, 0)] = re(1.0);
            Ok(r)
        }
        StateSpec::Fock { n } => {
            if *n > cutoff {
                return Err(Error::CutoffTooSmall { cutoff, weight: 1.0, suggested: 2 * n });
            }
            let mut r = CMat::zeros(d, d);
            r[(*n, *n)] = re(1.0);
            Ok(r)
        }
        StateSpec::Coherent { m } if m.len() == 1 => {
            let m: C64 = m[0].into();
            let amps = (0..d).map(|k| m.powu(k as u32) * (-0.5 * m.norm_sqr() - 0.5 * ln_factorial(k)).exp()).collect();
            Ok(single_mode_pure(amps))
        }
        StateSpec::Thermal { n } => {
            if !(*n >= 0.0) {
                return Err(Error::InvalidParameter("thermal occupation must be >= 0".into()));
            }
            Ok(CMat::from_diagonal(&DVector::from_iterator(d, thermal_diag(*n, cutoff).into_iter().map(re))))
        }
        StateSpec::Squeezed { r, phi } => {
            // ⟨2k|ψ⟩ = (e^{iφ} tanh r)^k √((2k)!)/(2^k k!) / √cosh r
            let x = C64::from_polar(r.tanh(), *phi);
            let amps = (0..d)
                .map(|n| {
                    if n % 2 == 1 {
                        return re(0.0);
                    }
                    let k = n / 2;
                    let mag = 0.5 * ln_factorial(n) - k as f64 * 2f64.ln() - ln_factorial(k) - 0.5 * r.cosh().ln();
                    x.powu(k as u32) * mag.exp()
                })
                .collect();
            Ok(single_mode_pure(amps))
        }
        StateSpec::SqueezedThermal { n, r, phi } => {
            let w = cutoff + WORK_MARGIN + 1;
            let zeta = C64::from_polar(*r, *phi);
            let mut gen = CMat::zeros(w, w);
            for k in 0..w - 2 {
                let s = (((k + 1) * (k + 2)) as f64).sqrt();
                gen[(k + 2, k)] = zeta * (0.5 * s);
                gen[(k, k + 2)] = -zeta.conj() * (0.5 * s);
            }
            let th = CMat::from_diagonal(&DVector::from_iterator(w, thermal_diag(*n, w - 1).into_iter().map(re)));
            Ok(conjugate_truncated(&gen, &th, d))
        }
        _ => Err(Error::Unsupported(format!("no single-mode Fock construction for {spec:?}"))),
    }
}

/// Two-mode squeezed thermal state `S₂(ρ_N ⊗ ρ_N)S₂†` with
/// `S₂ = exp[r(a†b† − ab)]`, computed sector by sector in `n_a − n_b`.
fn two_mode_squeezed_rho(n: f64, r: f64, cutoff: usize) -> Result<CMat> {
    let space = FockSpace::new(cutoff, 2)?;
    let dim = space.dim();
    let w = cutoff + WORK_MARGIN;
    let th = thermal_diag(n, w);
    let mut rho = CMat::zeros(dim, dim);
    for diff in -(w as i64)..=(w as i64) {
        // Chain |k + d⁺, k + d⁻⟩, k = 0 … len−1.
        let (da, db) = if diff >= 0 { (diff as usize, 0) } else { (0, (-diff) as usize) };
        let len = w + 1 - da.max(db);
        let mut gen = CMat::zeros(len, len);
        for k in 0..len - 1 {
            let s = (((k + da + 1) * (k + db + 1)) as f64).sqrt() * r;
            gen[(k + 1, k)] = re(s);
            gen[(k, k + 1)] = re(-s);
        }
        let u = gen.exp();
        let pops = CMat::from_diagonal(&DVector::from_iterator(len, (0..len).map(|k| re(th[k + da] * th[k + db]))));
        let block = &u * pops * u.adjoint();
        let keep: Vec<(usize, usize)> = (0..len)
            .filter(|&k| k + da <= cutoff && k + db <= cutoff)
            .map(|k| (k, space.index(&[k + da, k + db])))
            .collect();
        for &(k1, i1) in &keep {
            for &(k2, i2) in &keep {
                rho[(i1, i2)] = block[(k1, k2)];
            }
        }
    }
    Ok(rho)
}

/// Density matrix of a state family in the truncated basis.
pub fn state_to_fock(spec: &StateSpec, cutoff: usize) -> Result<FockDensity> {
    let space = FockSpace::new(cutoff, spec.modes())?;
    let rho = match spec {
        StateSpec::Vacuum { modes } if *modes > 1 => {
            let mut r = CMat::zeros(space.dim(), space.dim());
            r[(0, 0)] = re(1.0);
            r
        }
        StateSpec::Coherent { m } if m.len() > 1 => {
            let mut acc = CMat::from_element(1, 1, re(1.0));
            for &z in m {
                acc = kron(&acc, &one_mode_rho(&StateSpec::Coherent { m: vec![z] }, cutoff)?);
            }
            acc
        }
        StateSpec::TwoModeSqueezedThermal { n, r } => two_mode_squeezed_rho(*n, *r, cutoff)?,
        StateSpec::Product { factors } => {
            let mut acc = CMat::from_element(1, 1, re(1.0));
            for f in factors {
                acc = kron(&acc, state_to_fock(f, cutoff)?.matrix());
            }
            acc
        }
        _ => one_mode_rho(spec, cutoff)?,
    };
    FockDensity::new(space, rho)
}

/// Fock representation of a Gaussian state, which must come from one of the
/// constructor families. Arbitrary CMs are out of scope.
pub fn gaussian_to_fock(state: &GaussianState, spec: &StateSpec, cutoff: usize) -> Result<FockDensity> {
    if !spec.is_gaussian() {
        return Err(Error::Unsupported("spec is not Gaussian".into()));
    }
    let expected = spec.to_gaussian()?;
    let mean_diff = (expected.mean() - state.mean()).iter().fold(0.0f64, |a, z| a.max(z.norm()));
    let diff = max_abs_diff(expected.cm(), state.cm()).max(mean_diff);
    if diff > 1e-12 {
        return Err(Error::Unsupported("state does not match the given constructor family".into()));
    }
    state_to_fock(spec, cutoff)
}

/// Serialized comparison between an analytic solution and the Fock oracle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub params: ParamsRecord,
    pub cutoff: usize,
    pub dt: f64,
    pub trace_loss: f64,
    pub max_abs_chi_error: f64,
    pub max_purity_error: f64,
}
