//! Gaussian states in the complex covariance-matrix convention.
//!
//! A state of `s` modes carries first moments `m_j = ⟨a_j⟩` and the complex
//! CM `γ = [[A, B*], [B, A*]]` with `A_jk = ⟨δa_j† δa_k⟩ + δ_jk/2` and
//! `B_jk = ⟨δa_j δa_k⟩`. Its characteristic function is
//! `exp[μm† − μ*mᵀ − ½(μ, −μ*) γ (μ*, −μ)ᵀ]`.
//!
//! The real CM uses quadratures `(x_j, −p_j)` per mode with vacuum variance
//! 1/2 and is obtained as `L γ L†` with the unitary `L` built from one
//! `[[i, i], [1, −1]]/√2` pattern per mode.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    block, block2, c, conj, diag_real, is_hermitian, is_symmetric, max_abs, min_eigenvalue_hermitian, re,
    symplectic_form, to_complex, CMat, CVec, RMat, C64, I,
};
use crate::params::ComplexRepr;

/// Default tolerance for the physicality check.
pub const PHYSICAL_TOL: f64 = 1e-9;
const STRUCTURE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    mean: CVec,
    cm: CMat,
}

/// Real symmetric covariance matrix in `(x₁, −p₁, x₂, −p₂, …)` order.
#[derive(Debug, Clone, PartialEq)]
pub struct RealCM {
    mat: RMat,
}

impl RealCM {
    pub fn new(mat: RMat) -> Result<Self> {
        if !mat.is_square() || !mat.nrows().is_multiple_of(2) || mat.nrows() == 0 {
            return Err(Error::Structure("a 2s × 2s matrix"));
        }
        let scale = mat.amax().max(1.0);
        let asym = (&mat - mat.transpose()).amax();
        if asym > 1e-12 * scale {
            return Err(Error::Structure("symmetric"));
        }
        let sym = (&mat + mat.transpose()) * 0.5;
        Ok(Self { mat: sym })
    }

    pub fn modes(&self) -> usize {
        self.mat.nrows() / 2
    }

    pub fn matrix(&self) -> &RMat {
        &self.mat
    }

    pub fn into_matrix(self) -> RMat {
        self.mat
    }

    fn sub(&self, r: usize, col: usize) -> nalgebra::Matrix2<f64> {
        self.mat.fixed_view::<2, 2>(2 * r, 2 * col).into_owned()
    }

    /// Local block of the first mode (two-mode states).
    pub fn gamma_a(&self) -> nalgebra::Matrix2<f64> {
        self.sub(0, 0)
    }

    /// Local block of the second mode (two-mode states).
    pub fn gamma_b(&self) -> nalgebra::Matrix2<f64> {
        self.sub(1, 1)
    }

    /// Correlation block between the two modes.
    pub fn gamma_c(&self) -> nalgebra::Matrix2<f64> {
        self.sub(0, 1)
    }

    pub fn from_blocks(
        a: &nalgebra::Matrix2<f64>,
        b: &nalgebra::Matrix2<f64>,
        cc: &nalgebra::Matrix2<f64>,
    ) -> Result<Self> {
        let mut m = RMat::zeros(4, 4);
        m.fixed_view_mut::<2, 2>(0, 0).copy_from(a);
        m.fixed_view_mut::<2, 2>(2, 2).copy_from(b);
        m.fixed_view_mut::<2, 2>(0, 2).copy_from(cc);
        m.fixed_view_mut::<2, 2>(2, 0).copy_from(&cc.transpose());
        Self::new(m)
    }

    pub fn determinant(&self) -> f64 {
        self.mat.determinant()
    }
}

/// The conjugation matrix `L` mapping complex to real CMs for `s` modes.
pub fn l_matrix(modes: usize) -> CMat {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut l = CMat::zeros(2 * modes, 2 * modes);
    for j in 0..modes {
        l[(2 * j, j)] = c(0.0, h);
        l[(2 * j, modes + j)] = c(0.0, h);
        l[(2 * j + 1, j)] = re(h);
        l[(2 * j + 1, modes + j)] = re(-h);
    }
    l
}

/// `L γ L†`, failing when the result is not real.
pub fn complex_to_real_cm(cm: &CMat) -> Result<RealCM> {
    if !cm.is_square() || !cm.nrows().is_multiple_of(2) {
        return Err(Error::Structure("a 2s × 2s matrix"));
    }
    let l = l_matrix(cm.nrows() / 2);
    let out = &l * cm * l.adjoint();
    let residue = out.iter().fold(0.0f64, |a, z| a.max(z.im.abs()));
    if residue > 1e-9 * max_abs(cm).max(1.0) {
        return Err(Error::ImaginaryResidue(residue));
    }
    RealCM::new(out.map(|z| z.re))
}

/// `L† σ L`, the inverse of [`complex_to_real_cm`].
pub fn real_to_complex_cm(rcm: &RealCM) -> CMat {
    let l = l_matrix(rcm.modes());
    let cm = l.adjoint() * to_complex(rcm.matrix()) * &l;
    symmetrize_blocks(&cm)
}

/// Projects onto the `[[A, B*], [B, A*]]` structure with `A` Hermitian and
/// `B` symmetric, removing rounding residue.
fn symmetrize_blocks(cm: &CMat) -> CMat {
    let s = cm.nrows() / 2;
    let a = (block(cm, s, 0, 0) + conj(&block(cm, s, 1, 1))) * re(0.5);
    let a = (&a + a.adjoint()) * re(0.5);
    let b = (block(cm, s, 1, 0) + conj(&block(cm, s, 0, 1))) * re(0.5);
    let b = (&b + b.transpose()) * re(0.5);
    block2(&a, &conj(&b), &b, &conj(&a))
}

impl GaussianState {
    pub fn new(mean: CVec, cm: CMat) -> Result<Self> {
        let s = mean.len();
        if s == 0 {
            return Err(Error::InvalidParameter("at least one mode required".into()));
        }
        if cm.shape() != (2 * s, 2 * s) {
            return Err(Error::Dimension { expected: 2 * s, found: cm.nrows() });
        }
        let scale = max_abs(&cm).max(1.0);
        let a = block(&cm, s, 0, 0);
        let b = block(&cm, s, 1, 0);
        if !is_hermitian(&a, STRUCTURE_TOL * scale) {
            return Err(Error::Structure("block-structured: A must be Hermitian"));
        }
        if !is_symmetric(&b, STRUCTURE_TOL * scale) {
            return Err(Error::Structure("block-structured: B must be symmetric"));
        }
        let d1 = crate::linalg::max_abs_diff(&block(&cm, s, 1, 1), &conj(&a));
        let d2 = crate::linalg::max_abs_diff(&block(&cm, s, 0, 1), &conj(&b));
        if d1.max(d2) > STRUCTURE_TOL * scale {
            return Err(Error::Structure("block-structured as [[A, B*], [B, A*]]"));
        }
        Ok(Self { mean, cm: symmetrize_blocks(&cm) })
    }

    pub fn from_blocks(mean: CVec, a: &CMat, b: &CMat) -> Result<Self> {
        Self::new(mean, block2(a, &conj(b), b, &conj(a)))
    }

    pub fn from_real(mean: CVec, rcm: &RealCM) -> Result<Self> {
        Self::new(mean, real_to_complex_cm(rcm))
    }

    pub fn vacuum(modes: usize) -> Self {
        Self { mean: CVec::zeros(modes), cm: diag_real(&vec![0.5; 2 * modes]) }
    }

    pub fn coherent(m0: &[C64]) -> Self {
        Self { mean: CVec::from_column_slice(m0), cm: diag_real(&vec![0.5; 2 * m0.len()]) }
    }

    /// Squeezed vacuum `exp[(ζa†² − ζ*a²)/2]|0⟩` with `ζ = r e^{iφ}`.
    pub fn squeezed(r: f64, phi: f64) -> Result<Self> {
        Self::squeezed_thermal(0.0, r, phi)
    }

    pub fn thermal(n: f64) -> Result<Self> {
        Self::squeezed_thermal(n, 0.0, 0.0)
    }

    /// Squeezed thermal state: `(N+½)[cosh 2r σ₀ + sinh 2r (cos φ σ₁ + sin φ σ₂)]`.
    pub fn squeezed_thermal(n: f64, r: f64, phi: f64) -> Result<Self> {
        if !(n >= 0.0) || !n.is_finite() {
            return Err(Error::InvalidParameter(format!("thermal occupation {n} must be >= 0")));
        }
        if !(r >= 0.0) || !r.is_finite() {
            return Err(Error::InvalidParameter(format!("squeezing {r} must be >= 0")));
        }
        let np = n + 0.5;
        let a = CMat::from_element(1, 1, re(np * (2.0 * r).cosh()));
        let b = CMat::from_element(1, 1, C64::from_polar(np * (2.0 * r).sinh(), phi));
        Self::from_blocks(CVec::zeros(1), &a, &b)
    }

    /// Two-mode squeezed thermal state with real CM
    /// `(N+½)(cosh 2r σ₀⊗σ₀ + sinh 2r σ₁⊗σ₃)`.
    pub fn two_mode_squeezed_thermal(n: f64, r: f64) -> Result<Self> {
        if !(n >= 0.0) || !n.is_finite() || !r.is_finite() {
            return Err(Error::InvalidParameter("N must be >= 0 and r finite".into()));
        }
        let np = n + 0.5;
        let (ch, sh) = ((2.0 * r).cosh() * np, (2.0 * r).sinh() * np);
        #[rustfmt::skip]
        let m = RMat::from_row_slice(4, 4, &[
            ch, 0.0, sh, 0.0,
            0.0, ch, 0.0, -sh,
            sh, 0.0, ch, 0.0,
            0.0, -sh, 0.0, ch,
        ]);
        Self::from_real(CVec::zeros(2), &RealCM::new(m)?)
    }

    /// Tensor product of independent states, modes concatenated in order.
    pub fn product(factors: &[GaussianState]) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidParameter("empty product".into()));
        }
        let s: usize = factors.iter().map(|f| f.modes()).sum();
        let mut mean = CVec::zeros(s);
        let mut a = CMat::zeros(s, s);
        let mut b = CMat::zeros(s, s);
        let mut off = 0;
        for f in factors {
            let k = f.modes();
            mean.rows_mut(off, k).copy_from(&f.mean);
            a.view_mut((off, off), (k, k)).copy_from(&f.a_block());
            b.view_mut((off, off), (k, k)).copy_from(&f.b_block());
            off += k;
        }
        Self::from_blocks(mean, &a, &b)
    }

    pub fn modes(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &CVec {
        &self.mean
    }

    pub fn cm(&self) -> &CMat {
        &self.cm
    }

    /// `A` block (`A_jk = ⟨δa_j† δa_k⟩ + δ_jk/2`).
    pub fn a_block(&self) -> CMat {
        block(&self.cm, self.modes(), 0, 0)
    }

    /// `B` block (`B_jk = ⟨δa_j δa_k⟩`).
    pub fn b_block(&self) -> CMat {
        block(&self.cm, self.modes(), 1, 0)
    }

    pub fn with_mean(mut self, mean: CVec) -> Result<Self> {
        if mean.len() != self.modes() {
            return Err(Error::Dimension { expected: self.modes(), found: mean.len() });
        }
        self.mean = mean;
        Ok(self)
    }

    pub fn to_real(&self) -> Result<RealCM> {
        complex_to_real_cm(&self.cm)
    }

    /// Minimum eigenvalue of `σ + (i/2)Ω`; the state is physical iff this is
    /// `≥ −tol`.
    pub fn physicality_margin(&self) -> Result<f64> {
        let sigma = self.to_real()?;
        Ok(physicality_margin(&sigma))
    }

    pub fn is_physical(&self, tol: f64) -> bool {
        self.physicality_margin().map(|m| m >= -tol).unwrap_or(false)
    }
}

/// Minimum eigenvalue of `σ + (i/2)Ω` for a real CM.
pub fn physicality_margin(sigma: &RealCM) -> f64 {
    let om = symplectic_form(sigma.modes());
    let h = to_complex(sigma.matrix()) + to_complex(&om) * (I * 0.5);
    min_eigenvalue_hermitian(&h)
}

/// Diagnostic form of the physicality check for a state.
pub fn check_physical(state: &GaussianState) -> Result<f64> {
    state.physicality_margin()
}

/// Families of initial states the CLI and the Fock oracle can construct.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum StateSpec {
    Vacuum {
        #[serde(default = "one")]
        modes: usize,
    },
    Coherent {
        m: Vec<ComplexRepr>,
    },
    Squeezed {
        r: f64,
        #[serde(default)]
        phi: f64,
    },
    Thermal {
        n: f64,
    },
    SqueezedThermal {
        n: f64,
        r: f64,
        #[serde(default)]
        phi: f64,
    },
    TwoModeSqueezedThermal {
        #[serde(default)]
        n: f64,
        r: f64,
    },
    /// Fock number state `|n⟩` of one mode (non-Gaussian).
    Fock {
        n: usize,
    },
    Product {
        factors: Vec<StateSpec>,
    },
}

fn one() -> usize {
    1
}

impl StateSpec {
    pub fn modes(&self) -> usize {
        match self {
            StateSpec::Vacuum { modes } => *modes,
            StateSpec::Coherent { m } => m.len(),
            StateSpec::TwoModeSqueezedThermal { .. } => 2,
            StateSpec::Product { factors } => factors.iter().map(|f| f.modes()).sum(),
            _ => 1,
        }
    }

    pub fn is_gaussian(&self) -> bool {
        match self {
            StateSpec::Fock { n } => *n == 0,
            StateSpec::Product { factors } => factors.iter().all(|f| f.is_gaussian()),
            _ => true,
        }
    }

    pub fn to_gaussian(&self) -> Result<GaussianState> {
        match self {
            StateSpec::Vacuum { modes } => {
                if *modes == 0 {
                    return Err(Error::InvalidParameter("vacuum needs at least one mode".into()));
                }
                Ok(GaussianState::vacuum(*modes))
            }
            StateSpec::Coherent { m } => {
                if m.is_empty() {
                    return Err(Error::InvalidParameter("coherent state needs amplitudes".into()));
                }
                let m: Vec<C64> = m.iter().map(|&z| z.into()).collect();
                Ok(GaussianState::coherent(&m))
            }
            StateSpec::Squeezed { r, phi } => GaussianState::squeezed(*r, *phi),
            StateSpec::Thermal { n } => GaussianState::thermal(*n),
            StateSpec::SqueezedThermal { n, r, phi } => GaussianState::squeezed_thermal(*n, *r, *phi),
            StateSpec::TwoModeSqueezedThermal { n, r } => GaussianState::two_mode_squeezed_thermal(*n, *r),
            StateSpec::Fock { n: 0 } => Ok(GaussianState::vacuum(1)),
            StateSpec::Fock { n } => Err(Error::Unsupported(format!("Fock state |{n}⟩ is not Gaussian"))),
            StateSpec::Product { factors } => {
                let fs = factors.iter().map(|f| f.to_gaussian()).collect::<Result<Vec<_>>>()?;
                GaussianState::product(&fs)
            }
        }
    }
}
