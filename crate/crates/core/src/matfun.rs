//! Matrix hyperbolic functions of a complex symmetric matrix `ξ`:
//!
//! ```text
//! cosh|ξ|       = I + ξξ*/2! + (ξξ*)²/4! + …
//! sinh|ξ|/|ξ| ξ = ξ + ξξ*ξ/3! + (ξξ*)²ξ/5! + …
//! ```
//!
//! Both are functions of `X = ξξ*`, evaluated by scaling and squaring of the
//! Taylor series. An eigendecomposition route is provided for cross-checks,
//! together with the Pauli-algebra closed forms for two modes.

use crate::error::{Error, Result};
use crate::linalg::{norm1, re, CMat, C64};

const TAYLOR_TERMS: usize = 14;

/// Returns `(cosh|ξ|, sinh|ξ|/|ξ| · ξ)`.
pub fn matrix_cosh_sinh(xi: &CMat) -> (CMat, CMat) {
    assert!(xi.is_square());
    let n = xi.nrows();
    let x = xi * xi.map(|z| z.conj());
    // Scale X by 4^-j so that ‖X‖₁ ≤ 1, i.e. halve the hyperbolic argument j times.
    let nx = norm1(&x);
    let mut squarings = 0u32;
    if nx > 1.0 {
        squarings = (nx.log(4.0)).ceil() as u32;
    }
    let xs = &x * re(0.25f64.powi(squarings as i32));

    // cosh(√x) = Σ x^k/(2k)!, sinh(√x)/√x = Σ x^k/(2k+1)!
    let id = CMat::identity(n, n);
    let mut ch = id.clone();
    let mut sh = id.clone();
    let mut power = id.clone();
    let mut fact_even = 1.0f64;
    let mut fact_odd = 1.0f64;
    for k in 1..=TAYLOR_TERMS {
        power = &power * &xs;
        fact_even *= ((2 * k - 1) * (2 * k)) as f64;
        fact_odd *= ((2 * k) * (2 * k + 1)) as f64;
        ch += &power * re(1.0 / fact_even);
        sh += &power * re(1.0 / fact_odd);
    }
    // cosh 2y = 2cosh²y − 1, sinh 2y/2y = (sinh y/y) cosh y
    for _ in 0..squarings {
        sh = &sh * &ch;
        ch = (&ch * &ch) * re(2.0) - &id;
    }
    let sinh_part = sh * xi;
    (ch, sinh_part)
}

/// Same pair computed from the eigendecomposition of the Hermitian `ξξ*`.
///
/// `ξξ*` is Hermitian only when `ξ` is symmetric, which is checked.
pub fn matrix_cosh_sinh_eig(xi: &CMat) -> Result<(CMat, CMat)> {
    if !crate::linalg::is_symmetric(xi, 1e-12 * crate::linalg::max_abs(xi).max(1.0)) {
        return Err(Error::Structure("symmetric"));
    }
    let x = xi * xi.map(|z| z.conj());
    let h = (&x + x.adjoint()) * re(0.5);
    let eig = h.symmetric_eigen();
    let u = &eig.eigenvectors;
    let f = |g: &dyn Fn(f64) -> f64| {
        let d = eig.eigenvalues.map(|l| re(g(l.max(0.0))));
        u * CMat::from_diagonal(&d) * u.adjoint()
    };
    let ch = f(&|l: f64| l.sqrt().cosh());
    let sh = f(&sinhc_sqrt);
    Ok((ch, sh * xi))
}

/// `sinh(√x)/√x`, continuous at zero.
fn sinhc_sqrt(x: f64) -> f64 {
    let r = x.sqrt();
    if r < 1e-4 {
        1.0 + x / 6.0 + x * x / 120.0
    } else {
        r.sinh() / r
    }
}

/// Pauli decomposition `η = η₀σ₀ + η₁σ₁ + η₃σ₃` of a symmetric 2 × 2 matrix.
pub fn pauli_components(eta: &CMat) -> Result<(C64, C64, C64)> {
    if eta.shape() != (2, 2) {
        return Err(Error::Dimension { expected: 2, found: eta.nrows() });
    }
    if (eta[(0, 1)] - eta[(1, 0)]).norm() > 1e-12 * crate::linalg::max_abs(eta).max(1.0) {
        return Err(Error::Structure("symmetric"));
    }
    let e0 = (eta[(0, 0)] + eta[(1, 1)]) * 0.5;
    let e3 = (eta[(0, 0)] - eta[(1, 1)]) * 0.5;
    let e1 = (eta[(0, 1)] + eta[(1, 0)]) * 0.5;
    Ok((e0, e1, e3))
}

fn pauli(v0: C64, v: [f64; 3]) -> CMat {
    // v0 σ₀ + v·σ
    let i = C64::new(0.0, 1.0);
    CMat::from_row_slice(2, 2, &[v0 + re(v[2]), re(v[0]) - i * v[1], re(v[0]) + i * v[1], v0 - re(v[2])])
}

/// Closed-form two-mode `(cosh(|η|t), sinh(|η|t)/|η| · η)` from Pauli algebra.
///
/// With `C = |η₀|²+|η₁|²+|η₃|²`, `A = |η₀²−η₁²−η₃²|`, `B = √(C²−A²)` the
/// eigenvalues of `ηη*` are `C ± B`; the cosh part uses the equivalent
/// factorisation over `√((C±A)/2)`.
pub fn two_mode_pauli_closed_form(eta: &CMat, t: f64) -> Result<(CMat, CMat)> {
    let (e0, e1, e3) = pauli_components(eta)?;
    let cc = e0.norm_sqr() + e1.norm_sqr() + e3.norm_sqr();
    let a = (e0 * e0 - e1 * e1 - e3 * e3).norm();
    let b_raw = [
        (e0 * e1.conj() + e1 * e0.conj()).re,
        (C64::new(0.0, 1.0) * (e3 * e1.conj() - e1 * e3.conj())).re,
        (e0 * e3.conj() + e3 * e0.conj()).re,
    ];
    let b_len = (b_raw[0].powi(2) + b_raw[1].powi(2) + b_raw[2].powi(2)).sqrt();
    let b_unit = if b_len > 1e-300 { b_raw.map(|x| x / b_len) } else { [0.0; 3] };

    let xp = ((cc + a) / 2.0).max(0.0).sqrt() * t;
    let xm = ((cc - a) / 2.0).max(0.0).sqrt() * t;
    let cosh = pauli(re(xp.cosh() * xm.cosh()), b_unit.map(|v| v * xp.sinh() * xm.sinh()));

    // g(λ) = sinh(√λ t)/√λ, with g(0) = t
    let g = |lam: f64| {
        let lam = lam.max(0.0);
        sinhc_sqrt(lam * t * t) * t
    };
    let (gp, gm) = (g(cc + b_len), g(cc - b_len));
    let factor = pauli(re(0.5 * (gp + gm)), b_unit.map(|v| v * 0.5 * (gp - gm)));
    Ok((cosh, factor * eta))
}
