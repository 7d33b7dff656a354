//! Small dense complex linear-algebra helpers shared by every module.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type RMat = DMatrix<f64>;
pub type CVec = DVector<C64>;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Elementwise complex conjugate (no transpose).
pub fn conj(m: &CMat) -> CMat {
    m.map(|z| z.conj())
}

pub fn to_complex(m: &RMat) -> CMat {
    m.map(re)
}

pub fn real_part(m: &CMat) -> RMat {
    m.map(|z| z.re)
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

pub fn max_abs_diff_real(a: &RMat, b: &RMat) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).fold(0.0, |acc, (x, y)| acc.max((x - y).abs()))
}

pub fn is_symmetric(m: &CMat, tol: f64) -> bool {
    m.is_square() && max_abs_diff(m, &m.transpose()) <= tol
}

pub fn is_hermitian(m: &CMat, tol: f64) -> bool {
    m.is_square() && max_abs_diff(m, &m.adjoint()) <= tol
}

pub fn diag_real(values: &[f64]) -> CMat {
    CMat::from_diagonal(&CVec::from_iterator(values.len(), values.iter().map(|&v| re(v))))
}

pub fn diag_complex(values: &[C64]) -> CMat {
    CMat::from_diagonal(&CVec::from_column_slice(values))
}

/// Assembles `[[a, b], [c, d]]` from four equally sized square blocks.
pub fn block2(a: &CMat, b: &CMat, c: &CMat, d: &CMat) -> CMat {
    let n = a.nrows();
    let mut out = CMat::zeros(2 * n, 2 * n);
    out.view_mut((0, 0), (n, n)).copy_from(a);
    out.view_mut((0, n), (n, n)).copy_from(b);
    out.view_mut((n, 0), (n, n)).copy_from(c);
    out.view_mut((n, n), (n, n)).copy_from(d);
    out
}

/// Block `(row, col)` of a matrix partitioned into `n × n` blocks.
pub fn block(m: &CMat, n: usize, row: usize, col: usize) -> CMat {
    m.view((row * n, col * n), (n, n)).into_owned()
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue_hermitian(m: &CMat) -> f64 {
    let h = (m + m.adjoint()) * re(0.5);
    h.symmetric_eigen().eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
}

pub fn max_eigenvalue_hermitian(m: &CMat) -> f64 {
    let h = (m + m.adjoint()) * re(0.5);
    h.symmetric_eigen().eigenvalues.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
}

/// One-norm (max column sum), used for scaling decisions.
pub fn norm1(m: &CMat) -> f64 {
    (0..m.ncols()).map(|j| m.column(j).iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// The 2s × 2s symplectic form, one `[[0, 1], [-1, 0]]` block per mode.
pub fn symplectic_form(modes: usize) -> RMat {
    let mut om = RMat::zeros(2 * modes, 2 * modes);
    for j in 0..modes {
        om[(2 * j, 2 * j + 1)] = 1.0;
        om[(2 * j + 1, 2 * j)] = -1.0;
    }
    om
}

/// Principal square root of a symmetric positive semidefinite real matrix.
pub fn sqrt_psd(m: &RMat) -> RMat {
    let eig = m.clone().symmetric_eigen();
    let d = eig.eigenvalues.map(|v| v.max(0.0).sqrt());
    &eig.eigenvectors * RMat::from_diagonal(&d) * eig.eigenvectors.transpose()
}
