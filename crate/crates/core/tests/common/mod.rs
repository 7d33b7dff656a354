#![allow(dead_code)]

use charevo::charfunc::{square_grid, CharFunc};
use charevo::fock::{chi_from_rho, FockDensity};
use charevo::linalg::C64;

/// Largest |χ_analytic − χ_oracle| over a one-mode grid.
pub fn max_chi_error_1(chi: &CharFunc, rho: &FockDensity, grid: &[C64]) -> f64 {
    grid.iter().map(|&mu| (chi.eval(&[mu]).unwrap() - chi_from_rho(rho, &[mu]).unwrap()).norm()).fold(0.0, f64::max)
}

pub fn grid5() -> Vec<C64> {
    square_grid(5, 2.0)
}

/// A few two-mode probe points.
pub fn probes2() -> Vec<[C64; 2]> {
    vec![
        [C64::new(0.3, 0.1), C64::new(-0.2, 0.4)],
        [C64::new(0.8, 0.0), C64::new(0.0, 0.7)],
        [C64::new(0.0, 0.0), C64::new(1.0, -0.5)],
        [C64::new(-0.6, -0.6), C64::new(0.5, 0.2)],
    ]
}

use charevo::gaussian::RealCM;
use charevo::linalg::{CMat, RMat};
use charevo::params::SystemParams;
use rand::Rng;

/// Random complex symmetric matrix with entries in the unit box times `scale`.
pub fn random_symmetric<R: Rng>(rng: &mut R, s: usize, scale: f64) -> CMat {
    let mut m = CMat::zeros(s, s);
    for i in 0..s {
        for j in i..s {
            let z = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * scale;
            m[(i, j)] = z;
            m[(j, i)] = z;
        }
    }
    m
}

/// Random contractive parameters: `Γ_j ∈ [0.5, 1.5]`, `‖η‖` kept below `min Γ / 2`.
pub fn random_contractive<R: Rng>(rng: &mut R, s: usize, squeezed_bath: bool) -> SystemParams {
    let gamma: Vec<f64> = (0..s).map(|_| rng.gen_range(0.5..1.5)).collect();
    let gmin = gamma.iter().cloned().fold(f64::INFINITY, f64::min);
    let eta = random_symmetric(rng, s, 1.0);
    let norm = eta.norm();
    let eta = eta * C64::new(rng.gen_range(0.05..0.45) * gmin / norm, 0.0);
    let nbar: Vec<f64> = (0..s).map(|_| rng.gen_range(0.0..0.8)).collect();
    let w = nbar
        .iter()
        .map(|&n| {
            if squeezed_bath {
                C64::from_polar(
                    rng.gen_range(0.0..0.9) * (n * (n + 1.0)).sqrt(),
                    rng.gen_range(0.0..std::f64::consts::TAU),
                )
            } else {
                C64::new(0.0, 0.0)
            }
        })
        .collect();
    SystemParams::new(eta, gamma, nbar, w, vec![0.0; s]).unwrap()
}

fn local_symplectic<R: Rng>(rng: &mut R) -> RMat {
    let rot = |th: f64| RMat::from_row_slice(2, 2, &[th.cos(), -th.sin(), th.sin(), th.cos()]);
    let r = rng.gen_range(-0.8..0.8f64);
    let sq = RMat::from_row_slice(2, 2, &[r.exp(), 0.0, 0.0, (-r).exp()]);
    rot(rng.gen_range(0.0..std::f64::consts::TAU)) * sq * rot(rng.gen_range(0.0..std::f64::consts::TAU))
}

fn embed_local(a: &RMat, b: &RMat) -> RMat {
    let mut m = RMat::zeros(4, 4);
    m.view_mut((0, 0), (2, 2)).copy_from(a);
    m.view_mut((2, 2), (2, 2)).copy_from(b);
    m
}

/// Random physical two-mode real CM `S diag(ν₁,ν₁,ν₂,ν₂) Sᵀ` with a random
/// symplectic `S` built from local operations, a two-mode squeezer and a
/// beam splitter.
pub fn random_two_mode_cm<R: Rng>(rng: &mut R) -> RealCM {
    let n1 = 0.5 + rng.gen_range(0.0..1.0f64).powi(2);
    let n2 = 0.5 + rng.gen_range(0.0..1.0f64).powi(2);
    let d = RMat::from_diagonal(&nalgebra::DVector::from_vec(vec![n1, n1, n2, n2]));
    let r = rng.gen_range(0.0..1.0f64);
    let (ch, sh) = (r.cosh(), r.sinh());
    #[rustfmt::skip]
    let tms = RMat::from_row_slice(4, 4, &[
        ch, 0.0, sh, 0.0,
        0.0, ch, 0.0, -sh,
        sh, 0.0, ch, 0.0,
        0.0, -sh, 0.0, ch,
    ]);
    let th = rng.gen_range(0.0..1.57f64);
    let (c, s) = (th.cos(), th.sin());
    #[rustfmt::skip]
    let bs = RMat::from_row_slice(4, 4, &[
        c, 0.0, s, 0.0,
        0.0, c, 0.0, s,
        -s, 0.0, c, 0.0,
        0.0, -s, 0.0, c,
    ]);
    let s1 = embed_local(&local_symplectic(rng), &local_symplectic(rng));
    let s2 = embed_local(&local_symplectic(rng), &local_symplectic(rng));
    let sym = s2 * bs * tms * s1;
    RealCM::new(&sym * d * sym.transpose()).unwrap()
}
