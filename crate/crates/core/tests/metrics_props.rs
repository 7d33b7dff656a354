mod common;

use charevo::evolution::{evolve_gaussian, steady_state};
use charevo::gaussian::{GaussianState, RealCM};
use charevo::linalg::{re, RMat};
use charevo::metrics::{
    eof_saturation, eof_time_curve, local_invariants, ppt_separable, purity_general, purity_one_mode,
    purity_squeezed_thermal_t, simon_separability, squeezed_thermal_purity_asymptote, standard_form, ultimate_purity,
};
use charevo::params::SystemParams;
use common::random_two_mode_cm;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pair(eta1: f64, gamma: f64, nbar0: f64) -> SystemParams {
    SystemParams::two_mode_symmetric(re(eta1), gamma, nbar0).unwrap()
}

#[test]
fn squeezed_thermal_purity_matches_evolution() {
    for &(n, r, nbar, eta, gamma) in &[(0.2, 0.0, 0.1, 0.5, 0.4), (0.0, 0.3, 0.0, 0.6, 0.2), (0.5, 0.2, 0.3, 0.4, 0.7)]
    {
        let p = SystemParams::one_mode(re(eta), gamma, nbar, re(0.0)).unwrap();
        let init = GaussianState::squeezed_thermal(n, r, 0.0).unwrap();
        for t in [0.0, 0.5, 1.0, 2.0] {
            let g = evolve_gaussian(&init, &p, t).unwrap();
            let cf = purity_squeezed_thermal_t(n, r, nbar, eta, gamma, t).unwrap();
            assert!((cf - purity_one_mode(&g).unwrap()).abs() < 1e-10, "{n} {r} {t}");
        }
    }
}

#[test]
fn squeezed_thermal_purity_reaches_asymptote() {
    let (n, nbar, eta, gamma) = (0.2, 0.1, 0.5, 0.4);
    let t = 8.0 / (eta - 0.5 * gamma);
    let mu = purity_squeezed_thermal_t(n, 0.0, nbar, eta, gamma, t).unwrap();
    let scaled = mu * ((eta - 0.5 * gamma) * t).exp();
    let asym = squeezed_thermal_purity_asymptote(n, nbar, eta, gamma).unwrap();
    assert!((scaled / asym - 1.0).abs() < 0.01);
}

#[test]
fn steady_purity_closed_form() {
    let p = SystemParams::one_mode(re(0.25), 1.0, 0.0, re(0.0)).unwrap();
    let st = steady_state(&p).unwrap();
    assert!((ultimate_purity(&p).unwrap() - purity_one_mode(&st).unwrap()).abs() < 1e-12);
}

#[test]
fn ultimate_purity_decreases_with_drive() {
    let mut last = f64::INFINITY;
    for k in 0..50 {
        let eta = 0.49 * k as f64 / 49.0;
        let u = ultimate_purity(&SystemParams::one_mode(re(eta), 1.0, 0.2, re(0.0)).unwrap()).unwrap();
        assert!(u <= last + 1e-15);
        last = u;
    }
}

#[test]
fn eof_saturation_increases_with_drive() {
    for n0 in [0.0, 0.3, 0.6] {
        let mut last = 0.0;
        for k in 0..200 {
            let eta1 = 2.0 * k as f64 / 199.0;
            let e = eof_saturation(&pair(eta1, 1.0, n0)).unwrap().value;
            assert!(e >= last - 1e-15);
            last = e;
        }
    }
}

#[test]
fn eof_curve_reaches_saturation() {
    for &(eta1, n0) in &[(0.3, 0.1), (0.45, 0.0), (0.8, 0.6), (1.2, 0.2)] {
        let p = pair(eta1, 1.0, n0);
        let curve = eof_time_curve(&p, &GaussianState::vacuum(2), &[20.0]).unwrap();
        let sat = eof_saturation(&p).unwrap().value;
        assert!((curve[0].value - sat).abs() < 1e-6, "{eta1} {n0}: {} vs {sat}", curve[0].value);
    }
}

#[test]
fn simon_agrees_with_ppt_on_random_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut entangled = 0;
    for _ in 0..500 {
        let cm = random_two_mode_cm(&mut rng);
        let simon = simon_separability(&cm).unwrap();
        assert_eq!(simon.separable, ppt_separable(&cm).unwrap());
        entangled += usize::from(!simon.separable);
    }
    assert!(entangled > 50 && entangled < 450, "{entangled}");
}

#[test]
fn standard_form_preserves_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for _ in 0..200 {
        let cm = random_two_mode_cm(&mut rng);
        let sf = standard_form(&cm).unwrap();
        let (a, b) = (local_invariants(&cm).unwrap(), local_invariants(&sf).unwrap());
        for k in 0..4 {
            assert!((a[k] - b[k]).abs() < 1e-10 * a[k].abs().max(1.0), "{k}: {} vs {}", a[k], b[k]);
        }
        let g = sf.gamma_c();
        assert!(g[(0, 0)] >= g[(1, 1)].abs() - 1e-12);
        assert!(g[(0, 1)].abs() < 1e-10 && g[(1, 0)].abs() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn purity_in_unit_interval(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cm = random_two_mode_cm(&mut rng);
        let st = GaussianState::from_real(charevo::linalg::CVec::zeros(2), &cm).unwrap();
        let mu = purity_general(&st).unwrap();
        prop_assert!(mu > 0.0 && mu <= 1.0 + 1e-12);
        let pure = (cm.determinant() - 1.0 / 16.0).abs() < 1e-12;
        prop_assert_eq!(pure, (mu - 1.0).abs() < 1e-10);
    }

    #[test]
    fn locally_rotated_tms_keeps_invariants(r in 0.0..1.5f64, th1 in 0.0..std::f64::consts::TAU, th2 in 0.0..std::f64::consts::TAU) {
        let tms = GaussianState::two_mode_squeezed_thermal(0.2, r).unwrap().to_real().unwrap();
        let rot = |th: f64| RMat::from_row_slice(2, 2, &[th.cos(), -th.sin(), th.sin(), th.cos()]);
        let mut s = RMat::zeros(4, 4);
        s.view_mut((0, 0), (2, 2)).copy_from(&rot(th1));
        s.view_mut((2, 2), (2, 2)).copy_from(&rot(th2));
        let rotated = RealCM::new(&s * tms.matrix() * s.transpose()).unwrap();
        let sf = standard_form(&rotated).unwrap();
        let sf0 = standard_form(&tms).unwrap();
        prop_assert!((sf.matrix() - sf0.matrix()).amax() < 1e-10);
    }
}
