mod common;

use charevo::charfunc::{
    eval_gaussian_chi, evolve_chi_amp_phase, evolve_chi_amplification, evolve_chi_amplitude_damping,
    evolve_chi_general, evolve_chi_phase_damping, purity_from_chi, CharFunc,
};
use charevo::evolution::evolve_gaussian;
use charevo::gaussian::GaussianState;
use charevo::linalg::{c, re, C64};
use charevo::metrics::purity_general;
use charevo::params::SystemParams;
use common::{grid5, random_contractive};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const ZERO: C64 = C64::new(0.0, 0.0);

fn mu_strategy() -> impl Strategy<Value = C64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(x, y)| c(x, y))
}

fn init_chi(kind: u8) -> CharFunc {
    match kind % 3 {
        0 => CharFunc::gaussian(GaussianState::coherent(&[c(0.5, -0.2)])),
        1 => CharFunc::gaussian(GaussianState::squeezed_thermal(0.3, 0.4, 1.1).unwrap()),
        _ => CharFunc::fock_number(&[2]),
    }
}

fn evolutions(chi: &CharFunc, t: f64) -> Vec<CharFunc> {
    let amp = SystemParams::one_mode(c(0.2, 0.1), 0.0, 0.0, ZERO).unwrap();
    let damp = SystemParams::one_mode(ZERO, 0.8, 0.3, c(0.1, 0.2)).unwrap();
    let phase = SystemParams::phase_damping(vec![0.4]).unwrap();
    let both = SystemParams::one_mode(ZERO, 0.6, 0.2, ZERO).unwrap().with_gamma_phase(vec![0.3]).unwrap();
    let general = SystemParams::one_mode(c(0.25, -0.1), 1.0, 0.2, c(0.05, 0.0)).unwrap();
    vec![
        evolve_chi_amplification(chi, &amp, t).unwrap(),
        evolve_chi_amplitude_damping(chi, &damp, t).unwrap(),
        evolve_chi_phase_damping(chi, &phase, t, 128).unwrap(),
        evolve_chi_amp_phase(chi, &both, t, 128).unwrap(),
        evolve_chi_general(chi, &general, t).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn normalization_bound_and_hermiticity(kind in 0u8..3, t in 0.0..2.0f64, mu in mu_strategy()) {
        for chi in evolutions(&init_chi(kind), t) {
            prop_assert!((chi.eval(&[ZERO]).unwrap() - re(1.0)).norm() < 1e-12);
            let v = chi.eval(&[mu]).unwrap();
            prop_assert!(v.norm() <= 1.0 + 1e-10);
            let w = chi.eval(&[-mu]).unwrap();
            prop_assert!((w - v.conj()).norm() < 1e-10);
        }
    }

    #[test]
    fn gaussian_closure(seed in any::<u64>(), t in 0.0..3.0f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_contractive(&mut rng, 2, true);
        let init = GaussianState::product(&[
            GaussianState::coherent(&[c(0.3, 0.2)]),
            GaussianState::squeezed(0.3, 0.5).unwrap(),
        ]).unwrap();
        let chi = evolve_chi_general(&CharFunc::gaussian(init.clone()), &p, t).unwrap();
        let g = evolve_gaussian(&init, &p, t).unwrap();
        for mu in [[c(0.3, 0.1), c(-0.2, 0.4)], [c(0.8, 0.0), c(0.0, 0.7)], [c(-1.0, 0.5), c(0.5, 0.5)]] {
            prop_assert!((chi.eval(&mu).unwrap() - eval_gaussian_chi(&g, &mu)).norm() < 1e-10);
        }
        prop_assert!(chi.is_gaussian());
    }
}

#[test]
fn limit_web() {
    let t = 1.3;
    for chi0 in [init_chi(0), init_chi(1), init_chi(2)] {
        let damp = SystemParams::one_mode(ZERO, 0.7, 0.3, c(0.1, -0.15)).unwrap();
        let amp = SystemParams::one_mode(c(0.3, 0.2), 0.0, 0.0, ZERO).unwrap();
        let pairs = [
            (evolve_chi_general(&chi0, &damp, t).unwrap(), evolve_chi_amplitude_damping(&chi0, &damp, t).unwrap()),
            (evolve_chi_general(&chi0, &amp, t).unwrap(), evolve_chi_amplification(&chi0, &amp, t).unwrap()),
        ];
        let unsq = SystemParams::one_mode(ZERO, 0.7, 0.3, ZERO).unwrap();
        let phase = SystemParams::phase_damping(vec![0.5]).unwrap();
        let more = [
            (
                evolve_chi_amp_phase(&chi0, &unsq, t, 256).unwrap(),
                evolve_chi_amplitude_damping(&chi0, &unsq, t).unwrap(),
            ),
            (
                evolve_chi_amp_phase(&chi0, &phase, t, 256).unwrap(),
                evolve_chi_phase_damping(&chi0, &phase, t, 256).unwrap(),
            ),
        ];
        for (a, b) in pairs.iter().chain(more.iter()) {
            for mu in grid5() {
                assert!((a.eval(&[mu]).unwrap() - b.eval(&[mu]).unwrap()).norm() < 1e-12);
            }
        }
    }
}

#[test]
fn zero_time_is_identity() {
    for chi0 in [init_chi(0), init_chi(2)] {
        for chi in evolutions(&chi0, 0.0) {
            for mu in grid5() {
                assert!((chi.eval(&[mu]).unwrap() - chi0.eval(&[mu]).unwrap()).norm() < 1e-14);
            }
        }
    }
}

#[test]
fn purity_by_quadrature_matches_determinant() {
    let states = [
        GaussianState::squeezed_thermal(0.4, 0.3, 0.2).unwrap(),
        evolve_gaussian(
            &GaussianState::coherent(&[re(0.5)]),
            &SystemParams::one_mode(re(0.3), 1.0, 0.2, ZERO).unwrap(),
            1.0,
        )
        .unwrap(),
    ];
    for st in states {
        let q = purity_from_chi(&CharFunc::gaussian(st.clone()), 64, 64).unwrap();
        assert!((q - purity_general(&st).unwrap()).abs() < 1e-6);
    }
    let two =
        GaussianState::product(&[GaussianState::thermal(0.3).unwrap(), GaussianState::squeezed(0.2, 0.0).unwrap()])
            .unwrap();
    let q = purity_from_chi(&CharFunc::gaussian(two.clone()), 24, 24).unwrap();
    assert!((q - purity_general(&two).unwrap()).abs() < 1e-6);
}
