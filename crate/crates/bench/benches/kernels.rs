use std::hint::black_box;

use charevo::charfunc::{evolve_chi_general, evolve_chi_phase_damping, CharFunc};
use charevo::evolution::{evolve_gaussian, solve_alpha_beta};
use charevo::fock::{state_to_fock, Integrator};
use charevo::gaussian::StateSpec;
use charevo::linalg::{c, re, CMat, C64};
use charevo::matfun::matrix_cosh_sinh;
use charevo::{GaussianState, SystemParams};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn symmetric(s: usize) -> CMat {
    CMat::from_fn(s, s, |i, j| c(0.1 * (1 + i + j) as f64, 0.05 * (i as f64 - j as f64).abs()))
}

fn params(s: usize) -> SystemParams {
    let eta = symmetric(s) * re(0.4 / s as f64);
    SystemParams::new(eta, vec![1.0; s], vec![0.2; s], vec![c(0.05, 0.02); s], vec![0.0; s]).unwrap()
}

fn matfun(c_: &mut Criterion) {
    let mut g = c_.benchmark_group("matrix_cosh_sinh");
    for s in [2, 4, 8] {
        let xi = symmetric(s) * re(1.5);
        g.bench_with_input(BenchmarkId::from_parameter(s), &xi, |b, xi| b.iter(|| matrix_cosh_sinh(black_box(xi))));
    }
    g.finish();
}

fn alpha_beta(c_: &mut Criterion) {
    let mut g = c_.benchmark_group("solve_alpha_beta");
    for s in [1, 2, 3] {
        let p = params(s);
        g.bench_with_input(BenchmarkId::from_parameter(s), &p, |b, p| {
            b.iter(|| solve_alpha_beta(black_box(p)).unwrap())
        });
    }
    g.finish();
}

fn gaussian_evolution(c_: &mut Criterion) {
    let p = params(2);
    let init = GaussianState::vacuum(2);
    c_.bench_function("evolve_gaussian/2", |b| b.iter(|| evolve_gaussian(black_box(&init), &p, 1.0).unwrap()));
}

fn lindblad_rhs(c_: &mut Criterion) {
    let mut g = c_.benchmark_group("lindblad_rhs");
    for (modes, cutoff) in [(1, 30), (2, 14)] {
        let p = params(modes);
        let rho = state_to_fock(&StateSpec::Vacuum { modes }, cutoff).unwrap();
        let integ = Integrator::new(rho.space(), &p).unwrap();
        g.bench_function(BenchmarkId::new(format!("{modes}-mode"), cutoff), |b| {
            b.iter(|| integ.rhs(black_box(rho.matrix())))
        });
    }
    g.finish();
}

fn chi_eval(c_: &mut Criterion) {
    let mut g = c_.benchmark_group("chi_eval");
    let mu = [c(0.7, -0.4)];
    let general = evolve_chi_general(&CharFunc::fock_number(&[2]), &params(1), 1.0).unwrap();
    g.bench_function("general", |b| b.iter(|| general.eval(black_box(&mu)).unwrap()));
    let dephasing = SystemParams::phase_damping(vec![0.5]).unwrap();
    let phase = evolve_chi_phase_damping(&CharFunc::gaussian(GaussianState::coherent(&[re(1.0)])), &dephasing, 1.0, 64)
        .unwrap();
    g.bench_function("phase_damping", |b| b.iter(|| phase.eval(black_box(&mu)).unwrap()));
    let two: [C64; 2] = [c(0.3, 0.1), c(-0.2, 0.4)];
    let gaussian = evolve_chi_general(&CharFunc::gaussian(GaussianState::vacuum(2)), &params(2), 1.0).unwrap();
    g.bench_function("gaussian_2_mode", |b| b.iter(|| gaussian.eval(black_box(&two)).unwrap()));
    g.finish();
}

criterion_group!(kernels, matfun, alpha_beta, gaussian_evolution, lindblad_rhs, chi_eval);
criterion_main!(kernels);
