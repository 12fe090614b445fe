use std::f64::consts::FRAC_PI_2;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fwm_core::fock::{
    build_full_hamiltonian, coherent_state, elimination_fidelity, product_state, vacuum, with_atom, AtomLevel,
    FockConfig, Propagator,
};
use fwm_core::gaussian::{apply_scattering, make_state, InputSpec, ModeInput};
use fwm_core::params::couplings_from_p;
use fwm_core::scattering::{length_for_phase, transfer, transfer_shooting};
use fwm_core::{compute_sweep, preset};
use num_complex::Complex64;

fn scattering(c: &mut Criterion) {
    let (chi, sigma) = couplings_from_p(10.0).unwrap();
    let l = length_for_phase(chi, sigma, FRAC_PI_2);
    c.bench_function("transfer", |b| b.iter(|| transfer(black_box(chi), black_box(sigma), black_box(l))));

    let mut group = c.benchmark_group("transfer_shooting");
    for tol in [1e-6, 1e-8, 1e-10] {
        group.bench_with_input(BenchmarkId::from_parameter(tol), &tol, |b, &tol| {
            b.iter(|| transfer_shooting(chi, sigma, black_box(l), tol).unwrap())
        });
    }
    group.finish();
}

fn gaussian(c: &mut Criterion) {
    let (chi, sigma) = couplings_from_p(1.1).unwrap();
    let m = transfer(chi, sigma, 1.3);
    let state = make_state(&InputSpec::new(ModeInput::coherent(1.0, 0.0), ModeInput::squeezed(0.5))).unwrap();
    c.bench_function("apply_scattering", |b| b.iter(|| apply_scattering(black_box(&state), black_box(&m)).unwrap()));
}

fn fock(c: &mut Criterion) {
    let mut group = c.benchmark_group("fock_propagator");
    group.sample_size(20);
    for n_max in [4usize, 8, 12] {
        let cfg = FockConfig {
            n_max,
            w_amp: 0.05,
            g_coupling: 0.035,
            delta_one: 1.0,
            delta_two: 0.5,
        };
        let h = build_full_hamiltonian(&cfg).unwrap();
        group.bench_with_input(BenchmarkId::new("diagonalize", n_max), &h, |b, h| b.iter(|| Propagator::new(h).unwrap()));
        let prop = Propagator::new(&h).unwrap();
        let psi = with_atom(AtomLevel::A, &product_state(&coherent_state(n_max, Complex64::new(0.5, 0.0)), &vacuum(n_max)).unwrap());
        group.bench_with_input(BenchmarkId::new("apply", n_max), &psi, |b, psi| b.iter(|| prop.apply(psi, 100.0).unwrap()));
    }
    let cfg = FockConfig {
        n_max: 8,
        w_amp: 0.05,
        g_coupling: 0.035,
        delta_one: 1.0,
        delta_two: 0.5,
    };
    let psi = product_state(&coherent_state(8, Complex64::new(0.5, 0.0)), &vacuum(8)).unwrap();
    let t = cfg.effective_beat_period().unwrap();
    group.bench_function("elimination_fidelity/8", |b| b.iter(|| elimination_fidelity(&cfg, &psi, t).unwrap()));
    group.finish();
}

fn sweeps(c: &mut Criterion) {
    let mut group = c.benchmark_group("sweep");
    group.sample_size(20);
    for name in ["fig2b", "fig3b", "fig4b"] {
        let cfg = preset(name).unwrap();
        group.bench_function(name, |b| b.iter(|| compute_sweep(&cfg).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, scattering, gaussian, fock, sweeps);
criterion_main!(benches);
