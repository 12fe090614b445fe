use std::f64::consts::{FRAC_PI_2, PI};

use fwm_core::params::{classify_regime, couplings_from_p, Regime};
use fwm_core::scattering::{length_for_phase, s_param, transfer, transfer_shooting, unitarity_defect};
use fwm_core::SMatrix;
use nalgebra::Matrix2;
use num_complex::Complex64;
use proptest::prelude::*;

/// `exp(M L)` of the amplitude system by nalgebra's Pade exponential, then
/// the split boundary conditions solved by hand.
fn expm_oracle(chi: f64, sigma: f64, l: f64) -> (Complex64, Complex64) {
    let i = Complex64::i();
    let m = Matrix2::new(i * chi, i * sigma, -i * sigma, -i * chi) * Complex64::new(l, 0.0);
    let phi = m.exp();
    (1.0 / phi[(1, 1)], -phi[(1, 0)] / phi[(1, 1)])
}

fn dist(a: &SMatrix, b: &SMatrix) -> f64 {
    (a.s1 - b.s1).norm().max((a.s2 - b.s2).norm())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn unitary_everywhere(chi in -10.0..10.0f64, sigma in -10.0..10.0f64, l in 0.0..20.0f64) {
        let m = transfer(chi, sigma, l);
        prop_assert!(unitarity_defect(&m) < 1e-10, "defect {} at {chi} {sigma} {l}", unitarity_defect(&m));
        prop_assert!(m.orthogonality_defect() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn matches_matrix_exponential(chi in -3.0..3.0f64, sigma in -3.0..3.0f64, l in 0.0..4.0f64) {
        let m = transfer(chi, sigma, l);
        let (s1, s2) = expm_oracle(chi, sigma, l);
        let tol = 1e-10 * (1.0 + s1.norm());
        prop_assert!((m.s1 - s1).norm() < tol, "{:?} vs {:?}", m.s1, s1);
        prop_assert!((m.s2 - s2).norm() < tol, "{:?} vs {:?}", m.s2, s2);
    }

    #[test]
    fn matches_shooting(chi in -3.0..3.0f64, sigma in -3.0..3.0f64, phase in 0.0..(3.0 * PI)) {
        let s = s_param(chi, sigma).norm();
        let l = if s > 0.0 { (phase / s).min(8.0) } else { phase };
        let m = transfer(chi, sigma, l);
        let shot = transfer_shooting(chi, sigma, l, 1e-8).unwrap();
        prop_assert!(dist(&m, &shot) < 1e-8, "{} at {chi} {sigma} {l}", dist(&m, &shot));
    }

    #[test]
    fn continuous_across_band_edge(sigma in prop_oneof![-5.0..-0.1f64, 0.1..5.0f64], sl in 0.0..10.0f64, up in any::<bool>()) {
        // The first-order change grows like (sigma L)^2, so sigma L is bounded.
        let l = sl / sigma.abs();
        let edge = transfer(sigma, sigma, l);
        let gap = |eps: f64| {
            let eps = if up { eps } else { -eps };
            dist(&transfer(sigma * (1.0 + eps), sigma, l), &edge)
        };
        prop_assert!(gap(1e-7) < 1e-6, "{}", gap(1e-7));
        prop_assert!(gap(1e-8) < 0.2 * gap(1e-7) + 1e-12, "{} then {}", gap(1e-7), gap(1e-8));
    }

    #[test]
    fn propagating_periodicity(p in prop_oneof![-10.0..0.3f64, 1.01..20.0f64], x in 0.0..(2.0 * PI)) {
        prop_assume!(p.abs() > 1e-3);
        let (chi, sigma) = couplings_from_p(p).unwrap();
        prop_assert_eq!(classify_regime(chi, sigma), Regime::Propagating);
        let at = |x: f64| transfer(chi, sigma, length_for_phase(chi, sigma, x));
        let (m0, m2pi, mpi) = (at(x), at(x + 2.0 * PI), at(x + PI));
        prop_assert!(dist(&m0, &m2pi) < 1e-9);
        prop_assert!((m0.s1.norm_sqr() - mpi.s1.norm_sqr()).abs() < 1e-9);
        prop_assert!((m0.s2.norm_sqr() - mpi.s2.norm_sqr()).abs() < 1e-9);
    }

    #[test]
    fn band_gap_is_monotone(p in 0.34..0.99f64, l in 0.0..6.0f64, dl in 1e-3..1.0f64) {
        let (chi, sigma) = couplings_from_p(p).unwrap();
        prop_assert_eq!(classify_regime(chi, sigma), Regime::BandGap);
        let (a, b) = (transfer(chi, sigma, l), transfer(chi, sigma, l + dl));
        prop_assert!(b.s1.norm_sqr() < a.s1.norm_sqr());
        prop_assert!(b.s2.norm_sqr() > a.s2.norm_sqr());
    }
}

#[test]
fn shooting_at_special_phases() {
    for p in [10.0, 1.1, 2.5, -0.5] {
        let (chi, sigma) = couplings_from_p(p).unwrap();
        for x in [0.0, 1e-7, FRAC_PI_2, PI] {
            let l = length_for_phase(chi, sigma, x);
            let d = dist(&transfer(chi, sigma, l), &transfer_shooting(chi, sigma, l, 1e-8).unwrap());
            assert!(d < 1e-8, "P = {p}, sL = {x}: {d}");
        }
    }
}

#[test]
fn band_edge_closed_form() {
    // At chi = sigma the system is nilpotent: S1 = 1/(1 - i chi L).
    for (sigma, l) in [(1.0, 2.0), (-0.7, 5.0), (3.0, 0.25)] {
        let m = transfer(sigma, sigma, l);
        let s1 = 1.0 / Complex64::new(1.0, -sigma * l);
        assert!((m.s1 - s1).norm() < 1e-14);
        assert!((m.s2 - Complex64::i() * s1 * sigma * l).norm() < 1e-14);
        let shot = transfer_shooting(sigma, sigma, l, 1e-8).unwrap();
        assert!(dist(&m, &shot) < 1e-8);
    }
}
