use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use parity_metrology::interferometry::{legendre, legendre_derivative};
use parity_metrology::oracle::{
    apply_interferometer, apply_two_mode_squeeze, interferometer_with, parity_of, squeeze_cutoff,
    BeamSplitter, OracleState, DEFAULT_LEAK_THRESHOLD,
};
use parity_metrology::states::{squeezed_vacuum_coefficients, tsb_coefficients};
use parity_metrology::validation::{self, oracle_tsb};
use parity_metrology::{parity_derivative, parity_expectation, RotationConfig, TsbParams};

#[test]
fn report_passes_at_default_tolerance() {
    let report = validation::oracle_equivalence().unwrap();
    assert_eq!(report.len(), 4);
    for check in &report {
        assert!(check.samples > 0);
        assert!(check.passes(1e-8), "{check:?}");
        assert!(!check.passes(1e-300) || check.max_deviation == 0.0);
    }
}

#[test]
fn signal_matches_oracle_at_intermediate_delta() {
    let (r, delta) = (1.0, PI / 3.0);
    let state = tsb_coefficients(TsbParams::new(r, delta).unwrap(), 1e-14).unwrap();
    let squeezed = oracle_tsb(r, delta).unwrap();
    let bs = BeamSplitter::new(squeezed.n_max_total());
    for i in 0..64 {
        let cfg = RotationConfig::new(2, -0.6 + 1.2 * i as f64 / 63.0);
        let brute = parity_of(&interferometer_with(&bs, &squeezed, &cfg).unwrap());
        assert!(
            (brute - parity_expectation(&state, &cfg)).abs() < 1e-8,
            "φ = {}",
            cfg.phi
        );
    }
}

#[test]
fn squeezing_a_superposition_stays_on_the_diagonal() {
    let n_max = squeeze_cutoff(0.8, DEFAULT_LEAK_THRESHOLD);
    let input = OracleState::from_amplitudes(
        n_max,
        &[
            ((0, 0), Complex64::new(0.6, 0.0)),
            ((2, 2), Complex64::new(0.0, 0.8)),
        ],
    )
    .unwrap();
    let out = apply_two_mode_squeeze(&input, 0.8).unwrap();
    assert!(out.off_diagonal_mass() < 1e-20);
    assert!((out.norm_sqr() + out.leakage() - 1.0).abs() < 1e-12);
}

#[test]
fn squeezed_vacuum_parity_at_origin() {
    // sech 2r for the two-mode squeezed vacuum
    for &r in &[0.3, 0.7, 1.1] {
        let squeezed = oracle_tsb(r, 0.0).unwrap();
        let brute =
            parity_of(&apply_interferometer(&squeezed, &RotationConfig::new(1, 0.0)).unwrap());
        let state = squeezed_vacuum_coefficients(r, 1e-14).unwrap();
        let closed = parity_expectation(&state, &RotationConfig::new(1, 0.0));
        let sech = 1.0 / (2.0 * r).cosh();
        assert!((brute - sech).abs() < 1e-9);
        assert!((closed - sech).abs() < 1e-12);
    }
}

#[test]
fn legendre_derivative_matches_finite_differences() {
    let h = 1e-6;
    for n in 0..=40 {
        for i in 1..40 {
            let x = -1.0 + 2.0 * i as f64 / 40.0;
            let fd = (legendre(n, x + h).unwrap() - legendre(n, x - h).unwrap()) / (2.0 * h);
            let d = legendre_derivative(n, x).unwrap();
            assert!((d - fd).abs() < 1e-6 * d.abs().max(1.0), "n = {n}, x = {x}");
        }
    }
}

#[test]
fn parity_derivative_matches_oracle_differences() {
    let (r, delta) = (0.7, FRAC_PI_2 / 3.0);
    let state = tsb_coefficients(TsbParams::new(r, delta).unwrap(), 1e-14).unwrap();
    let squeezed = oracle_tsb(r, delta).unwrap();
    let h = 1e-5;
    for &phi in &[0.05, 0.2, 0.33] {
        let cfg = RotationConfig::new(1, phi);
        let up = parity_of(&apply_interferometer(&squeezed, &cfg.at(phi + h)).unwrap());
        let down = parity_of(&apply_interferometer(&squeezed, &cfg.at(phi - h)).unwrap());
        let fd = (up - down) / (2.0 * h);
        let d = parity_derivative(&state, &cfg);
        assert!(
            (d - fd).abs() < 1e-5 * d.abs().max(1.0),
            "φ = {phi}: {d} vs {fd}"
        );
    }
}
