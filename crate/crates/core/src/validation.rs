//! Cross-checks of the closed-form pipeline against the Fock-space oracle.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;

use crate::error::Result;
use crate::interferometry::parity_expectation;
use crate::oracle::{
    apply_two_mode_squeeze, coherent_oracle_signal, interferometer_with, parity_of, squeeze_cutoff,
    BeamSplitter, OracleState, DEFAULT_LEAK_THRESHOLD,
};
use crate::polarization::{
    parity_signal_circular, parity_signal_linear, Handedness, PolarizedCoherentInput,
    RotationConfig,
};
use crate::states::{squeezed_number_coefficients, tsb_coefficients, TsbParams};

const COEFF_ORDERS: usize = 10;
const PHI_POINTS: usize = 64;
const COHERENT_CUTOFF: usize = 60;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub max_deviation: f64,
    pub samples: usize,
}

impl CheckOutcome {
    pub fn passes(&self, tolerance: f64) -> bool {
        self.max_deviation <= tolerance
    }
}

/// `cos δ|0,0⟩ + sin δ|1,1⟩` squeezed on the oracle lattice.
pub fn oracle_tsb(r: f64, delta: f64) -> Result<OracleState> {
    let input = OracleState::from_amplitudes(
        squeeze_cutoff(r, DEFAULT_LEAK_THRESHOLD),
        &[
            ((0, 0), Complex64::new(delta.cos(), 0.0)),
            ((1, 1), Complex64::new(delta.sin(), 0.0)),
        ],
    )?;
    apply_two_mode_squeeze(&input, r)
}

fn diagonal_deviation(state: &OracleState, coeffs: &[f64]) -> f64 {
    (0..=COEFF_ORDERS)
        .map(|n| {
            let g = coeffs.get(n).copied().unwrap_or(0.0);
            (state.amp(n, n) - g).norm()
        })
        .fold(0.0, f64::max)
}

pub fn check_tsb_coefficients() -> Result<CheckOutcome> {
    let mut worst = 0.0f64;
    let mut samples = 0;
    for &r in &[0.0, 0.25, 0.5, 1.0, 1.25] {
        for &delta in &[0.0, PI / 10.0, FRAC_PI_4, PI / 3.0, FRAC_PI_2] {
            let state = tsb_coefficients(TsbParams::new(r, delta)?, 1e-14)?;
            let squeezed = oracle_tsb(r, delta)?;
            worst = worst.max(diagonal_deviation(&squeezed, state.coeffs()));
            worst = worst.max(squeezed.off_diagonal_mass().sqrt());
            samples += COEFF_ORDERS + 1;
        }
    }
    Ok(CheckOutcome {
        name: "tsb coefficients",
        max_deviation: worst,
        samples,
    })
}

pub fn check_squeezed_number_coefficients() -> Result<CheckOutcome> {
    let mut worst = 0.0f64;
    let mut samples = 0;
    for &r in &[0.25, 0.5, 0.75, 1.0, 1.25] {
        let state = squeezed_number_coefficients(r, 1e-14)?;
        let input = OracleState::basis(1, 1, squeeze_cutoff(r, DEFAULT_LEAK_THRESHOLD))?;
        let squeezed = apply_two_mode_squeeze(&input, r)?;
        worst = worst.max(diagonal_deviation(&squeezed, state.coeffs()));
        samples += COEFF_ORDERS + 1;
    }
    Ok(CheckOutcome {
        name: "squeezed number coefficients",
        max_deviation: worst,
        samples,
    })
}

pub fn check_parity_signal() -> Result<CheckOutcome> {
    let mut worst = 0.0f64;
    let mut samples = 0;
    for &r in &[0.5, 1.0] {
        let bs = BeamSplitter::new(squeeze_cutoff(r, DEFAULT_LEAK_THRESHOLD));
        for &delta in &[0.0, PI / 10.0, FRAC_PI_4, FRAC_PI_2] {
            let state = tsb_coefficients(TsbParams::new(r, delta)?, 1e-14)?;
            let squeezed = oracle_tsb(r, delta)?;
            for &ell in &[1u32, 3] {
                for i in 0..PHI_POINTS {
                    let cfg = RotationConfig::new(ell, FRAC_PI_2 * i as f64 / PHI_POINTS as f64);
                    let brute = parity_of(&interferometer_with(&bs, &squeezed, &cfg)?);
                    worst = worst.max((brute - parity_expectation(&state, &cfg)).abs());
                    samples += 1;
                }
            }
        }
    }
    Ok(CheckOutcome {
        name: "parity signal",
        max_deviation: worst,
        samples,
    })
}

pub fn check_coherent_signals() -> Result<CheckOutcome> {
    let mut worst = 0.0f64;
    let mut samples = 0;
    for &nc in &[0.5, 3.0, 8.0] {
        for &ell in &[0u32, 1, 3] {
            for hand in [Handedness::Left, Handedness::Right] {
                for i in 0..PHI_POINTS {
                    let phi = PI * i as f64 / PHI_POINTS as f64;
                    let cfg = RotationConfig::new(ell, phi).with_handedness(hand);
                    let lp = coherent_oracle_signal(
                        &PolarizedCoherentInput::linear(nc)?,
                        &cfg,
                        COHERENT_CUTOFF,
                    )?;
                    let cp = coherent_oracle_signal(
                        &PolarizedCoherentInput::circular(nc, hand)?,
                        &cfg,
                        COHERENT_CUTOFF,
                    )?;
                    worst = worst
                        .max((lp - parity_signal_linear(nc, &cfg)).abs())
                        .max((cp - parity_signal_circular(nc, &cfg)).abs());
                    samples += 2;
                }
            }
        }
    }
    Ok(CheckOutcome {
        name: "coherent signals",
        max_deviation: worst,
        samples,
    })
}

/// Every oracle check, in a fixed order.
pub fn oracle_equivalence() -> Result<Vec<CheckOutcome>> {
    Ok(vec![
        check_tsb_coefficients()?,
        check_parity_signal()?,
        check_coherent_signals()?,
        check_squeezed_number_coefficients()?,
    ])
}
