//! Polarized coherent inputs through the rotated interferometer.
//!
//! Path A carries the rotating elements: a relative phase `2ℓφ` from the Dove
//! prism and a polarization rotation by `2φ` from the half-wave plate. Only the
//! path-A output port is monitored, so everything here works with the two
//! polarization amplitudes leaving that port.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Sense of the circular polarization fed into the interferometer.
///
/// `Left` is the `varphi = −π/2` input; `Right` (`varphi = +π/2`) behaves like
/// the OAM winding reversed, `ℓ → −ℓ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Handedness {
    #[default]
    Left,
    Right,
}

/// OAM quantum number and angular displacement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationConfig {
    pub ell: u32,
    pub phi: f64,
    pub handedness: Handedness,
}

impl RotationConfig {
    pub fn new(ell: u32, phi: f64) -> Self {
        Self {
            ell,
            phi,
            handedness: Handedness::Left,
        }
    }

    pub fn with_handedness(mut self, handedness: Handedness) -> Self {
        self.handedness = handedness;
        self
    }

    pub fn at(self, phi: f64) -> Self {
        Self { phi, ..self }
    }

    /// `ℓ` with the handedness sign applied.
    pub fn signed_ell(&self) -> f64 {
        match self.handedness {
            Handedness::Left => self.ell as f64,
            Handedness::Right => -(self.ell as f64),
        }
    }

    /// Combined SAM + OAM phase factor per unit displacement, `ℓ + 1`.
    pub fn gain(&self) -> f64 {
        self.signed_ell() + 1.0
    }
}

/// `|α⟩_H |β e^{i varphi}⟩_V` entering path A, vacuum in path B.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizedCoherentInput {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub varphi: f64,
}

impl PolarizedCoherentInput {
    pub fn new(alpha: Complex64, beta: Complex64, varphi: f64) -> Result<Self> {
        let input = Self {
            alpha,
            beta,
            varphi,
        };
        let nc = input.mean_photon_number();
        if !nc.is_finite() || !varphi.is_finite() {
            return Err(Error::InvalidParameter {
                name: "input",
                value: nc,
                reason: "amplitudes and phase must be finite",
            });
        }
        Ok(input)
    }

    /// Horizontal polarization, `|α|² = N_C`.
    pub fn linear(nc: f64) -> Result<Self> {
        check_nc(nc)?;
        Self::new(
            Complex64::new(nc.sqrt(), 0.0),
            Complex64::new(0.0, 0.0),
            0.0,
        )
    }

    /// Circular polarization, `|α|² = |β|² = N_C / 2`, `varphi = ∓π/2`.
    pub fn circular(nc: f64, handedness: Handedness) -> Result<Self> {
        check_nc(nc)?;
        let amp = Complex64::new((nc / 2.0).sqrt(), 0.0);
        let varphi = match handedness {
            Handedness::Left => -FRAC_PI_2,
            Handedness::Right => FRAC_PI_2,
        };
        Self::new(amp, amp, varphi)
    }

    /// `N_C = |α|² + |β|²`.
    pub fn mean_photon_number(&self) -> f64 {
        self.alpha.norm_sqr() + self.beta.norm_sqr()
    }
}

fn check_nc(nc: f64) -> Result<()> {
    if nc.is_finite() && nc >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "nc",
            value: nc,
            reason: "mean photon number must be finite and non-negative",
        })
    }
}

/// Coherent amplitudes of the H and V modes leaving port A.
///
/// Uses the bare `ℓ`; the handedness flag only enters the closed-form circular
/// signal, where the input phase carries the handedness instead.
pub fn propagate_output_amplitudes(
    input: &PolarizedCoherentInput,
    cfg: &RotationConfig,
) -> (Complex64, Complex64) {
    let phi = cfg.phi;
    let oam = Complex64::from_polar(0.5, 2.0 * cfg.ell as f64 * phi);
    let (sin2, cos2) = (2.0 * phi).sin_cos();
    let alpha = input.alpha;
    let beta = input.beta * Complex64::from_polar(1.0, input.varphi);
    let h = oam * (alpha * cos2 - beta * sin2) - alpha / 2.0;
    let v = oam * (alpha * sin2 + beta * cos2) - beta / 2.0;
    (h, v)
}

/// `⟨γ_H, γ_V| Π̂ |γ_H, γ_V⟩ = exp(−2(|γ_H|² + |γ_V|²))`.
pub fn coherent_parity(h: Complex64, v: Complex64) -> f64 {
    (-2.0 * (h.norm_sqr() + v.norm_sqr())).exp()
}

/// Parity of port A for a horizontally polarized input of `nc` photons.
pub fn parity_signal_linear(nc: f64, cfg: &RotationConfig) -> f64 {
    let phi = cfg.phi;
    let ell = cfg.ell as f64;
    (-nc * (1.0 - (2.0 * phi).cos() * (2.0 * ell * phi).cos())).exp()
}

/// Parity of port A for a circularly polarized input of `nc` photons.
pub fn parity_signal_circular(nc: f64, cfg: &RotationConfig) -> f64 {
    let s = (cfg.gain() * cfg.phi).sin();
    (-2.0 * nc * s * s).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_4, PI};

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn zero_displacement_is_dark() {
        let input =
            PolarizedCoherentInput::new(Complex64::new(1.3, -0.2), Complex64::new(0.4, 0.9), 0.7)
                .unwrap();
        let (h, v) = propagate_output_amplitudes(&input, &RotationConfig::new(3, 0.0));
        assert!(h.norm() < 1e-15 && v.norm() < 1e-15);
    }

    #[test]
    fn quarter_turn_amplitudes() {
        let input = PolarizedCoherentInput::linear(1.0).unwrap();
        let (h, v) = propagate_output_amplitudes(&input, &RotationConfig::new(1, FRAC_PI_4));
        assert!(close(h, Complex64::new(-0.5, 0.0), 1e-15));
        assert!(close(v, Complex64::new(0.0, 0.5), 1e-15));
    }

    #[test]
    fn even_ell_half_turn_periodicity() {
        let input =
            PolarizedCoherentInput::new(Complex64::new(0.8, 0.1), Complex64::new(-0.3, 0.5), 0.2)
                .unwrap();
        for ell in [0, 2, 4] {
            for &phi in &[0.1, 0.77, 2.0] {
                let a = propagate_output_amplitudes(&input, &RotationConfig::new(ell, phi));
                let b = propagate_output_amplitudes(&input, &RotationConfig::new(ell, phi + PI));
                assert!(close(a.0, b.0, 1e-12) && close(a.1, b.1, 1e-12));
            }
        }
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(parity_signal_linear(3.0, &RotationConfig::new(1, 0.0)), 1.0);
        assert_eq!(
            parity_signal_circular(3.0, &RotationConfig::new(1, 0.0)),
            1.0
        );
        let lp = parity_signal_linear(3.0, &RotationConfig::new(1, PI / 2.0));
        assert!((lp - 1.0).abs() < 1e-15);
        let cp = parity_signal_circular(3.0, &RotationConfig::new(1, FRAC_PI_4));
        assert!((cp - (-6.0f64).exp()).abs() < 1e-15);
        for ell in 0..4u32 {
            for k in 0..6 {
                let phi = k as f64 * PI / (ell as f64 + 1.0);
                let cp = parity_signal_circular(2.5, &RotationConfig::new(ell, phi));
                assert!((cp - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn circular_period() {
        for ell in 0..5u32 {
            let period = PI / (ell as f64 + 1.0);
            for &phi in &[0.05, 0.4, 1.9] {
                let cfg = RotationConfig::new(ell, phi);
                let a = parity_signal_circular(4.0, &cfg);
                let b = parity_signal_circular(4.0, &cfg.at(phi + period));
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_negative_photon_number() {
        assert!(PolarizedCoherentInput::linear(-1.0).is_err());
        assert!(PolarizedCoherentInput::circular(f64::NAN, Handedness::Left).is_err());
    }

    proptest! {
        #[test]
        fn closed_forms_match_propagation(
            phi in -PI..PI,
            ell in 0u32..=4,
            nc in 0.0f64..10.0,
            right in any::<bool>(),
        ) {
            let handedness = if right { Handedness::Right } else { Handedness::Left };
            let cfg = RotationConfig::new(ell, phi).with_handedness(handedness);

            let lp = PolarizedCoherentInput::linear(nc).unwrap();
            let (h, v) = propagate_output_amplitudes(&lp, &cfg);
            prop_assert!((coherent_parity(h, v) - parity_signal_linear(nc, &cfg)).abs() < 1e-12);

            let cp = PolarizedCoherentInput::circular(nc, handedness).unwrap();
            let (h, v) = propagate_output_amplitudes(&cp, &cfg);
            prop_assert!((coherent_parity(h, v) - parity_signal_circular(nc, &cfg)).abs() < 1e-12);
        }

        #[test]
        fn signals_in_unit_interval(phi in -10.0f64..10.0, ell in 0u32..6, nc in 0.0f64..20.0) {
            let cfg = RotationConfig::new(ell, phi);
            for s in [parity_signal_linear(nc, &cfg), parity_signal_circular(nc, &cfg)] {
                prop_assert!((0.0..=1.0).contains(&s));
            }
        }
    }
}
