//! Parity detection of twin-Fock states behind the rotated interferometer.
//!
//! For `Σ G(n)|n,n⟩` the port-A parity is a Legendre series in
//! `s = −cos θ` with `θ = 4(ℓ+1)φ`. Sensitivity follows from error propagation,
//! `Δφ = √(1 − ⟨Π⟩²) / |∂⟨Π⟩/∂φ|`.

mod curve;
mod legendre;

pub use curve::{resolution_metrics, CurveKind, CurveMeta, ResolutionMetrics, SignalCurve};
pub use legendre::{legendre, legendre_derivative};

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::polarization::RotationConfig;
use crate::states::TwinFockState;

/// Derivative magnitudes below this are treated as stationary points.
pub const STATIONARY_GUARD: f64 = 1e-300;

/// Default grid density for the optimal-sensitivity scan.
pub const DEFAULT_POINTS_PER_PERIOD: usize = 4096;

/// Period of the parity signal in `φ`, `π / [2(ℓ+1)]`.
pub fn signal_period(cfg: &RotationConfig) -> f64 {
    PI / (2.0 * cfg.gain().abs())
}

struct Phase {
    sin: f64,
    s: f64,
    gap: f64,
    rate: f64,
}

fn phase(cfg: &RotationConfig) -> Phase {
    let rate = 4.0 * cfg.gain();
    let theta = rate * cfg.phi;
    let half_cos = (0.5 * theta).cos();
    Phase {
        sin: theta.sin(),
        s: -theta.cos(),
        // 1 − s = 1 + cos θ
        gap: 2.0 * half_cos * half_cos,
        rate,
    }
}

fn evaluate(state: &TwinFockState, cfg: &RotationConfig) -> (legendre::SeriesValue, Phase) {
    let ph = phase(cfg);
    let out = legendre::series(&state.probabilities(), ph.s, ph.gap);
    (out, ph)
}

/// `⟨Π̂_A⟩ = Σ G(n)² P_n(−cos[4(ℓ+1)φ])` for the renormalized truncation.
pub fn parity_expectation(state: &TwinFockState, cfg: &RotationConfig) -> f64 {
    evaluate(state, cfg).0.value.clamp(-1.0, 1.0)
}

/// `1 − ⟨Π̂_A⟩`, free of cancellation near the signal peaks.
pub fn parity_deficit(state: &TwinFockState, cfg: &RotationConfig) -> f64 {
    evaluate(state, cfg).0.deficit
}

/// `∂⟨Π̂_A⟩/∂φ = Σ G(n)² P'_n(s) · 4(ℓ+1) sin θ`.
pub fn parity_derivative(state: &TwinFockState, cfg: &RotationConfig) -> f64 {
    let (out, ph) = evaluate(state, cfg);
    out.derivative * ph.rate * ph.sin
}

/// Error-propagation sensitivity; `+∞` at stationary points of the signal.
pub fn sensitivity(state: &TwinFockState, cfg: &RotationConfig) -> f64 {
    let (out, ph) = evaluate(state, cfg);
    let slope = out.derivative * ph.rate * ph.sin;
    if !(slope.abs() >= STATIONARY_GUARD) {
        return f64::INFINITY;
    }
    let d = out.deficit;
    let variance = (d * (2.0 - d)).max(0.0);
    variance.sqrt() / slope.abs()
}

/// `1 / [2(ℓ+1) N̄]`.
pub fn heisenberg_limit(n_mean: f64, ell: u32) -> Result<f64> {
    if !(n_mean > 0.0) || !n_mean.is_finite() {
        return Err(Error::InvalidParameter {
            name: "n_mean",
            value: n_mean,
            reason: "mean photon number must be positive",
        });
    }
    Ok(1.0 / (2.0 * (ell as f64 + 1.0) * n_mean))
}

/// Uniform scan grid for [`optimal_sensitivity`]; endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchGrid {
    pub phi_min: f64,
    pub phi_max: f64,
    pub points: usize,
}

impl SearchGrid {
    /// One signal period starting at `φ = 0`.
    pub fn one_period(ell: u32) -> Self {
        Self::periods(ell, 1, DEFAULT_POINTS_PER_PERIOD)
    }

    pub fn periods(ell: u32, periods: usize, points_per_period: usize) -> Self {
        let period = signal_period(&RotationConfig::new(ell, 0.0));
        Self {
            phi_min: 0.0,
            phi_max: period * periods as f64,
            points: points_per_period * periods + 1,
        }
    }

    fn sample(&self, i: usize) -> f64 {
        let h = (self.phi_max - self.phi_min) / (self.points - 1) as f64;
        self.phi_min + h * i as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensitivityReport {
    pub phi_opt: f64,
    pub delta_phi_opt: f64,
    pub heisenberg_limit: f64,
    /// `heisenberg_limit − delta_phi_opt`; positive beats the limit.
    pub difference: f64,
}

/// Best error-propagation sensitivity over `grid`: a dense scan, then a
/// golden-section refinement on the bracket around the best sample.
///
/// Samples within `1e-12` rad (in `θ`) of a stationary abscissa are skipped.
pub fn optimal_sensitivity(
    state: &TwinFockState,
    ell: u32,
    grid: &SearchGrid,
) -> Result<SensitivityReport> {
    let cfg = RotationConfig::new(ell, 0.0);
    let period = signal_period(&cfg);
    if grid.points < 3 || !(grid.phi_max - grid.phi_min >= period * (1.0 - 1e-12)) {
        return Err(Error::InvalidParameter {
            name: "grid",
            value: grid.phi_max - grid.phi_min,
            reason: "search grid must cover one signal period with at least 3 points",
        });
    }
    let probs = state.probabilities();
    let eval = |phi: f64| -> f64 {
        let ph = phase(&cfg.at(phi));
        // θ on a multiple of π: exact peak or trough
        let theta = ph.rate * phi;
        if (theta - PI * (theta / PI).round()).abs() < 1e-12 {
            return f64::INFINITY;
        }
        let out = legendre::series(&probs, ph.s, ph.gap);
        let slope = out.derivative * ph.rate * ph.sin;
        if !(slope.abs() >= STATIONARY_GUARD) {
            return f64::INFINITY;
        }
        let d = out.deficit;
        (d * (2.0 - d)).max(0.0).sqrt() / slope.abs()
    };

    let (best_i, best) = (0..grid.points).map(|i| (i, eval(grid.sample(i)))).fold(
        (0, f64::INFINITY),
        |acc, (i, v)| if v < acc.1 { (i, v) } else { acc },
    );
    if !best.is_finite() {
        return Err(Error::SearchFailure);
    }

    let lo = grid.sample(best_i.saturating_sub(1));
    let hi = grid.sample((best_i + 1).min(grid.points - 1));
    let (phi_gs, val_gs) = golden_section(eval, lo, hi);
    let (phi_opt, delta_phi_opt) = if val_gs < best {
        (phi_gs, val_gs)
    } else {
        (grid.sample(best_i), best)
    };

    let heisenberg_limit = heisenberg_limit(state.mean_photon_number(), ell)?;
    Ok(SensitivityReport {
        phi_opt,
        delta_phi_opt,
        heisenberg_limit,
        difference: heisenberg_limit - delta_phi_opt,
    })
}

fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= 1e-14 * a.abs().max(b.abs()).max(1.0) {
            break;
        }
        if fc <= fd {
            b = d;
            (d, fd) = (c, fc);
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            (c, fc) = (d, fd);
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}
