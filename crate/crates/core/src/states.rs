//! Twin-Fock expansions of the squeezed Bell family.
//!
//! Every state here has the form `Σ G(n) |n,n⟩` with real `G(n)`. The family is
//! two-mode squeezing applied to `cos δ |0,0⟩ + sin δ |1,1⟩`, with the squeezing
//! convention `S(r)|0,0⟩ = sech r Σ (−tanh r)^n |n,n⟩`.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

/// Hard cap on the adaptive Fock cutoff.
pub const DEFAULT_MAX_ORDER: usize = 4096;

/// Squeezing factor and tunable factor of a squeezed Bell input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TsbParams {
    r: f64,
    delta: f64,
}

impl TsbParams {
    pub fn new(r: f64, delta: f64) -> Result<Self> {
        if !r.is_finite() || r < 0.0 {
            return Err(Error::InvalidParameter {
                name: "r",
                value: r,
                reason: "squeezing factor must be finite and non-negative",
            });
        }
        if !(0.0..=FRAC_PI_2).contains(&delta) {
            return Err(Error::InvalidParameter {
                name: "delta",
                value: delta,
                reason: "tunable factor must lie in [0, pi/2]",
            });
        }
        Ok(Self { r, delta })
    }

    /// Two-mode squeezed vacuum.
    pub fn squeezed_vacuum(r: f64) -> Result<Self> {
        Self::new(r, 0.0)
    }

    /// Two-mode squeezed number state `S(r)|1,1⟩`.
    pub fn squeezed_number(r: f64) -> Result<Self> {
        Self::new(r, FRAC_PI_2)
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }
}

/// Truncated coefficient vector `G(0..=n_max)` over the diagonal basis `|n,n⟩`.
///
/// `tail_bound` is a provable upper bound on the discarded probability
/// `Σ_{n > n_max} G(n)²`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwinFockState {
    coeffs: Vec<f64>,
    tail_bound: f64,
}

impl TwinFockState {
    /// Wraps an explicit coefficient vector. `tail_bound` is taken on trust.
    pub fn from_coefficients(coeffs: Vec<f64>, tail_bound: f64) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidParameter {
                name: "coeffs",
                value: 0.0,
                reason: "at least one coefficient is required",
            });
        }
        if let Some(&bad) = coeffs.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "coeffs",
                value: bad,
                reason: "coefficients must be finite",
            });
        }
        if !(0.0..1.0).contains(&tail_bound) {
            return Err(Error::InvalidParameter {
                name: "tail_bound",
                value: tail_bound,
                reason: "tail bound must lie in [0, 1)",
            });
        }
        Ok(Self { coeffs, tail_bound })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn n_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// `Σ G(n)²` over the retained orders.
    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|g| g * g).sum()
    }

    /// Photon-pair distribution `G(n)² / Σ G²` of the renormalized truncation.
    pub fn probabilities(&self) -> Vec<f64> {
        let norm = self.norm_sqr();
        self.coeffs.iter().map(|g| g * g / norm).collect()
    }

    /// Total mean photon number over both modes, `2 Σ n G(n)²`.
    pub fn mean_photon_number(&self) -> f64 {
        mean_photon_number(self)
    }
}

/// `⟨0,0|S|1,1⟩ = tanh r / cosh r`.
pub fn c00(r: f64) -> f64 {
    r.tanh() / r.cosh()
}

/// `⟨1,1|S|1,1⟩ = (1 − sinh² r) / cosh³ r`.
pub fn c11(r: f64) -> f64 {
    let sh = r.sinh();
    (1.0 - sh * sh) / r.cosh().powi(3)
}

/// Twin-Fock coefficients of the squeezed Bell state, truncated so the
/// discarded probability is below `eps`.
pub fn tsb_coefficients(params: TsbParams, eps: f64) -> Result<TwinFockState> {
    tsb_coefficients_capped(params, eps, DEFAULT_MAX_ORDER)
}

pub fn tsb_coefficients_capped(
    params: TsbParams,
    eps: f64,
    max_order: usize,
) -> Result<TwinFockState> {
    check_eps(eps)?;
    let r = params.r;
    let (sin_d, cos_d) = params.delta.sin_cos();
    let t = r.tanh();
    let ch = r.cosh();
    let (k00, k11) = (c00(r), c11(r));

    // G(n) = (−t)^{n−1} (a + b n) for n ≥ 1.
    let a = -t * (cos_d / ch + sin_d * k00);
    let b = sin_d * (k11 + t * k00);
    let (n_max, tail_bound) = truncation_order(a, b, t, eps, max_order)?;

    let mut coeffs = Vec::with_capacity(n_max + 1);
    // n = 0: the (−t)^{−1} factor cancels against the (n − 1) t C00 term.
    coeffs.push(cos_d / ch + sin_d * k00);
    let mut pow = 1.0; // (−t)^{n−1}
    for n in 1..=n_max {
        let nf = n as f64;
        let vacuum = cos_d * (-t) * pow / ch;
        let number = sin_d * pow * (nf * k11 + t * (nf - 1.0) * k00);
        coeffs.push(vacuum + number);
        pow *= -t;
    }
    Ok(TwinFockState { coeffs, tail_bound })
}

/// Two-mode squeezed number state `(−tanh r)^{n−1} (n − sinh² r) / cosh³ r`.
pub fn squeezed_number_coefficients(r: f64, eps: f64) -> Result<TwinFockState> {
    TsbParams::squeezed_number(r)?;
    check_eps(eps)?;
    let t = r.tanh();
    let sh2 = r.sinh().powi(2);
    let ch3 = r.cosh().powi(3);
    let (n_max, tail_bound) = truncation_order(-sh2 / ch3, 1.0 / ch3, t, eps, DEFAULT_MAX_ORDER)?;

    let mut coeffs = Vec::with_capacity(n_max + 1);
    coeffs.push(c00(r));
    let mut pow = 1.0;
    for n in 1..=n_max {
        coeffs.push(pow * (n as f64 - sh2) / ch3);
        pow *= -t;
    }
    Ok(TwinFockState { coeffs, tail_bound })
}

/// Two-mode squeezed vacuum `(−tanh r)^n / cosh r`.
pub fn squeezed_vacuum_coefficients(r: f64, eps: f64) -> Result<TwinFockState> {
    TsbParams::squeezed_vacuum(r)?;
    check_eps(eps)?;
    let t = r.tanh();
    let ch = r.cosh();
    let (n_max, tail_bound) = truncation_order(-t / ch, 0.0, t, eps, DEFAULT_MAX_ORDER)?;
    let mut pow = 1.0;
    let coeffs = (0..=n_max)
        .map(|_| {
            let g = pow / ch;
            pow *= -t;
            g
        })
        .collect();
    Ok(TwinFockState { coeffs, tail_bound })
}

pub fn mean_photon_number(state: &TwinFockState) -> f64 {
    2.0 * state
        .coeffs
        .iter()
        .enumerate()
        .map(|(n, g)| n as f64 * g * g)
        .sum::<f64>()
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "eps",
            value: eps,
            reason: "truncation tolerance must lie in (0, 1)",
        })
    }
}

/// Smallest `n_max ≥ 1` whose doubled geometric majorant of
/// `Σ_{n > n_max} (a + b n)² t^{2(n−1)}` is below `eps`.
///
/// The term ratio of the majorant `(|a| + |b| n)² q^{n−1}` decreases in `n`, so
/// the tail past `N` is bounded by its first term over `1 − ρ` with `ρ` the ratio
/// at `N + 1`.
fn truncation_order(a: f64, b: f64, t: f64, eps: f64, max_order: usize) -> Result<(usize, f64)> {
    let (a, b) = (a.abs(), b.abs());
    let q = t * t;
    // q^{N}, the weight of the first discarded order N + 1.
    let mut q_pow = q;
    for n_max in 1..=max_order {
        let first = a + b * (n_max + 1) as f64;
        let next = a + b * (n_max + 2) as f64;
        let term = first * first * q_pow;
        let bound = if term == 0.0 {
            0.0
        } else {
            let rho = (next / first).powi(2) * q;
            if rho < 1.0 {
                2.0 * term / (1.0 - rho)
            } else {
                f64::INFINITY
            }
        };
        if bound < eps {
            return Ok((n_max, bound));
        }
        q_pow *= q;
    }
    Err(Error::TruncationOverflow {
        cap: max_order,
        eps,
    })
}
