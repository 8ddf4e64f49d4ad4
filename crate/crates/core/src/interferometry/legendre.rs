//! Legendre polynomials by upward recurrence.

use crate::error::{Error, Result};

/// Arguments this far outside `[-1, 1]` are clamped; anything beyond is an error.
pub const CLAMP_SLACK: f64 = 1e-9;

fn clamp_arg(x: f64) -> Result<f64> {
    if !(x.abs() <= 1.0 + CLAMP_SLACK) {
        return Err(Error::Domain { x });
    }
    Ok(x.clamp(-1.0, 1.0))
}

/// `P_n(x)` via `(k+1) P_{k+1} = (2k+1) x P_k − k P_{k−1}`.
pub fn legendre(n: usize, x: f64) -> Result<f64> {
    let x = clamp_arg(x)?;
    let (mut prev, mut cur) = (1.0, x);
    if n == 0 {
        return Ok(1.0);
    }
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `P'_n(x)` via `P'_{k+1} = P'_{k−1} + (2k+1) P_k`.
///
/// The recurrence is exact at the endpoints, where it reproduces
/// `P'_n(±1) = (±1)^{n+1} n(n+1)/2`.
pub fn legendre_derivative(n: usize, x: f64) -> Result<f64> {
    let x = clamp_arg(x)?;
    let (mut p_prev, mut p) = (1.0, x);
    let (mut d_prev, mut d) = (0.0, 1.0);
    if n == 0 {
        return Ok(0.0);
    }
    for k in 1..n {
        let kf = k as f64;
        let d_next = d_prev + (2.0 * kf + 1.0) * p;
        let p_next = ((2.0 * kf + 1.0) * x * p - kf * p_prev) / (kf + 1.0);
        (p_prev, p) = (p, p_next);
        (d_prev, d) = (d, d_next);
    }
    Ok(d)
}

/// A weighted Legendre series and its derivative at one argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct SeriesValue {
    /// `Σ w_n P_n(s)`
    pub value: f64,
    /// `Σ w_n P'_n(s)`
    pub derivative: f64,
    /// `Σ w_n (1 − P_n(s))`, accurate near `s = 1`.
    pub deficit: f64,
}

/// Evaluates the series at `s` given `gap = 1 − s` computed by the caller
/// without cancellation.
///
/// `Q_n = 1 − P_n` obeys `(k+1) Q_{k+1} = (2k+1)(gap + s Q_k) − k Q_{k−1}`.
pub(crate) fn series(weights: &[f64], s: f64, gap: f64) -> SeriesValue {
    let mut out = SeriesValue {
        value: 0.0,
        derivative: 0.0,
        deficit: 0.0,
    };
    let (mut p_prev, mut p) = (1.0, s);
    let (mut q_prev, mut q) = (0.0, gap);
    let (mut d_prev, mut d) = (0.0, 1.0);
    for (n, &w) in weights.iter().enumerate() {
        match n {
            0 => out.value += w,
            _ => {
                if n > 1 {
                    let k = (n - 1) as f64;
                    let c = 2.0 * k + 1.0;
                    let p_next = (c * s * p - k * p_prev) / (k + 1.0);
                    let q_next = (c * (gap + s * q) - k * q_prev) / (k + 1.0);
                    let d_next = d_prev + c * p;
                    (p_prev, p) = (p, p_next);
                    (q_prev, q) = (q, q_next);
                    (d_prev, d) = (d, d_next);
                }
                out.value += w * p;
                out.deficit += w * q;
                out.derivative += w * d;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Explicit low-order polynomials.
    fn explicit(n: usize, x: f64) -> f64 {
        match n {
            0 => 1.0,
            1 => x,
            2 => (3.0 * x * x - 1.0) / 2.0,
            3 => (5.0 * x.powi(3) - 3.0 * x) / 2.0,
            4 => (35.0 * x.powi(4) - 30.0 * x * x + 3.0) / 8.0,
            5 => (63.0 * x.powi(5) - 70.0 * x.powi(3) + 15.0 * x) / 8.0,
            _ => unreachable!(),
        }
    }

    #[test]
    fn low_orders() {
        assert_eq!(legendre(0, 0.37).unwrap(), 1.0);
        assert_eq!(legendre(1, 0.37).unwrap(), 0.37);
        assert!((legendre(2, 0.5).unwrap() + 0.125).abs() < 1e-16);
        for n in 0..=5 {
            for i in 0..=20 {
                let x = -1.0 + 0.1 * i as f64;
                assert!((legendre(n, x).unwrap() - explicit(n, x)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn endpoints_and_bounds() {
        for n in [0, 1, 7, 100, 4096] {
            assert!((legendre(n, 1.0).unwrap() - 1.0).abs() < 1e-12);
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert!((legendre(n, -1.0).unwrap() - sign).abs() < 1e-12);
            for i in 0..=200 {
                let x = -1.0 + 0.01 * i as f64;
                assert!(legendre(n, x).unwrap().abs() <= 1.0 + 1e-12);
            }
        }
    }

    #[test]
    fn clamps_and_rejects() {
        assert!((legendre(3, 1.0 + 1e-12).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(legendre(3, 1.0 + 1e-6), Err(Error::Domain { .. })));
        assert!(legendre(3, f64::NAN).is_err());
        assert!(legendre_derivative(2, -1.5).is_err());
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(legendre_derivative(0, 0.3).unwrap(), 0.0);
        assert_eq!(legendre_derivative(1, 0.3).unwrap(), 1.0);
        assert!((legendre_derivative(2, 0.3).unwrap() - 0.9).abs() < 1e-15);
        for n in 0..20usize {
            let lim = (n * (n + 1)) as f64 / 2.0;
            let sign = if n % 2 == 0 { -1.0 } else { 1.0 };
            assert!((legendre_derivative(n, 1.0).unwrap() - lim).abs() < 1e-9);
            assert!((legendre_derivative(n, -1.0).unwrap() - sign * lim).abs() < 1e-9);
        }
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let h = 1e-6;
        for n in 0..=12 {
            for i in 0..=36 {
                let x = -0.9 + 0.05 * i as f64;
                let fd = (legendre(n, x + h).unwrap() - legendre(n, x - h).unwrap()) / (2.0 * h);
                assert!(
                    (legendre_derivative(n, x).unwrap() - fd).abs() < 1e-6,
                    "n={n} x={x}"
                );
            }
        }
    }

    #[test]
    fn series_matches_termwise() {
        let w = [0.1, 0.2, 0.3, 0.15, 0.05, 0.2];
        for &s in &[-1.0, -0.4, 0.0, 0.3, 0.999, 1.0] {
            let out = series(&w, s, 1.0 - s);
            let value: f64 = w
                .iter()
                .enumerate()
                .map(|(n, w)| w * legendre(n, s).unwrap())
                .sum();
            let deriv: f64 = w
                .iter()
                .enumerate()
                .map(|(n, w)| w * legendre_derivative(n, s).unwrap())
                .sum();
            assert!((out.value - value).abs() < 1e-14);
            assert!((out.derivative - deriv).abs() < 1e-12);
            assert!((out.deficit - (1.0 - value)).abs() < 1e-14);
        }
    }

    #[test]
    fn deficit_keeps_relative_precision_near_one() {
        // 1 − P_2(1 − g) = 3g − 3g²/2 exactly.
        let g = 1e-20;
        let out = series(&[0.0, 0.0, 1.0], 1.0 - g, g);
        assert!((out.deficit - (3.0 * g - 1.5 * g * g)).abs() < 1e-15 * g);
    }
}
