use std::f64::consts::TAU;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    Signal,
    Sensitivity,
}

/// Parameters a curve was sampled at. Fields that do not apply stay `None`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CurveMeta {
    pub r: Option<f64>,
    pub delta: Option<f64>,
    pub nc: Option<f64>,
    pub ell: u32,
    pub eps_trunc: Option<f64>,
}

/// Sampled `(φ, value)` pairs. Sensitivity curves may hold `+∞` at
/// stationary points; signal values are always finite.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalCurve {
    phis: Vec<f64>,
    values: Vec<f64>,
    kind: CurveKind,
    meta: CurveMeta,
}

impl SignalCurve {
    pub fn new(phis: Vec<f64>, values: Vec<f64>, kind: CurveKind, meta: CurveMeta) -> Result<Self> {
        if phis.len() != values.len() || phis.len() < 2 {
            return Err(Error::InvalidParameter {
                name: "curve",
                value: phis.len() as f64,
                reason: "need at least two samples and one value per abscissa",
            });
        }
        if phis.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter {
                name: "phis",
                value: f64::NAN,
                reason: "abscissas must be strictly increasing",
            });
        }
        let bad = values.iter().any(|v| match kind {
            CurveKind::Signal => !v.is_finite(),
            CurveKind::Sensitivity => v.is_nan() || *v == f64::NEG_INFINITY,
        });
        if bad {
            return Err(Error::InvalidParameter {
                name: "values",
                value: f64::NAN,
                reason: "non-finite sample",
            });
        }
        Ok(Self {
            phis,
            values,
            kind,
            meta,
        })
    }

    /// Samples `f` on `steps` evenly spaced points of `[phi_min, phi_max]`.
    pub fn sample(
        phi_min: f64,
        phi_max: f64,
        steps: usize,
        kind: CurveKind,
        meta: CurveMeta,
        f: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        if steps < 2 || !(phi_max > phi_min) {
            return Err(Error::InvalidParameter {
                name: "phi range",
                value: phi_max - phi_min,
                reason: "need phi_max > phi_min and at least two steps",
            });
        }
        let h = (phi_max - phi_min) / (steps - 1) as f64;
        let phis: Vec<f64> = (0..steps).map(|i| phi_min + h * i as f64).collect();
        let values = phis.iter().map(|&p| f(p)).collect();
        Self::new(phis, values, kind, meta)
    }

    pub fn phis(&self) -> &[f64] {
        &self.phis
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn kind(&self) -> CurveKind {
        self.kind
    }

    pub fn meta(&self) -> &CurveMeta {
        &self.meta
    }

    pub fn len(&self) -> usize {
        self.phis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phis.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolutionMetrics {
    /// Fringe contrast of the central peak against its flanking minimum.
    pub visibility: f64,
    /// Full width of the central peak at half its height above that minimum.
    pub fwhm: f64,
    /// Maxima above the global half level within one turn from the first sample.
    pub peak_count: usize,
    /// `(max − min)/(max + min)` over the whole curve.
    pub contrast: f64,
}

/// Visibility, FWHM and peak count of a sampled signal.
///
/// The central peak is the highest-valued local maximum closest to the middle
/// of the sampled range. Its fringe minimum is the lower of the two minima
/// reached by descending monotonically to either side; visibility and FWHM are
/// measured against that fringe.
pub fn resolution_metrics(curve: &SignalCurve) -> Result<ResolutionMetrics> {
    if curve.kind != CurveKind::Signal {
        return Err(Error::MetricUndefined(
            "resolution metrics need a signal curve",
        ));
    }
    let (phis, v) = (&curve.phis, &curve.values);
    let n = v.len();
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = v.iter().copied().fold(f64::INFINITY, f64::min);
    let span = max - min;
    if !(span > 1e-14 * max.abs().max(1.0)) {
        return Err(Error::MetricUndefined("flat curve"));
    }

    // Plateaus count once, at their right end.
    let is_max = |i: usize| -> bool {
        let left = i == 0 || v[i] >= v[i - 1];
        let right = i + 1 == n || v[i] > v[i + 1];
        left && right && !(i == 0 && i + 1 == n)
    };

    let mid = 0.5 * (phis[0] + phis[n - 1]);
    let top = max - 1e-9 * span;
    let center = (0..n)
        .filter(|&i| is_max(i) && v[i] >= top)
        .min_by(|&a, &b| (phis[a] - mid).abs().total_cmp(&(phis[b] - mid).abs()))
        .ok_or(Error::MetricUndefined("no principal peak"))?;

    let mut left = center;
    while left > 0 && v[left - 1] <= v[left] {
        left -= 1;
    }
    let mut right = center;
    while right + 1 < n && v[right + 1] <= v[right] {
        right += 1;
    }
    let peak = v[center];
    let floor = v[left].min(v[right]);
    if !(peak + floor > 0.0) || !(peak > floor) {
        return Err(Error::MetricUndefined("fringe minimum is not above -peak"));
    }
    let visibility = (peak - floor) / (peak + floor);

    let half = floor + 0.5 * (peak - floor);
    let crossing = |inner: usize, outer: usize| -> f64 {
        let t = (v[inner] - half) / (v[inner] - v[outer]);
        phis[inner] + t * (phis[outer] - phis[inner])
    };
    let mut i = center;
    while i > left && v[i - 1] >= half {
        i -= 1;
    }
    if i == left && v[i] >= half {
        return Err(Error::MetricUndefined(
            "peak does not fall to half height on the left",
        ));
    }
    let lo = if v[i] >= half {
        crossing(i, i - 1)
    } else {
        phis[i]
    };
    let mut j = center;
    while j < right && v[j + 1] >= half {
        j += 1;
    }
    if j == right && v[j] >= half {
        return Err(Error::MetricUndefined(
            "peak does not fall to half height on the right",
        ));
    }
    let hi = if v[j] >= half {
        crossing(j, j + 1)
    } else {
        phis[j]
    };

    let count_level = min + 0.5 * span;
    let turn_end = phis[0] + TAU;
    let peak_count = (0..n)
        .filter(|&i| phis[i] < turn_end && is_max(i) && v[i] > count_level)
        .count();

    Ok(ResolutionMetrics {
        visibility,
        fwhm: hi - lo,
        peak_count,
        contrast: if max + min > 0.0 {
            span / (max + min)
        } else {
            f64::INFINITY
        },
    })
}
