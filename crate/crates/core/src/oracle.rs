//! Brute-force two-mode Fock-space simulator.
//!
//! States live on the triangular lattice `{(j, k) : j + k ≤ N_max}`. Squeezing
//! is the action of `exp[r(âb̂ − â†b̂†)]`, evaluated by scaled Taylor stepping
//! on a padded lattice; whatever lands beyond `N_max` is dropped and counted as
//! leakage. Beam splitters conserve `j + k`, so they act exactly shell by shell
//! through the mode transformation `â† → (â† + i b̂†)/√2`, `b̂† → (i â† + b̂†)/√2`.
//!
//! Nothing here uses Legendre polynomials or closed-form coefficients.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::polarization::{propagate_output_amplitudes, PolarizedCoherentInput, RotationConfig};

/// Largest supported lattice cutoff.
pub const MAX_LATTICE: usize = 256;

/// Default bound on probability pushed past the cutoff by one transform.
pub const DEFAULT_LEAK_THRESHOLD: f64 = 1e-10;

/// Tolerated Poisson tail beyond the cutoff in [`coherent_oracle_signal`].
pub const COHERENT_TAIL_THRESHOLD: f64 = 1e-12;

/// Extra shells evolved beyond the cutoff during squeezing.
const SQUEEZE_PAD: usize = 16;

/// Norm budget of one Taylor step.
const TAYLOR_STEP_NORM: f64 = 4.0;

fn shell_offset(total: usize) -> usize {
    total * (total + 1) / 2
}

fn lattice_len(n_max: usize) -> usize {
    shell_offset(n_max + 1)
}

fn index(j: usize, k: usize) -> usize {
    shell_offset(j + k) + j
}

/// Dense amplitudes over the truncated two-mode lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleState {
    amps: Vec<Complex64>,
    n_max_total: usize,
    leakage: f64,
}

impl OracleState {
    pub fn vacuum(n_max_total: usize) -> Result<Self> {
        Self::from_amplitudes(n_max_total, &[((0, 0), Complex64::new(1.0, 0.0))])
    }

    /// `|j, k⟩`.
    pub fn basis(j: usize, k: usize, n_max_total: usize) -> Result<Self> {
        Self::from_amplitudes(n_max_total, &[((j, k), Complex64::new(1.0, 0.0))])
    }

    /// Superposition of Fock pairs; amplitudes are used as given.
    pub fn from_amplitudes(
        n_max_total: usize,
        terms: &[((usize, usize), Complex64)],
    ) -> Result<Self> {
        if n_max_total > MAX_LATTICE {
            return Err(Error::InvalidParameter {
                name: "n_max_total",
                value: n_max_total as f64,
                reason: "lattice cutoff exceeds 256",
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); lattice_len(n_max_total)];
        for &((j, k), a) in terms {
            if j + k > n_max_total {
                return Err(Error::InvalidParameter {
                    name: "fock pair",
                    value: (j + k) as f64,
                    reason: "basis state lies outside the lattice",
                });
            }
            amps[index(j, k)] += a;
        }
        Ok(Self {
            amps,
            n_max_total,
            leakage: 0.0,
        })
    }

    pub fn n_max_total(&self) -> usize {
        self.n_max_total
    }

    /// Probability dropped past the cutoff so far.
    pub fn leakage(&self) -> f64 {
        self.leakage
    }

    pub fn amp(&self, j: usize, k: usize) -> Complex64 {
        if j + k > self.n_max_total {
            return Complex64::new(0.0, 0.0);
        }
        self.amps[index(j, k)]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Probability outside the diagonal `j = k`.
    pub fn off_diagonal_mass(&self) -> f64 {
        self.iter()
            .filter(|&((j, k), _)| j != k)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// `((j, k), amplitude)` in lattice order.
    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), Complex64)> + '_ {
        (0..=self.n_max_total)
            .flat_map(|total| (0..=total).map(move |j| (j, total - j)))
            .zip(self.amps.iter().copied())
    }

    fn shell(&self, total: usize) -> &[Complex64] {
        let start = shell_offset(total);
        &self.amps[start..start + total + 1]
    }
}

/// Smallest even cutoff that keeps squeezing leakage of low-order inputs
/// (up to `|1,1⟩`) below `leak`, using the `(n+1)² tanh^{2n} r` envelope of
/// the pair distribution.
pub fn squeeze_cutoff(r: f64, leak: f64) -> usize {
    let q = r.tanh().powi(2);
    let mut n = 1usize;
    let mut q_pow = q;
    while ((n + 1) * (n + 1)) as f64 * q_pow >= 0.1 * leak && n < MAX_LATTICE {
        n += 1;
        q_pow *= q;
    }
    (2 * n + 4).min(MAX_LATTICE)
}

/// `exp[r(âb̂ − â†b̂†)] |state⟩` with the default leakage threshold.
pub fn apply_two_mode_squeeze(state: &OracleState, r: f64) -> Result<OracleState> {
    apply_two_mode_squeeze_with(state, r, DEFAULT_LEAK_THRESHOLD)
}

pub fn apply_two_mode_squeeze_with(
    state: &OracleState,
    r: f64,
    leak_threshold: f64,
) -> Result<OracleState> {
    if !r.is_finite() || r < 0.0 {
        return Err(Error::InvalidParameter {
            name: "r",
            value: r,
            reason: "squeezing factor must be finite and non-negative",
        });
    }
    let n_max = state.n_max_total;
    let padded = n_max + SQUEEZE_PAD;
    let mut v = vec![Complex64::new(0.0, 0.0); lattice_len(padded)];
    v[..state.amps.len()].copy_from_slice(&state.amps);

    // Row sums of |K| are at most (padded + 2).
    let norm = (padded + 2) as f64;
    let steps = ((r * norm) / TAYLOR_STEP_NORM).ceil().max(1.0) as usize;
    let tau = r / steps as f64;
    let mut term = vec![Complex64::new(0.0, 0.0); v.len()];
    let mut next = vec![Complex64::new(0.0, 0.0); v.len()];
    for _ in 0..steps {
        term.copy_from_slice(&v);
        for m in 1..200 {
            squeeze_generator(&term, &mut next, padded);
            let scale = tau / m as f64;
            let mut largest = 0.0f64;
            for (t, n) in term.iter_mut().zip(&next) {
                *t = n * scale;
                largest = largest.max(t.norm_sqr());
            }
            for (x, t) in v.iter_mut().zip(&term) {
                *x += t;
            }
            if largest < 1e-36 {
                break;
            }
        }
    }

    let keep = state.amps.len();
    let dropped: f64 = v[keep..].iter().map(|a| a.norm_sqr()).sum();
    let leakage = state.leakage + dropped;
    if dropped > leak_threshold {
        return Err(Error::LeakageExceeded {
            leakage: dropped,
            threshold: leak_threshold,
        });
    }
    v.truncate(keep);
    Ok(OracleState {
        amps: v,
        n_max_total: n_max,
        leakage,
    })
}

/// `out = (âb̂ − â†b̂†) v` on the lattice with cutoff `n_max`.
fn squeeze_generator(v: &[Complex64], out: &mut [Complex64], n_max: usize) {
    out.iter_mut().for_each(|x| *x = Complex64::new(0.0, 0.0));
    for total in 0..=n_max {
        for j in 0..=total {
            let k = total - j;
            let a = v[index(j, k)];
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            if j > 0 && k > 0 {
                out[index(j - 1, k - 1)] += a * ((j * k) as f64).sqrt();
            }
            if total + 2 <= n_max {
                out[index(j + 1, k + 1)] -= a * (((j + 1) * (k + 1)) as f64).sqrt();
            }
        }
    }
}

/// Symmetric 50:50 beam splitter with `i` on reflection, tabulated shell by
/// shell up to a cutoff.
///
/// On the shell `j + k = N` the splitter is `exp[i(π/4)(â†b̂ + âb̂†)]`, which maps
/// `â† → (â† + i b̂†)/√2`. Each shell block is a dense matrix exponential by
/// scaling and squaring.
#[derive(Debug, Clone)]
pub struct BeamSplitter {
    /// `shells[N][col * (N+1) + row] = ⟨row, N−row| U |col, N−col⟩`
    shells: Vec<Vec<Complex64>>,
}

impl BeamSplitter {
    pub fn new(n_max_total: usize) -> Self {
        Self {
            shells: (0..=n_max_total).map(shell_unitary).collect(),
        }
    }

    pub fn n_max_total(&self) -> usize {
        self.shells.len() - 1
    }

    pub fn apply(&self, state: &OracleState) -> Result<OracleState> {
        if state.n_max_total > self.n_max_total() {
            return Err(Error::InvalidParameter {
                name: "n_max_total",
                value: state.n_max_total as f64,
                reason: "state lattice exceeds the beam splitter table",
            });
        }
        let mut amps = Vec::with_capacity(state.amps.len());
        for total in 0..=state.n_max_total {
            let width = total + 1;
            let u = &self.shells[total];
            let input = state.shell(total);
            let mut out = vec![Complex64::new(0.0, 0.0); width];
            for (col, &x) in input.iter().enumerate() {
                if x == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for (o, &m) in out.iter_mut().zip(&u[col * width..(col + 1) * width]) {
                    *o += m * x;
                }
            }
            amps.extend(out);
        }
        Ok(OracleState {
            amps,
            n_max_total: state.n_max_total,
            leakage: state.leakage,
        })
    }
}

/// `exp[i(π/4)(â†b̂ + âb̂†)]` restricted to the shell `j + k = total`, column-major.
fn shell_unitary(total: usize) -> Vec<Complex64> {
    let w = total + 1;
    let zero = Complex64::new(0.0, 0.0);
    // Off-diagonal of the real symmetric tridiagonal generator:
    // ⟨j+1, N−j−1| â†b̂ |j, N−j⟩ = √((j+1)(N−j)).
    let coupling: Vec<f64> = (0..total)
        .map(|j| (((j + 1) * (total - j)) as f64).sqrt())
        .collect();
    let bound = 2.0 * coupling.iter().copied().fold(0.0, f64::max) * std::f64::consts::FRAC_PI_4;
    let mut squarings = 0;
    while bound / f64::powi(2.0, squarings) > 0.5 {
        squarings += 1;
    }
    let scale = Complex64::new(0.0, std::f64::consts::FRAC_PI_4 / f64::powi(2.0, squarings));

    // Taylor series of exp(scale · H) with H applied as a tridiagonal operator.
    let mut result = vec![zero; w * w];
    let mut term = vec![zero; w * w];
    for d in 0..w {
        result[d * w + d] = Complex64::new(1.0, 0.0);
        term[d * w + d] = Complex64::new(1.0, 0.0);
    }
    let mut next = vec![zero; w * w];
    for m in 1..=30 {
        let factor = scale / m as f64;
        let mut largest = 0.0f64;
        for col in 0..w {
            let src = &term[col * w..(col + 1) * w];
            let dst = &mut next[col * w..(col + 1) * w];
            for row in 0..w {
                let mut acc = zero;
                if row > 0 {
                    acc += src[row - 1] * coupling[row - 1];
                }
                if row + 1 < w {
                    acc += src[row + 1] * coupling[row];
                }
                dst[row] = acc * factor;
                largest = largest.max(dst[row].norm_sqr());
            }
        }
        std::mem::swap(&mut term, &mut next);
        for (r, t) in result.iter_mut().zip(&term) {
            *r += t;
        }
        if largest < 1e-36 {
            break;
        }
    }
    for _ in 0..squarings {
        result = matmul(&result, &result, w);
    }
    result
}

/// Column-major dense product `a · b`.
fn matmul(a: &[Complex64], b: &[Complex64], w: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); w * w];
    for col in 0..w {
        let dst = &mut out[col * w..(col + 1) * w];
        for k in 0..w {
            let x = b[col * w + k];
            if x == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (o, &y) in dst.iter_mut().zip(&a[k * w..(k + 1) * w]) {
                *o += y * x;
            }
        }
    }
    out
}

/// `exp(iθ n̂_A)`.
pub fn apply_phase(state: &OracleState, theta: f64) -> OracleState {
    let phases: Vec<Complex64> = (0..=state.n_max_total)
        .map(|j| Complex64::from_polar(1.0, theta * j as f64))
        .collect();
    let amps = state.iter().map(|((j, _), a)| a * phases[j]).collect();
    OracleState {
        amps,
        n_max_total: state.n_max_total,
        leakage: state.leakage,
    }
}

/// Beam splitter, path-A phase `2(ℓ+1)φ` per photon, beam splitter.
pub fn apply_interferometer(state: &OracleState, cfg: &RotationConfig) -> Result<OracleState> {
    let bs = BeamSplitter::new(state.n_max_total);
    interferometer_with(&bs, state, cfg)
}

/// [`apply_interferometer`] with a prebuilt beam-splitter table.
pub fn interferometer_with(
    bs: &BeamSplitter,
    state: &OracleState,
    cfg: &RotationConfig,
) -> Result<OracleState> {
    let first = bs.apply(state)?;
    let shifted = apply_phase(&first, 2.0 * cfg.gain() * cfg.phi);
    bs.apply(&shifted)
}

/// `⟨exp(iπ n̂_A)⟩ = Σ (−1)^j |amp(j,k)|²`.
pub fn parity_of(state: &OracleState) -> f64 {
    state
        .iter()
        .map(|((j, _), a)| {
            if j % 2 == 0 {
                a.norm_sqr()
            } else {
                -a.norm_sqr()
            }
        })
        .sum()
}

/// Port-A parity of a polarized coherent input from truncated Fock expansions
/// of the two output polarization modes.
pub fn coherent_oracle_signal(
    input: &PolarizedCoherentInput,
    cfg: &RotationConfig,
    n_max: usize,
) -> Result<f64> {
    let (h, v) = propagate_output_amplitudes(input, cfg);
    Ok(truncated_coherent_parity(h, n_max)? * truncated_coherent_parity(v, n_max)?)
}

fn truncated_coherent_parity(gamma: Complex64, n_max: usize) -> Result<f64> {
    let mut amp = Complex64::new((-0.5 * gamma.norm_sqr()).exp(), 0.0);
    let mut mass = 0.0;
    let mut parity = 0.0;
    for n in 0..=n_max {
        if n > 0 {
            amp = amp * gamma / (n as f64).sqrt();
        }
        let p = amp.norm_sqr();
        mass += p;
        parity += if n % 2 == 0 { p } else { -p };
    }
    let tail = 1.0 - mass;
    if tail > COHERENT_TAIL_THRESHOLD {
        return Err(Error::LeakageExceeded {
            leakage: tail,
            threshold: COHERENT_TAIL_THRESHOLD,
        });
    }
    Ok(parity)
}
