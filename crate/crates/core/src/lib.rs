//! Angular-displacement estimation with tunable squeezed Bell states, spin and
//! orbital angular momentum, and parity detection.
//!
//! - [`states`]: twin-Fock coefficient expansions of the input family.
//! - [`polarization`]: polarized coherent inputs and their closed-form signals.
//! - [`interferometry`]: parity signal, sensitivity, Heisenberg-limit comparison
//!   and resolution metrics.
//! - [`oracle`]: a brute-force truncated Fock-space simulator used to check all
//!   of the above.
//! - [`validation`]: the oracle-equivalence checks as a reusable report.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod interferometry;
pub mod oracle;
pub mod polarization;
pub mod states;
pub mod validation;

pub use error::{Error, Result};
pub use interferometry::{
    heisenberg_limit, optimal_sensitivity, parity_derivative, parity_expectation, sensitivity,
    SearchGrid, SensitivityReport, SignalCurve,
};
pub use polarization::{Handedness, PolarizedCoherentInput, RotationConfig};
pub use states::{TsbParams, TwinFockState};
