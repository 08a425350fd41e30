//! Bell cat states of two spin-s particles with parallel polarization.
//!
//! The crate builds `c+|+s,+s> + c-|-s,-s>`, splits its outcome
//! correlations into local and non-local parts (closed form and an explicit
//! projection oracle), evaluates the modified Bell and CHSH inequalities,
//! searches measurement directions for violations, and cross-checks
//! everything by sampling. The non-local part cancels for integer spin and
//! survives for half-integer spin.

pub mod bellcat;
pub mod correlation;
pub mod error;
pub mod montecarlo;
pub mod report;
pub mod search;
pub mod spin;

pub use bellcat::{parity_factor, DensityElements, Outcome, StateParams};
pub use correlation::{
    bell_lhs_rhs, chsh, correlate, BellOutcome, BellTriple, ChshQuad, CorrelationBreakdown, Mode,
    Part,
};
pub use error::{Error, Result};
pub use spin::{coherent_state, overlap, rotation_oracle, CoherentState, Direction, Sign, Spin};
