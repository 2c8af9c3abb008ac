//! Numerical thresholds shared across the crate.
//!
//! The layers are separated by roughly two decades each, so that rounding at
//! one layer cannot trip the check at the next.

use serde::{Deserialize, Serialize};

/// Magnitude below which `|f(z)|` or `|1 + q(z)|` is treated as zero.
pub const TOL_ZERO: f64 = 1e-12;

/// Bisection width on the contact radius.
pub const TOL_RADIUS: f64 = 1e-12;

/// Accepted residual `|Re p(z0) - alpha|` at a contact.
pub const TOL_CONTACT: f64 = 1e-10;

/// Contacts with `|Im p(z0)|` below this are degenerate.
pub const TOL_BETA: f64 = 1e-8;

/// Tolerance for every identity and inequality of the lemma checks.
pub const TOL_IDENTITY: f64 = 1e-8;

/// Tolerance on `| |w(z0)| - 1 |`.
pub const TOL_UNIT_MODULUS: f64 = 1e-8;

/// Ceiling of the radial search; contacts must lie strictly inside the disk.
pub const R_MAX: f64 = 1.0 - 1e-9;

/// Default angular samples per circle for the contact search.
pub const DEFAULT_ANGULAR_SAMPLES: usize = 4096;

/// Hard cap for adaptive angular refinement.
pub const MAX_ANGULAR_SAMPLES: usize = 1 << 20;

/// Runtime-adjustable thresholds, defaulting to the constants above.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub zero: f64,
    pub radius: f64,
    pub contact: f64,
    pub beta: f64,
    pub identity: f64,
    pub unit_modulus: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            zero: TOL_ZERO,
            radius: TOL_RADIUS,
            contact: TOL_CONTACT,
            beta: TOL_BETA,
            identity: TOL_IDENTITY,
            unit_modulus: TOL_UNIT_MODULUS,
        }
    }
}
