//! The Jack quantity `m`, the Nunokawa quantity `k`, and the checks of the
//! boundary lemma at a located contact.
//!
//! At a first contact `p(z0) = alpha + beta i`:
//!
//! * `z0 w'(z0) / w(z0) = m` is real with `m >= 1`, where `w` is the Cayley
//!   transform of the normalized `q`;
//! * `z0 p'(z0) / (p(z0) - alpha) = i k` with `k = m * bound`, where
//!   `bound = (1/2)(beta/(1-alpha) + (1-alpha)/beta)`, so `k >= bound >= 1`
//!   for `beta > 0` and `k <= bound <= -1` for `beta < 0`;
//! * `z0 p'(z0) / p(z0) = -alpha beta k / (alpha^2 + beta^2)
//!   + i beta^2 k / (alpha^2 + beta^2)`.
//!
//! Failed checks are recorded in the report's flags; only malformed inputs
//! return an error.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::AnalyticMap;
use crate::contact::BoundaryContact;
use crate::error::{LemmaError, Result};
use crate::tolerances::Tolerances;
use crate::transforms::{cayley_at, cayley_derivative_at, normalize, ContactValue, LevelParameter};

/// Pass/fail flags of a lemma check. Each flag is re-derivable from the
/// numeric fields of the enclosing [`NunokawaReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checks {
    pub identity_re: bool,
    pub identity_im: bool,
    pub sign_re: bool,
    pub k_bound: bool,
    pub k_m_relation: bool,
    /// `m` is real and at least 1.
    pub m_ge_one: bool,
    pub w_unit_modulus: bool,
    /// `z0 p'(z0) / (p(z0) - alpha)` is purely imaginary.
    pub k_real: bool,
}

impl Checks {
    pub fn all(&self) -> bool {
        self.identity_re
            && self.identity_im
            && self.sign_re
            && self.k_bound
            && self.k_m_relation
            && self.m_ge_one
            && self.w_unit_modulus
            && self.k_real
    }

    /// Names of the failed flags.
    pub fn failures(&self) -> Vec<&'static str> {
        [
            ("identity_re", self.identity_re),
            ("identity_im", self.identity_im),
            ("sign_re", self.sign_re),
            ("k_bound", self.k_bound),
            ("k_m_relation", self.k_m_relation),
            ("m_ge_one", self.m_ge_one),
            ("w_unit_modulus", self.w_unit_modulus),
            ("k_real", self.k_real),
        ]
        .into_iter()
        .filter(|(_, ok)| !ok)
        .map(|(name, _)| name)
        .collect()
    }
}

/// Additional checks of the `alpha = 0` specialization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorollaryChecks {
    /// `Re(z0 p'(z0) / p(z0)) ~ 0`.
    pub re_vanishes: bool,
    /// `|k| >= 1` with `sign(k) = sign(beta)`.
    pub k_magnitude: bool,
}

impl CorollaryChecks {
    pub fn all(&self) -> bool {
        self.re_vanishes && self.k_magnitude
    }
}

/// Every quantity of the lemma at one contact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NunokawaReport {
    pub z0: Complex64,
    pub alpha: f64,
    pub beta: f64,
    pub k: f64,
    pub m: f64,
    /// `Im(z0 w'(z0) / w(z0))`, zero at a genuine extremal point.
    pub m_imag: f64,
    /// `z0 p'(z0) / p(z0)`.
    pub logderiv: Complex64,
    pub re_predicted: f64,
    pub im_predicted: f64,
    pub bound: f64,
    /// `|Re(z0 p'(z0) / (p(z0) - alpha))|`.
    pub k_residual_real: f64,
    /// `|w(z0)|`.
    pub w_modulus: f64,
    pub tol_identity: f64,
    pub checks: Checks,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corollary: Option<CorollaryChecks>,
}

impl NunokawaReport {
    pub fn passed(&self) -> bool {
        self.checks.all() && self.corollary.is_none_or(|c| c.all())
    }

    /// Signed gap `(k - bound) * sign(beta)`, non-negative when the bound holds.
    pub fn bound_gap(&self) -> f64 {
        (self.k - self.bound) * self.beta.signum()
    }
}

/// `z0 w'(z0) / w(z0)` for the Cayley transform of `q`.
fn jack_quotient(q: &AnalyticMap, z0: Complex64) -> Result<Complex64> {
    let w = cayley_at(q, z0)?;
    if w.norm() == 0.0 {
        return Err(LemmaError::ZeroValue(0.0));
    }
    let dw = cayley_derivative_at(q, z0)?;
    Ok(z0 * dw / w)
}

/// The Jack quantity `m = z0 w'(z0) / w(z0)` at a contact of the normalized `q`.
pub fn jack_m(q: &AnalyticMap, z0: Complex64, tolerances: &Tolerances) -> Result<f64> {
    let quotient = jack_quotient(q, z0)?;
    let m = quotient.re;
    if quotient.im.abs() > tolerances.identity * (1.0 + m.abs()) {
        return Err(LemmaError::NotExtremal { imag: quotient.im });
    }
    Ok(m)
}

/// `k` together with the real part that should vanish at an exact contact.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NunokawaK {
    pub k: f64,
    pub residual_real: f64,
}

/// `k = Im(z0 p'(z0) / (p(z0) - alpha))`.
pub fn nunokawa_k(
    p: &AnalyticMap,
    alpha: LevelParameter,
    z0: Complex64,
    tolerances: &Tolerances,
) -> Result<NunokawaK> {
    let t = p.taylor_at(z0, 1)?;
    let shifted = t[0] - alpha.value();
    if shifted.norm() <= tolerances.beta {
        return Err(LemmaError::DegenerateContact(shifted.norm()));
    }
    let quotient = z0 * t[1] / shifted;
    Ok(NunokawaK {
        k: quotient.im,
        residual_real: quotient.re.abs(),
    })
}

/// Evaluates every conclusion of the lemma at `contact`.
pub fn verify_theorem(
    p: &AnalyticMap,
    alpha: LevelParameter,
    contact: &BoundaryContact,
    tolerances: &Tolerances,
) -> Result<NunokawaReport> {
    let tol = tolerances.identity;
    let z0 = contact.z0;
    let a = alpha.value();
    let value = p.eval(z0)?;
    let beta = value.im;

    let NunokawaK { k, residual_real } = nunokawa_k(p, alpha, z0, tolerances)?;
    let contact_value = ContactValue::new(alpha, beta).map_err(|_| LemmaError::DegenerateContact(beta.abs()))?;
    let bound = contact_value.k_bound();
    let logderiv = p.log_derivative_at(z0, tolerances.zero)?;

    let denom = a * a + beta * beta;
    let re_predicted = -a * beta * k / denom;
    let im_predicted = beta * beta * k / denom;

    let q = normalize(p, alpha)?;
    let quotient = jack_quotient(&q, z0)?;
    let m = quotient.re;
    let m_imag = quotient.im;
    let w_modulus = cayley_at(&q, z0)?.norm();

    let scale = tol * (1.0 + logderiv.norm());
    // The bound grows like 1/|beta| near degenerate contacts, so its slack is
    // relative.
    let bound_tol = tol * (1.0 + bound.abs());
    let k_bound = if beta > 0.0 {
        k >= bound - bound_tol && bound >= 1.0 - tol
    } else {
        k <= bound + bound_tol && bound <= -1.0 + tol
    };
    let checks = Checks {
        identity_re: (logderiv.re - re_predicted).abs() <= scale,
        identity_im: (logderiv.im - im_predicted).abs() <= scale,
        sign_re: logderiv.re <= tol,
        k_bound,
        k_m_relation: (k - m * bound).abs() <= tol * (1.0 + k.abs()),
        m_ge_one: m >= 1.0 - tol && m_imag.abs() <= tol * (1.0 + m.abs()),
        w_unit_modulus: (w_modulus - 1.0).abs() <= tolerances.unit_modulus,
        k_real: residual_real <= tol,
    };

    Ok(NunokawaReport {
        z0,
        alpha: a,
        beta,
        k,
        m,
        m_imag,
        logderiv,
        re_predicted,
        im_predicted,
        bound,
        k_residual_real: residual_real,
        w_modulus,
        tol_identity: tol,
        checks,
        corollary: None,
    })
}

/// The `alpha = 0` specialization: `z0 p'(z0) / p(z0) = i k` with `k >= 1`
/// when `Im p(z0) > 0` and `k <= -1` when `Im p(z0) < 0`.
pub fn verify_corollary(p: &AnalyticMap, contact: &BoundaryContact, tolerances: &Tolerances) -> Result<NunokawaReport> {
    if contact.alpha.value() != 0.0 {
        return Err(LemmaError::InvalidParameter(format!(
            "corollary check requires alpha = 0, contact has alpha = {}",
            contact.alpha.value()
        )));
    }
    let value = p.eval(contact.z0)?;
    if value.norm() <= tolerances.beta {
        return Err(LemmaError::ZeroValue(value.norm()));
    }
    let mut report = verify_theorem(p, LevelParameter::ZERO, contact, tolerances)?;
    let tol = tolerances.identity;
    report.corollary = Some(CorollaryChecks {
        re_vanishes: report.logderiv.re.abs() <= tol,
        k_magnitude: report.k.abs() >= 1.0 - tol && report.k.signum() == report.beta.signum(),
    });
    Ok(report)
}
