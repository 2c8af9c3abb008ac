//! Level normalization `q = (p - alpha) / (1 - alpha)` and the Cayley map
//! `w = (1 - q) / (1 + q)`.
//!
//! `q` sends the level line `Re p = alpha` to the imaginary axis and keeps
//! `q(0) = 1`. The Cayley map then sends `Re q > 0` into the unit disk with
//! `w(0) = 0`, so a first contact of `Re p` with `alpha` becomes a point where
//! `|w|` first reaches 1.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize};

use crate::analytic::AnalyticMap;
use crate::error::{LemmaError, Result};
use crate::tolerances::TOL_ZERO;

/// The level `alpha` with `0 <= alpha < 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct LevelParameter(f64);

impl LevelParameter {
    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(LemmaError::NonFinite("alpha"));
        }
        if !(0.0..1.0).contains(&alpha) {
            return Err(LemmaError::InvalidParameter(format!(
                "alpha must satisfy 0 <= alpha < 1, got {alpha}"
            )));
        }
        Ok(Self(alpha))
    }

    pub const ZERO: LevelParameter = LevelParameter(0.0);

    pub fn value(self) -> f64 {
        self.0
    }

    /// `1 - alpha`, always positive.
    pub fn complement(self) -> f64 {
        1.0 - self.0
    }
}

impl<'de> Deserialize<'de> for LevelParameter {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        LevelParameter::new(f64::deserialize(deserializer)?).map_err(serde::de::Error::custom)
    }
}

/// The contact value `p(z0) = alpha + beta i` with `beta != 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContactValue {
    alpha: LevelParameter,
    beta: f64,
}

impl ContactValue {
    pub fn new(alpha: LevelParameter, beta: f64) -> Result<Self> {
        if !beta.is_finite() {
            return Err(LemmaError::NonFinite("beta"));
        }
        if beta == 0.0 {
            return Err(LemmaError::InvalidParameter("beta must be nonzero".into()));
        }
        let rho = beta / alpha.complement();
        if !rho.is_finite() {
            return Err(LemmaError::NonFinite("beta / (1 - alpha)"));
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> LevelParameter {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `beta / (1 - alpha)`, the imaginary value of `q(z0)`.
    pub fn rho(&self) -> f64 {
        self.beta / self.alpha.complement()
    }

    /// `(1/2) (beta/(1-alpha) + (1-alpha)/beta)`.
    pub fn k_bound(&self) -> f64 {
        let rho = self.rho();
        0.5 * (rho + 1.0 / rho)
    }
}

/// `q = (p - alpha) / (1 - alpha)`.
pub fn normalize(p: &AnalyticMap, alpha: LevelParameter) -> Result<AnalyticMap> {
    let at_zero = p.eval(Complex64::new(0.0, 0.0))?;
    if (at_zero - 1.0).norm() > TOL_ZERO {
        return Err(LemmaError::NotNormalized {
            re: at_zero.re,
            im: at_zero.im,
        });
    }
    if alpha.value() == 0.0 {
        return Ok(p.clone());
    }
    let scale = 1.0 / alpha.complement();
    let q = p.affine(Complex64::new(scale, 0.0), Complex64::new(-alpha.value() * scale, 0.0))?;
    Ok(pin_constant_term(q))
}

// (1 - alpha) / (1 - alpha) may round away from 1; the normalized map keeps q(0) = 1 exactly.
fn pin_constant_term(q: AnalyticMap) -> AnalyticMap {
    match q {
        AnalyticMap::Polynomial(poly) => {
            let mut coefficients = poly.coefficients().to_vec();
            coefficients[0] = Complex64::new(1.0, 0.0);
            AnalyticMap::Polynomial(crate::poly::Polynomial::new(coefficients).expect("finite coefficients"))
        }
        AnalyticMap::Herglotz(mut form) if form.order == 0 => {
            form.offset = 1.0 - form.scale;
            AnalyticMap::Herglotz(form)
        }
        other => other,
    }
}

fn one_plus_q(q: Complex64) -> Result<Complex64> {
    let d = q + 1.0;
    if d.norm() < TOL_ZERO {
        return Err(LemmaError::Pole(d.norm()));
    }
    Ok(d)
}

/// `w(z) = (1 - q(z)) / (1 + q(z))`.
pub fn cayley_at(q: &AnalyticMap, z: Complex64) -> Result<Complex64> {
    let qz = q.eval(z)?;
    let d = one_plus_q(qz)?;
    Ok((Complex64::new(1.0, 0.0) - qz) / d)
}

/// `w'(z) = -2 q'(z) / (1 + q(z))^2`.
pub fn cayley_derivative_at(q: &AnalyticMap, z: Complex64) -> Result<Complex64> {
    let t = q.taylor_at(z, 1)?;
    let d = one_plus_q(t[0])?;
    Ok(-2.0 * t[1] / (d * d))
}

/// Closed form of `w(z0)` when `p(z0) = alpha + beta i`:
/// `((1-alpha)^2 - beta^2 - 2(1-alpha) beta i) / ((1-alpha)^2 + beta^2)`.
pub fn unit_modulus_closed_form(c: &ContactValue) -> Complex64 {
    let a = c.alpha().complement();
    let b = c.beta();
    let denom = a * a + b * b;
    Complex64::new((a * a - b * b) / denom, -2.0 * a * b / denom)
}
