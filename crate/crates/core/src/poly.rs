//! Dense complex polynomials in ascending-degree storage.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{LemmaError, Result};

/// Polynomial `sum c_n z^n` with `coefficients[n] = c_n`.
///
/// Trailing zero coefficients are trimmed on construction, so the last stored
/// coefficient is nonzero unless the polynomial is the constant zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coefficients: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(mut coefficients: Vec<Complex64>) -> Result<Self> {
        if coefficients.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(LemmaError::NonFinite("polynomial coefficients"));
        }
        while coefficients.len() > 1 && coefficients.last() == Some(&Complex64::new(0.0, 0.0)) {
            coefficients.pop();
        }
        if coefficients.is_empty() {
            coefficients.push(Complex64::new(0.0, 0.0));
        }
        Ok(Self { coefficients })
    }

    pub fn from_real(coefficients: &[f64]) -> Result<Self> {
        Self::new(coefficients.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn constant(c: Complex64) -> Result<Self> {
        Self::new(vec![c])
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// True when the constant coefficient is exactly `1`.
    pub fn is_normalized(&self) -> bool {
        self.coefficients[0] == Complex64::new(1.0, 0.0)
    }

    pub fn has_real_coefficients(&self) -> bool {
        self.coefficients.iter().all(|c| c.im == 0.0)
    }

    /// Horner evaluation, highest degree first. No domain restriction:
    /// polynomials are entire.
    pub fn horner(&self, z: Complex64) -> Complex64 {
        self.coefficients
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coefficients.len() == 1 {
            return Polynomial {
                coefficients: vec![Complex64::new(0.0, 0.0)],
            };
        }
        let coefficients = self
            .coefficients
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, &c)| c * n as f64)
            .collect();
        Polynomial { coefficients }
    }

    /// Taylor coefficients `f^(k)(z) / k!` for `k = 0..=order`, by repeated
    /// synthetic division by `(x - z)`.
    pub fn taylor_at(&self, z: Complex64, order: usize) -> Vec<Complex64> {
        let mut work = self.coefficients.clone();
        let mut out = Vec::with_capacity(order + 1);
        for _ in 0..=order {
            if work.is_empty() {
                out.push(Complex64::new(0.0, 0.0));
                continue;
            }
            // After this pass work[1..] holds the quotient, work[0] the remainder.
            for i in (0..work.len() - 1).rev() {
                let carry = work[i + 1] * z;
                work[i] += carry;
            }
            out.push(work[0]);
            work.remove(0);
        }
        out
    }

    /// Returns `scale * self + shift`.
    pub fn affine(&self, scale: Complex64, shift: Complex64) -> Result<Polynomial> {
        let mut coefficients: Vec<Complex64> = self.coefficients.iter().map(|&c| c * scale).collect();
        coefficients[0] += shift;
        Polynomial::new(coefficients)
    }
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.coefficients.iter().map(|c| [c.re, c.im]).collect();
        pairs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(deserializer)?;
        if pairs.is_empty() {
            return Err(serde::de::Error::custom("coefficient list must be non-empty"));
        }
        Polynomial::new(pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
            .map_err(serde::de::Error::custom)
    }
}
