//! Analytic maps on the unit disk with exact derivative access.
//!
//! Every representation produces Taylor coefficients at a point, which gives
//! values and derivatives of any order through one code path. Polynomial and
//! Herglotz forms differentiate in closed form; the Cayley transform of a map
//! is handled by power-series division.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{LemmaError, Result};
use crate::poly::Polynomial;
use crate::tolerances::TOL_ZERO;

/// Finite convex combination of half-plane kernels
/// `h(z) = sum_j w_j (1 + e^{-i t_j} z) / (1 - e^{-i t_j} z)`.
///
/// `h(0) = 1` and `Re h > 0` on the open disk.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HerglotzMixture {
    weights: Vec<f64>,
    angles: Vec<f64>,
}

impl HerglotzMixture {
    pub fn new(weights: Vec<f64>, angles: Vec<f64>) -> Result<Self> {
        if weights.is_empty() || weights.len() != angles.len() {
            return Err(LemmaError::InvalidParameter(format!(
                "herglotz mixture needs matching non-empty weights and angles (got {} and {})",
                weights.len(),
                angles.len()
            )));
        }
        if weights.iter().chain(&angles).any(|v| !v.is_finite()) {
            return Err(LemmaError::NonFinite("herglotz mixture"));
        }
        if weights.iter().any(|&w| w < 0.0) {
            return Err(LemmaError::InvalidParameter("negative herglotz weight".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-14 {
            return Err(LemmaError::InvalidParameter(format!(
                "herglotz weights sum to {total}, not 1"
            )));
        }
        let angles = angles.into_iter().map(|t| t.rem_euclid(TAU)).collect();
        Ok(Self { weights, angles })
    }

    /// The single kernel `(1 + e^{-it} z) / (1 - e^{-it} z)`.
    pub fn single(angle: f64) -> Result<Self> {
        Self::new(vec![1.0], vec![angle])
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    /// `h^(k)(z) / k!` for `k = 0..=order`.
    ///
    /// Each kernel is `-1 + 2 / (1 - u z)`; around `z` its expansion in `t` is
    /// `-1 + (2/a) sum (u/a)^k t^k` with `a = 1 - u z`.
    fn taylor_at(&self, z: Complex64, order: usize) -> Result<Vec<Complex64>> {
        let mut out = vec![Complex64::new(0.0, 0.0); order + 1];
        for (&w, &theta) in self.weights.iter().zip(&self.angles) {
            let u = Complex64::from_polar(1.0, -theta);
            let a = Complex64::new(1.0, 0.0) - u * z;
            if a.norm() < TOL_ZERO {
                return Err(LemmaError::Pole(a.norm()));
            }
            let ratio = u / a;
            let mut term = Complex64::new(2.0, 0.0) / a;
            out[0] += w * (term - 1.0);
            for slot in out.iter_mut().skip(1) {
                term *= ratio;
                *slot += w * term;
            }
        }
        Ok(out)
    }
}

impl<'de> Deserialize<'de> for HerglotzMixture {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            weights: Vec<f64>,
            angles: Vec<f64>,
        }
        let raw = Raw::deserialize(deserializer)?;
        HerglotzMixture::new(raw.weights, raw.angles).map_err(serde::de::Error::custom)
    }
}

/// `offset + scale * h^(order)`, where the offset only applies at order 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HerglotzForm {
    pub mixture: HerglotzMixture,
    pub offset: f64,
    pub scale: f64,
    #[serde(default)]
    pub order: usize,
}

impl HerglotzForm {
    /// The positive-real-part shift `alpha + (1 - alpha) h`, which has
    /// `Re > alpha` on the whole disk.
    pub fn shifted(mixture: HerglotzMixture, alpha: f64) -> Self {
        Self {
            mixture,
            offset: alpha,
            scale: 1.0 - alpha,
            order: 0,
        }
    }
}

/// An analytic function on the unit disk.
#[derive(Debug, Clone, PartialEq)]
pub enum AnalyticMap {
    Polynomial(Polynomial),
    Herglotz(HerglotzForm),
    /// `(1 - f) / (1 + f)`.
    Cayley(Box<AnalyticMap>),
    /// `scale * f + shift`.
    Affine {
        base: Box<AnalyticMap>,
        scale: Complex64,
        shift: Complex64,
    },
    /// `f^(order)` of a base without a closed-form derivative.
    Derived { base: Box<AnalyticMap>, order: usize },
}

fn falling_factorial_ratio(top: usize, bottom: usize) -> f64 {
    // top! / bottom!
    ((bottom + 1)..=top).fold(1.0, |acc, n| acc * n as f64)
}

fn check_point(z: Complex64) -> Result<()> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(LemmaError::NonFinite("evaluation point"));
    }
    Ok(())
}

fn check_finite(values: &[Complex64], what: &'static str) -> Result<()> {
    if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(LemmaError::NonFinite(what));
    }
    Ok(())
}

impl AnalyticMap {
    pub fn polynomial(p: Polynomial) -> Self {
        AnalyticMap::Polynomial(p)
    }

    pub fn from_real_coefficients(coefficients: &[f64]) -> Result<Self> {
        Polynomial::from_real(coefficients).map(AnalyticMap::Polynomial)
    }

    pub fn cayley_of(self) -> Self {
        AnalyticMap::Cayley(Box::new(self))
    }

    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        match self {
            AnalyticMap::Polynomial(p) => Some(p),
            _ => None,
        }
    }

    /// True when the map extends to an entire function, so it may be sampled
    /// on the closed disk.
    pub fn is_entire(&self) -> bool {
        match self {
            AnalyticMap::Polynomial(_) => true,
            AnalyticMap::Herglotz(_) | AnalyticMap::Cayley(_) => false,
            AnalyticMap::Affine { base, .. } | AnalyticMap::Derived { base, .. } => base.is_entire(),
        }
    }

    /// True when `f(conj z) = conj f(z)` is structurally guaranteed.
    pub fn has_real_coefficients(&self) -> bool {
        match self {
            AnalyticMap::Polynomial(p) => p.has_real_coefficients(),
            AnalyticMap::Herglotz(_) => false,
            AnalyticMap::Cayley(base) | AnalyticMap::Derived { base, .. } => base.has_real_coefficients(),
            AnalyticMap::Affine { base, scale, shift } => {
                scale.im == 0.0 && shift.im == 0.0 && base.has_real_coefficients()
            }
        }
    }

    /// Polynomial degree, or `None` for non-polynomial forms.
    pub fn degree(&self) -> Option<usize> {
        match self {
            AnalyticMap::Polynomial(p) => Some(p.degree()),
            AnalyticMap::Affine { base, .. } => base.degree(),
            AnalyticMap::Derived { base, order } => base.degree().map(|d| d.saturating_sub(*order)),
            _ => None,
        }
    }

    /// Taylor coefficients `f^(k)(z) / k!`, `k = 0..=order`, with no domain
    /// check on `z`.
    fn taylor_unchecked(&self, z: Complex64, order: usize) -> Result<Vec<Complex64>> {
        match self {
            AnalyticMap::Polynomial(p) => Ok(p.taylor_at(z, order)),
            AnalyticMap::Herglotz(form) => {
                let h = form.mixture.taylor_at(z, form.order + order)?;
                let mut out: Vec<Complex64> = (0..=order)
                    .map(|k| {
                        h[form.order + k] * (form.scale * falling_factorial_ratio(form.order + k, k))
                    })
                    .collect();
                if form.order == 0 {
                    out[0] += form.offset;
                }
                Ok(out)
            }
            AnalyticMap::Cayley(base) => {
                let q = base.taylor_unchecked(z, order)?;
                let mut d = q;
                d[0] += 1.0;
                if d[0].norm() < TOL_ZERO {
                    return Err(LemmaError::Pole(d[0].norm()));
                }
                // Series reciprocal of 1 + q, then w = 2 / (1 + q) - 1.
                let mut recip = Vec::with_capacity(order + 1);
                recip.push(Complex64::new(1.0, 0.0) / d[0]);
                for k in 1..=order {
                    let acc: Complex64 = (1..=k).map(|j| d[j] * recip[k - j]).sum();
                    recip.push(-acc / d[0]);
                }
                let mut out: Vec<Complex64> = recip.into_iter().map(|r| r * 2.0).collect();
                out[0] -= 1.0;
                Ok(out)
            }
            AnalyticMap::Affine { base, scale, shift } => {
                let mut out: Vec<Complex64> = base
                    .taylor_unchecked(z, order)?
                    .into_iter()
                    .map(|c| c * scale)
                    .collect();
                out[0] += shift;
                Ok(out)
            }
            AnalyticMap::Derived { base, order: d } => {
                let t = base.taylor_unchecked(z, d + order)?;
                Ok((0..=order)
                    .map(|k| t[d + k] * falling_factorial_ratio(d + k, k))
                    .collect())
            }
        }
    }

    /// Taylor coefficients `f^(k)(z) / k!` at a point of the open disk.
    pub fn taylor_at(&self, z: Complex64, order: usize) -> Result<Vec<Complex64>> {
        check_point(z)?;
        if z.norm() >= 1.0 {
            return Err(LemmaError::Domain { re: z.re, im: z.im });
        }
        let t = self.taylor_unchecked(z, order)?;
        check_finite(&t, "map evaluation")?;
        Ok(t)
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        check_point(z)?;
        if z.norm() >= 1.0 {
            return Err(LemmaError::Domain { re: z.re, im: z.im });
        }
        let v = self.value_unchecked(z)?;
        check_finite(&[v], "map evaluation")?;
        Ok(v)
    }

    fn value_unchecked(&self, z: Complex64) -> Result<Complex64> {
        match self {
            AnalyticMap::Polynomial(p) => Ok(p.horner(z)),
            _ => Ok(self.taylor_unchecked(z, 0)?[0]),
        }
    }

    /// Evaluation on the closed disk; points with `|z| = 1` are accepted only
    /// for entire maps.
    pub fn eval_closed(&self, z: Complex64) -> Result<Complex64> {
        check_point(z)?;
        let r = z.norm();
        if r > 1.0 || (r >= 1.0 && !self.is_entire()) {
            return Err(LemmaError::Domain { re: z.re, im: z.im });
        }
        let v = self.value_unchecked(z)?;
        check_finite(&[v], "map evaluation")?;
        Ok(v)
    }

    pub fn derivative_at(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.taylor_at(z, 1)?[1])
    }

    /// `(f(z), f'(z), f''(z))`.
    pub fn value_and_derivatives(&self, z: Complex64) -> Result<(Complex64, Complex64, Complex64)> {
        let t = self.taylor_at(z, 2)?;
        Ok((t[0], t[1], t[2] * 2.0))
    }

    /// `f'` in closed form where the representation allows it.
    pub fn derivative(&self) -> AnalyticMap {
        match self {
            AnalyticMap::Polynomial(p) => AnalyticMap::Polynomial(p.derivative()),
            AnalyticMap::Herglotz(form) => AnalyticMap::Herglotz(HerglotzForm {
                mixture: form.mixture.clone(),
                offset: 0.0,
                scale: form.scale,
                order: form.order + 1,
            }),
            AnalyticMap::Affine { base, scale, .. } => AnalyticMap::Affine {
                base: Box::new(base.derivative()),
                scale: *scale,
                shift: Complex64::new(0.0, 0.0),
            },
            AnalyticMap::Derived { base, order } => AnalyticMap::Derived {
                base: base.clone(),
                order: order + 1,
            },
            AnalyticMap::Cayley(_) => AnalyticMap::Derived {
                base: Box::new(self.clone()),
                order: 1,
            },
        }
    }

    /// `z f'(z) / f(z)`.
    pub fn log_derivative_at(&self, z: Complex64, tol_zero: f64) -> Result<Complex64> {
        let t = self.taylor_at(z, 1)?;
        let value = t[0];
        if value.norm() < tol_zero {
            return Err(LemmaError::ZeroValue(value.norm()));
        }
        let out = z * t[1] / value;
        check_finite(&[out], "logarithmic derivative")?;
        Ok(out)
    }

    /// `scale * self + shift`, kept in closed form where possible.
    pub fn affine(&self, scale: Complex64, shift: Complex64) -> Result<AnalyticMap> {
        match self {
            AnalyticMap::Polynomial(p) => p.affine(scale, shift).map(AnalyticMap::Polynomial),
            AnalyticMap::Herglotz(form) if scale.im == 0.0 && shift.im == 0.0 && form.order == 0 => {
                Ok(AnalyticMap::Herglotz(HerglotzForm {
                    mixture: form.mixture.clone(),
                    offset: form.offset * scale.re + shift.re,
                    scale: form.scale * scale.re,
                    order: 0,
                }))
            }
            _ => Ok(AnalyticMap::Affine {
                base: Box::new(self.clone()),
                scale,
                shift,
            }),
        }
    }
}

impl From<Polynomial> for AnalyticMap {
    fn from(p: Polynomial) -> Self {
        AnalyticMap::Polynomial(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn special() -> AnalyticMap {
        AnalyticMap::from_real_coefficients(&[1.0, 1.0, 0.5]).unwrap()
    }

    fn central_difference(f: &AnalyticMap, z: Complex64) -> Complex64 {
        let h = 1e-6;
        (f.eval(z + h).unwrap() - f.eval(z - h).unwrap()) / (2.0 * h)
    }

    #[test]
    fn example_values() {
        let p = special();
        let z0 = c(-0.5, 0.5);
        assert!((p.eval(z0).unwrap() - c(0.5, 0.25)).norm() < 1e-15);
        assert_eq!(p.eval(c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        let ld = p.log_derivative_at(z0, TOL_ZERO).unwrap();
        assert!((ld - c(-0.8, 0.4)).norm() < 1e-15);
        let ld = p.log_derivative_at(z0.conj(), TOL_ZERO).unwrap();
        assert!((ld - c(-0.8, -0.4)).norm() < 1e-15);
        assert_eq!(p.log_derivative_at(c(0.0, 0.0), TOL_ZERO).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn domain_is_open_disk() {
        let p = special();
        assert!(matches!(p.eval(c(1.0, 0.0)), Err(LemmaError::Domain { .. })));
        assert!(matches!(p.eval(c(0.6, 0.8)), Err(LemmaError::Domain { .. })));
        assert!(matches!(p.eval(c(f64::NAN, 0.0)), Err(LemmaError::NonFinite(_))));
        // Entire maps may be sampled on the boundary circle.
        assert!((p.eval_closed(c(1.0, 0.0)).unwrap() - c(2.5, 0.0)).norm() < 1e-15);
        let h = AnalyticMap::Herglotz(HerglotzForm::shifted(HerglotzMixture::single(0.0).unwrap(), 0.0));
        assert!(h.eval_closed(c(-1.0, 0.0)).is_err());
    }

    #[test]
    fn zero_value_is_rejected() {
        // 1 + 2z vanishes at z = -1/2.
        let p = AnalyticMap::from_real_coefficients(&[1.0, 2.0]).unwrap();
        assert!(matches!(
            p.log_derivative_at(c(-0.5, 0.0), TOL_ZERO),
            Err(LemmaError::ZeroValue(_))
        ));
    }

    #[test]
    fn herglotz_kernel_values() {
        let h = AnalyticMap::Herglotz(HerglotzForm::shifted(HerglotzMixture::single(0.0).unwrap(), 0.0));
        let z = c(0.3, -0.2);
        let expected = (c(1.0, 0.0) + z) / (c(1.0, 0.0) - z);
        assert!((h.eval(z).unwrap() - expected).norm() < 1e-15);
        assert_eq!(h.eval(c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        let d = h.derivative();
        let expected_d = c(2.0, 0.0) / ((c(1.0, 0.0) - z) * (c(1.0, 0.0) - z));
        assert!((d.eval(z).unwrap() - expected_d).norm() < 1e-14);
    }

    #[test]
    fn derivatives_match_finite_differences_for_every_form() {
        let mixture = HerglotzMixture::new(vec![0.25, 0.75], vec![1.0, 4.0]).unwrap();
        let herglotz = AnalyticMap::Herglotz(HerglotzForm::shifted(mixture, 0.3));
        let poly = special();
        let cayley = AnalyticMap::from_real_coefficients(&[1.0, 0.4, -0.2]).unwrap().cayley_of();
        let affine = cayley.affine(c(0.5, 0.1), c(0.2, 0.0)).unwrap();
        let maps = [poly, herglotz.clone(), herglotz.derivative(), cayley.clone(), cayley.derivative(), affine];
        let points = [c(0.1, 0.2), c(-0.5, 0.3), c(0.7, -0.4), c(0.0, -0.85)];
        for f in &maps {
            for &z in &points {
                let exact = f.derivative_at(z).unwrap();
                let fd = central_difference(f, z);
                let rel = (exact - fd).norm() / (1.0 + exact.norm());
                assert!(rel < 1e-6, "{f:?} at {z}: {exact} vs {fd}");
                // derivative() and derivative_at() agree.
                let via_map = f.derivative().eval(z).unwrap();
                assert!((via_map - exact).norm() <= 1e-12 * (1.0 + exact.norm()));
            }
        }
    }

    #[test]
    fn cayley_pole_is_reported() {
        // q(z) = -1 + ... at z = 0 gives 1 + q = 0.
        let q = AnalyticMap::from_real_coefficients(&[-1.0, 1.0]).unwrap();
        assert!(matches!(q.cayley_of().eval(c(0.0, 0.0)), Err(LemmaError::Pole(_))));
    }

    #[test]
    fn herglotz_mixture_validation() {
        assert!(HerglotzMixture::new(vec![], vec![]).is_err());
        assert!(HerglotzMixture::new(vec![0.5], vec![0.0]).is_err());
        assert!(HerglotzMixture::new(vec![1.5, -0.5], vec![0.0, 1.0]).is_err());
        let m = HerglotzMixture::new(vec![1.0], vec![-1.0]).unwrap();
        assert!((m.angles()[0] - (TAU - 1.0)).abs() < 1e-15);
    }
}
