//! First-contact search: the smallest radius `r*` at which `min Re p` over the
//! circle `|z| = r*` reaches a level `alpha`, and every point on that circle
//! where it does.
//!
//! `Re p` is harmonic, so its minimum over `|z| <= r` sits on the boundary
//! circle and `r -> min_{|z|=r} Re p` is non-increasing. Bisection on the
//! radius therefore isolates the first root.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::AnalyticMap;
use crate::error::{LemmaError, Result};
use crate::tolerances::{Tolerances, DEFAULT_ANGULAR_SAMPLES, MAX_ANGULAR_SAMPLES, R_MAX};
use crate::transforms::LevelParameter;

/// A refined local minimum of `theta -> Re p(r e^{i theta})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleMinimum {
    pub theta: f64,
    pub value: f64,
}

/// A located first-contact point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryContact {
    pub z0: Complex64,
    pub r_star: f64,
    pub theta0: f64,
    pub alpha: LevelParameter,
    /// `Im p(z0)`.
    pub beta: f64,
    /// `|Re p(z0) - alpha|`.
    pub residual: f64,
}

impl BoundaryContact {
    /// Builds a contact record at an arbitrary point, for checking the lemma at
    /// user-supplied locations.
    pub fn at_point(p: &AnalyticMap, alpha: LevelParameter, z0: Complex64) -> Result<Self> {
        let value = p.eval(z0)?;
        Ok(Self {
            z0,
            r_star: z0.norm(),
            theta0: z0.arg().rem_euclid(TAU),
            alpha,
            beta: value.im,
            residual: (value.re - alpha.value()).abs(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum ContactOutcome {
    /// Non-empty, sorted by `theta0`.
    Found { contacts: Vec<BoundaryContact> },
    /// `Re p > alpha` up to the search ceiling; the margin is `min Re p - alpha`
    /// there.
    NoContact { min_real_margin: f64 },
    Degenerate { reason: String },
}

impl ContactOutcome {
    pub fn contacts(&self) -> &[BoundaryContact] {
        match self {
            ContactOutcome::Found { contacts } => contacts,
            _ => &[],
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, ContactOutcome::Found { .. })
    }
}

/// Parameters of the contact search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    pub samples: usize,
    pub r_max: f64,
    pub tolerances: Tolerances,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            samples: DEFAULT_ANGULAR_SAMPLES,
            r_max: R_MAX,
            tolerances: Tolerances::default(),
        }
    }
}

fn point(r: f64, theta: f64) -> Complex64 {
    Complex64::from_polar(r, theta)
}

fn real_part(p: &AnalyticMap, r: f64, theta: f64) -> Result<f64> {
    Ok(p.eval(point(r, theta))?.re)
}

/// `d/dtheta Re p(r e^{i theta}) = -Im(z p'(z))`.
fn angular_slope(p: &AnalyticMap, r: f64, theta: f64) -> Result<f64> {
    let z = point(r, theta);
    Ok(-(z * p.derivative_at(z)?).im)
}

fn sample_circle(p: &AnalyticMap, r: f64, n: usize) -> Result<Vec<f64>> {
    (0..n)
        .map(|j| real_part(p, r, TAU * j as f64 / n as f64))
        .collect()
}

/// Indices of sampled local minima (strict on the left so plateaus count once).
fn candidate_indices(values: &[f64]) -> Vec<usize> {
    let n = values.len();
    (0..n)
        .filter(|&j| {
            let prev = values[(j + n - 1) % n];
            let next = values[(j + 1) % n];
            values[j] < prev && values[j] <= next
        })
        .collect()
}

fn crowded(candidates: &[usize], n: usize) -> bool {
    if candidates.len() < 2 {
        return false;
    }
    candidates
        .windows(2)
        .map(|w| w[1] - w[0])
        .chain(std::iter::once(candidates[0] + n - candidates[candidates.len() - 1]))
        .any(|gap| gap <= 3)
}

fn golden_section(p: &AnalyticMap, r: f64, mut a: f64, mut b: f64) -> Result<f64> {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = real_part(p, r, x1)?;
    let mut f2 = real_part(p, r, x2)?;
    for _ in 0..200 {
        if (b - a).abs() <= 1e-15 {
            break;
        }
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = real_part(p, r, x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = real_part(p, r, x2)?;
        }
    }
    Ok(if f1 < f2 { x1 } else { x2 })
}

/// Refines the minimum bracketed by samples `j - 1 .. j + 1`.
fn refine(p: &AnalyticMap, r: f64, n: usize, j: usize, sampled: f64) -> Result<CircleMinimum> {
    let step = TAU / n as f64;
    let theta_j = step * j as f64;
    let mut lo = theta_j - step;
    let mut hi = theta_j + step;
    let s_lo = angular_slope(p, r, lo)?;
    let s_hi = angular_slope(p, r, hi)?;
    let theta = if s_lo < 0.0 && s_hi > 0.0 {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let s = angular_slope(p, r, mid)?;
            if s.abs() <= 1e-15 || hi - lo <= 4.0 * f64::EPSILON * (1.0 + mid.abs()) {
                lo = mid;
                hi = mid;
                break;
            }
            if s < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    } else {
        golden_section(p, r, lo, hi)?
    };
    let value = real_part(p, r, theta)?;
    Ok(if value <= sampled {
        CircleMinimum {
            theta: theta.rem_euclid(TAU),
            value,
        }
    } else {
        CircleMinimum {
            theta: theta_j,
            value: sampled,
        }
    })
}

fn effective_samples(p: &AnalyticMap, samples: usize) -> usize {
    let mut n = samples;
    if let Some(degree) = p.degree() {
        if degree > 32 {
            while n < 128 * degree && n < MAX_ANGULAR_SAMPLES {
                n *= 2;
            }
        }
    }
    n.min(MAX_ANGULAR_SAMPLES.max(samples))
}

fn check_circle_args(r: f64, samples: usize) -> Result<()> {
    if !r.is_finite() || r <= 0.0 || r >= 1.0 {
        return Err(LemmaError::InvalidParameter(format!("radius must lie in (0, 1), got {r}")));
    }
    if samples < 64 {
        return Err(LemmaError::InvalidParameter(format!(
            "at least 64 angular samples required, got {samples}"
        )));
    }
    Ok(())
}

/// All refined local minima of `Re p` on `|z| = r`, sorted by angle.
pub fn local_minima_on_circle(p: &AnalyticMap, r: f64, samples: usize) -> Result<Vec<CircleMinimum>> {
    check_circle_args(r, samples)?;
    let mut n = effective_samples(p, samples);
    loop {
        let values = sample_circle(p, r, n)?;
        let candidates = candidate_indices(&values);
        if crowded(&candidates, n) && n < MAX_ANGULAR_SAMPLES {
            n *= 2;
            continue;
        }
        if candidates.is_empty() {
            // Constant on the circle.
            return Ok(vec![CircleMinimum {
                theta: 0.0,
                value: values[0],
            }]);
        }
        let mut minima = candidates
            .into_iter()
            .map(|j| refine(p, r, n, j, values[j]))
            .collect::<Result<Vec<_>>>()?;
        minima.sort_by(|a, b| a.theta.total_cmp(&b.theta));
        return Ok(minima);
    }
}

/// Global minimum of `theta -> Re p(r e^{i theta})` over `[0, 2 pi)`.
pub fn min_real_on_circle(p: &AnalyticMap, r: f64, samples: usize) -> Result<CircleMinimum> {
    let minima = local_minima_on_circle(p, r, samples)?;
    Ok(minima
        .into_iter()
        .reduce(|best, m| if m.value < best.value { m } else { best })
        .expect("at least one minimum"))
}

/// Locates the first contact of `Re p` with the level `alpha`.
pub fn first_contact(p: &AnalyticMap, alpha: LevelParameter, config: &SearchConfig) -> Result<ContactOutcome> {
    let at_zero = p.eval(Complex64::new(0.0, 0.0))?;
    if (at_zero - 1.0).norm() > config.tolerances.zero {
        return Err(LemmaError::NotNormalized {
            re: at_zero.re,
            im: at_zero.im,
        });
    }
    let a = alpha.value();
    let tol = &config.tolerances;
    let phi = |r: f64| -> Result<(f64, CircleMinimum)> {
        let m = min_real_on_circle(p, r, config.samples)?;
        Ok((m.value - a, m))
    };

    let (phi_max, _) = phi(config.r_max)?;
    if phi_max > 0.0 {
        return Ok(ContactOutcome::NoContact {
            min_real_margin: phi_max,
        });
    }

    let mut lo = 0.0;
    let mut hi = config.r_max;
    while hi - lo > tol.radius {
        let mid = 0.5 * (lo + hi);
        if phi(mid)?.0 > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    // Newton on phi, using d/dr min Re p = Re(z p'(z)) / r at the minimizer.
    let (mut r_star, (mut phi_star, mut best)) = (hi, phi(hi)?);
    let (phi_lo, lo_min) = phi(lo)?;
    if phi_lo.abs() < phi_star.abs() {
        r_star = lo;
        phi_star = phi_lo;
        best = lo_min;
    }
    for _ in 0..4 {
        if phi_star == 0.0 {
            break;
        }
        let z = point(r_star, best.theta);
        let slope = (z * p.derivative_at(z)?).re / r_star;
        if slope.is_nan() || slope >= 0.0 {
            break;
        }
        let candidate = r_star - phi_star / slope;
        if !(candidate > lo - tol.radius && candidate < hi + tol.radius) || candidate >= 1.0 {
            break;
        }
        let (phi_c, min_c) = phi(candidate)?;
        if phi_c.abs() >= phi_star.abs() {
            break;
        }
        r_star = candidate;
        phi_star = phi_c;
        best = min_c;
    }

    let z_best = point(r_star, best.theta);
    let radial_slope = (z_best * p.derivative_at(z_best)?).re / r_star;
    if radial_slope > -tol.zero {
        return Ok(ContactOutcome::Degenerate {
            reason: format!("tangential contact: radial slope {radial_slope:e} at r* = {r_star}"),
        });
    }

    let inner = r_star * (1.0 - 10.0 * tol.radius);
    let inner_values = sample_circle(p, inner, effective_samples(p, config.samples))?;
    let inner_min = inner_values.iter().copied().fold(f64::INFINITY, f64::min);
    if inner_min <= a {
        return Ok(ContactOutcome::Degenerate {
            reason: format!("Re p reaches alpha below r* = {r_star} (sampled minimum {inner_min})"),
        });
    }

    let mut located = Vec::new();
    for m in local_minima_on_circle(p, r_star, config.samples)? {
        let residual = (m.value - a).abs();
        if residual > tol.contact {
            continue;
        }
        let z0 = point(r_star, m.theta);
        let value = p.eval(z0)?;
        located.push(BoundaryContact {
            z0,
            r_star: z0.norm(),
            theta0: m.theta,
            alpha,
            beta: value.im,
            residual: (value.re - a).abs(),
        });
    }
    if located.is_empty() {
        return Ok(ContactOutcome::Degenerate {
            reason: format!("no contact within residual {} at r* = {r_star}", tol.contact),
        });
    }
    let total = located.len();
    let contacts: Vec<BoundaryContact> = located.into_iter().filter(|c| c.beta.abs() >= tol.beta).collect();
    if contacts.is_empty() {
        return Ok(ContactOutcome::Degenerate {
            reason: format!("|beta| < {} at all {total} contact(s) on r* = {r_star}", tol.beta),
        });
    }
    Ok(ContactOutcome::Found { contacts })
}

/// Checks `Re p > alpha - tol_contact` on a polar grid strictly inside the
/// contact radius.
pub fn verify_interior_hypothesis(
    p: &AnalyticMap,
    alpha: LevelParameter,
    contact: &BoundaryContact,
    radial_steps: usize,
    angular_samples: usize,
    tolerances: &Tolerances,
) -> Result<bool> {
    let threshold = alpha.value() - tolerances.contact;
    if p.eval(Complex64::new(0.0, 0.0))?.re <= threshold {
        return Ok(false);
    }
    let outer = contact.r_star * (1.0 - 10.0 * tolerances.radius);
    for i in 1..=radial_steps {
        let r = outer * i as f64 / radial_steps as f64;
        for j in 0..angular_samples {
            if real_part(p, r, TAU * j as f64 / angular_samples as f64)? <= threshold {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
