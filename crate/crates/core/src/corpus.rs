//! Function families for the property suites: the worked example, its
//! parameterized family, random polynomials with a forced interior contact,
//! and positive-real-part Herglotz mixtures as a negative control.
//!
//! Every random draw comes from a ChaCha stream keyed by the seed, so a
//! [`CorpusSpec`] reproduces the same function bit-for-bit on any platform.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

pub use crate::analytic::HerglotzMixture;
use crate::analytic::{AnalyticMap, HerglotzForm};
use crate::contact::{first_contact, min_real_on_circle, ContactOutcome, SearchConfig};
use crate::error::{LemmaError, Result};
use crate::poly::Polynomial;
use crate::tolerances::DEFAULT_ANGULAR_SAMPLES;
use crate::transforms::LevelParameter;

/// Radius on which a random polynomial is scaled to undershoot the level.
pub const FORCING_RADIUS: f64 = 0.9;
/// Overshoot factor of the forcing scale.
pub const FORCING_OVERSHOOT: f64 = 1.2;
/// Random draws must produce a contact below this radius.
pub const MAX_FORCED_RADIUS: f64 = 0.95;
pub const MAX_REJECTIONS: u32 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Family {
    /// `1 + (1 - alpha)(2z + z^2)`.
    PaperExample { alpha: LevelParameter },
    /// `1 + z + z^2/2`, analysed at level `1/2`.
    PaperSpecial,
    RandomPolynomial {
        degree: usize,
        alpha: LevelParameter,
        #[serde(default)]
        real_coefficients: bool,
    },
    /// `alpha + (1 - alpha) h` for a random Herglotz mixture `h`.
    HerglotzShift { n_atoms: usize, alpha: LevelParameter },
}

impl Family {
    /// The level at which the family is meant to be analysed.
    pub fn level(&self) -> LevelParameter {
        match *self {
            Family::PaperExample { alpha }
            | Family::RandomPolynomial { alpha, .. }
            | Family::HerglotzShift { alpha, .. } => alpha,
            Family::PaperSpecial => LevelParameter::new(0.5).expect("valid level"),
        }
    }
}

/// A replayable corpus draw.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorpusSpec {
    pub family: Family,
    #[serde(default)]
    pub seed: u64,
}

/// A generated function together with generation metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct Generated {
    pub map: AnalyticMap,
    pub alpha: LevelParameter,
    pub rejections: u32,
    /// Contact outcome computed while validating a forced draw, if any.
    pub outcome: Option<ContactOutcome>,
}

impl CorpusSpec {
    pub fn generate(&self) -> Result<Generated> {
        let alpha = self.family.level();
        match self.family {
            Family::PaperExample { alpha } => Ok(Generated {
                map: paper_example(alpha),
                alpha,
                rejections: 0,
                outcome: None,
            }),
            Family::PaperSpecial => Ok(Generated {
                map: paper_special(),
                alpha,
                rejections: 0,
                outcome: None,
            }),
            Family::RandomPolynomial {
                degree,
                alpha,
                real_coefficients,
            } => {
                let draw = random_contact_poly(degree, alpha, self.seed, real_coefficients)?;
                Ok(Generated {
                    map: draw.map,
                    alpha,
                    rejections: draw.rejections,
                    outcome: Some(draw.outcome),
                })
            }
            Family::HerglotzShift { n_atoms, alpha } => {
                let mixture = herglotz_sample(n_atoms, self.seed)?;
                Ok(Generated {
                    map: AnalyticMap::Herglotz(HerglotzForm::shifted(mixture, alpha.value())),
                    alpha,
                    rejections: 0,
                    outcome: None,
                })
            }
        }
    }
}

/// `1 + 2(1 - alpha) z + (1 - alpha) z^2`.
pub fn paper_example(alpha: LevelParameter) -> AnalyticMap {
    let s = alpha.complement();
    AnalyticMap::from_real_coefficients(&[1.0, 2.0 * s, s]).expect("finite coefficients")
}

/// `1 + z + z^2 / 2`.
pub fn paper_special() -> AnalyticMap {
    AnalyticMap::from_real_coefficients(&[1.0, 1.0, 0.5]).expect("finite coefficients")
}

/// A Herglotz mixture with flat-Dirichlet weights and uniform angles.
pub fn herglotz_sample(n_atoms: usize, seed: u64) -> Result<HerglotzMixture> {
    if n_atoms == 0 {
        return Err(LemmaError::InvalidParameter("n_atoms must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<f64> = (0..n_atoms).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = raw.iter().sum();
    let weights = raw.into_iter().map(|w| w / total).collect();
    let angles = (0..n_atoms).map(|_| rng.random_range(0.0..TAU)).collect();
    HerglotzMixture::new(weights, angles)
}

/// A contact-forced random polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct ContactDraw {
    pub map: AnalyticMap,
    pub outcome: ContactOutcome,
    pub rejections: u32,
}

/// Scales `g` (with `g(0) = 0`) so that `p = 1 + c g` dips below `alpha` on
/// `|z| = FORCING_RADIUS`: `c = 1.2 (1 - alpha) / |mu|` where `mu` is the
/// minimum of `Re g` there. Returns `None` when `mu` is numerically zero.
pub fn force_contact(g: &Polynomial, alpha: LevelParameter) -> Result<Option<AnalyticMap>> {
    if g.coefficients()[0] != Complex64::new(0.0, 0.0) {
        return Err(LemmaError::InvalidParameter("forcing requires g(0) = 0".into()));
    }
    let mu = min_real_on_circle(&AnalyticMap::Polynomial(g.clone()), FORCING_RADIUS, DEFAULT_ANGULAR_SAMPLES)?.value;
    if mu.abs() < 1e-12 {
        return Ok(None);
    }
    let scale = FORCING_OVERSHOOT * alpha.complement() / mu.abs();
    let p = g.affine(Complex64::new(scale, 0.0), Complex64::new(1.0, 0.0))?;
    // 1 + c * 0 is exactly 1; pin it anyway so normalization is exact.
    let mut coefficients = p.coefficients().to_vec();
    coefficients[0] = Complex64::new(1.0, 0.0);
    Ok(Some(AnalyticMap::Polynomial(Polynomial::new(coefficients)?)))
}

fn draw_g(rng: &mut ChaCha8Rng, degree: usize, real: bool) -> Result<Polynomial> {
    let mut coefficients = vec![Complex64::new(0.0, 0.0)];
    for _ in 0..degree {
        let re = rng.random_range(-1.0..1.0);
        let im = if real { 0.0 } else { rng.random_range(-1.0..1.0) };
        coefficients.push(Complex64::new(re, im));
    }
    Polynomial::new(coefficients)
}

/// Draws `p = 1 + c g` with a guaranteed interior contact at level `alpha`.
///
/// A draw is rejected and the stream advanced when the forcing scale is
/// undefined or the contact search does not find a contact below
/// [`MAX_FORCED_RADIUS`]. Degenerate outcomes are returned, not rejected.
pub fn random_contact_poly(degree: usize, alpha: LevelParameter, seed: u64, real_coefficients: bool) -> Result<ContactDraw> {
    if degree == 0 {
        return Err(LemmaError::InvalidParameter("degree must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let config = SearchConfig::default();
    for rejections in 0..MAX_REJECTIONS {
        let g = draw_g(&mut rng, degree, real_coefficients)?;
        let Some(map) = force_contact(&g, alpha)? else {
            continue;
        };
        let outcome = first_contact(&map, alpha, &config)?;
        let accepted = match &outcome {
            ContactOutcome::Found { contacts } => contacts.iter().all(|c| c.r_star < MAX_FORCED_RADIUS),
            ContactOutcome::Degenerate { .. } => true,
            ContactOutcome::NoContact { .. } => false,
        };
        if accepted {
            return Ok(ContactDraw {
                map,
                outcome,
                rejections,
            });
        }
    }
    Err(LemmaError::Generation {
        attempts: MAX_REJECTIONS,
    })
}
