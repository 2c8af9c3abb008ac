//! The analysis pipeline behind `analyze`, `verify` and `fuzz`:
//! contact search, interior-hypothesis check, then the lemma checks.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::AnalyticMap;
use crate::contact::{first_contact, verify_interior_hypothesis, BoundaryContact, ContactOutcome, SearchConfig};
use crate::corpus::{CorpusSpec, Family};
use crate::error::Result;
use crate::lemma::{verify_corollary, verify_theorem, NunokawaReport};
use crate::transforms::LevelParameter;

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 1;
pub const EXIT_FLAG_FALSE: u8 = 2;
pub const EXIT_NO_CONTACT: u8 = 3;
pub const EXIT_DEGENERATE: u8 = 4;

pub const INTERIOR_RADIAL_STEPS: usize = 64;
pub const INTERIOR_ANGULAR_SAMPLES: usize = 512;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContactCheck {
    pub contact: BoundaryContact,
    pub interior_hypothesis: bool,
    pub report: NunokawaReport,
}

impl ContactCheck {
    pub fn passed(&self) -> bool {
        self.interior_hypothesis && self.report.passed()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Analysis {
    pub alpha: LevelParameter,
    pub outcome: ContactOutcome,
    pub checks: Vec<ContactCheck>,
}

impl Analysis {
    pub fn passed(&self) -> bool {
        self.outcome.is_found() && self.checks.iter().all(ContactCheck::passed)
    }

    /// 0 all flags true, 2 some flag false, 3 no contact, 4 degenerate.
    pub fn exit_code(&self) -> u8 {
        match self.outcome {
            ContactOutcome::NoContact { .. } => EXIT_NO_CONTACT,
            ContactOutcome::Degenerate { .. } => EXIT_DEGENERATE,
            ContactOutcome::Found { .. } if self.passed() => EXIT_OK,
            ContactOutcome::Found { .. } => EXIT_FLAG_FALSE,
        }
    }
}

/// Checks the interior hypothesis and the lemma at one contact. At
/// `alpha = 0` the corollary checks are included.
pub fn check_contact(p: &AnalyticMap, alpha: LevelParameter, contact: &BoundaryContact, config: &SearchConfig) -> Result<ContactCheck> {
    let tol = &config.tolerances;
    let interior = verify_interior_hypothesis(p, alpha, contact, INTERIOR_RADIAL_STEPS, INTERIOR_ANGULAR_SAMPLES, tol)?;
    let report = if alpha.value() == 0.0 {
        verify_corollary(p, contact, tol)?
    } else {
        verify_theorem(p, alpha, contact, tol)?
    };
    Ok(ContactCheck {
        contact: *contact,
        interior_hypothesis: interior,
        report,
    })
}

pub fn analyze_outcome(p: &AnalyticMap, alpha: LevelParameter, outcome: ContactOutcome, config: &SearchConfig) -> Result<Analysis> {
    let checks = outcome
        .contacts()
        .iter()
        .map(|c| check_contact(p, alpha, c, config))
        .collect::<Result<Vec<_>>>()?;
    Ok(Analysis { alpha, outcome, checks })
}

pub fn analyze(p: &AnalyticMap, alpha: LevelParameter, config: &SearchConfig) -> Result<Analysis> {
    let outcome = first_contact(p, alpha, config)?;
    analyze_outcome(p, alpha, outcome, config)
}

/// A fuzz campaign definition, or a replay list of failing draws.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FuzzManifest {
    Campaign {
        family: Family,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        count: Option<usize>,
    },
    Replay { replay: Vec<CorpusSpec> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DrawStatus {
    Pass,
    Fail,
    Degenerate,
    NoContact,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DrawResult {
    pub spec: CorpusSpec,
    pub status: DrawStatus,
    pub rejections: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub reasons: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub analysis: Option<Analysis>,
}

/// Runs one corpus draw through the full pipeline. Errors become failures.
pub fn run_draw(spec: CorpusSpec, config: &SearchConfig) -> DrawResult {
    let failed = |reason: String| DrawResult {
        spec,
        status: DrawStatus::Fail,
        rejections: 0,
        reasons: vec![reason],
        analysis: None,
    };
    let generated = match spec.generate() {
        Ok(g) => g,
        Err(e) => return failed(format!("generation: {e}")),
    };
    let outcome = match generated.outcome.clone() {
        Some(o) if *config == SearchConfig::default() => o,
        _ => match first_contact(&generated.map, generated.alpha, config) {
            Ok(o) => o,
            Err(e) => return failed(format!("contact search: {e}")),
        },
    };
    let analysis = match analyze_outcome(&generated.map, generated.alpha, outcome, config) {
        Ok(a) => a,
        Err(e) => return failed(format!("verification: {e}")),
    };
    let (status, reasons) = match &analysis.outcome {
        ContactOutcome::NoContact { .. } => (DrawStatus::NoContact, vec![]),
        ContactOutcome::Degenerate { reason } => (DrawStatus::Degenerate, vec![reason.clone()]),
        ContactOutcome::Found { .. } if analysis.passed() => (DrawStatus::Pass, vec![]),
        ContactOutcome::Found { .. } => {
            let mut reasons = Vec::new();
            for check in &analysis.checks {
                if !check.interior_hypothesis {
                    reasons.push(format!("theta0 = {}: interior_hypothesis", check.contact.theta0));
                }
                for flag in check.report.checks.failures() {
                    reasons.push(format!("theta0 = {}: {flag}", check.contact.theta0));
                }
                if let Some(corollary) = check.report.corollary {
                    if !corollary.re_vanishes {
                        reasons.push(format!("theta0 = {}: corollary re_vanishes", check.contact.theta0));
                    }
                    if !corollary.k_magnitude {
                        reasons.push(format!("theta0 = {}: corollary k_magnitude", check.contact.theta0));
                    }
                }
            }
            (DrawStatus::Fail, reasons)
        }
    };
    DrawResult {
        spec,
        status,
        rejections: generated.rejections,
        reasons,
        analysis: Some(analysis),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzSummary {
    pub count: usize,
    pub passed: usize,
    pub failed: usize,
    pub degenerate: usize,
    pub no_contact: usize,
    pub contacts_checked: usize,
    pub rejections: u64,
    /// Minimum over verified contacts of `(k - bound) * sign(beta)`.
    pub min_bound_gap: Option<f64>,
    /// Failing draws, sorted by seed.
    pub failures: Vec<DrawResult>,
}

impl FuzzSummary {
    pub fn from_results(results: &[DrawResult]) -> Self {
        let count_of = |s: DrawStatus| results.iter().filter(|r| r.status == s).count();
        let gaps = results
            .iter()
            .filter_map(|r| r.analysis.as_ref())
            .flat_map(|a| a.checks.iter().map(|c| c.report.bound_gap()));
        let contacts_checked = results
            .iter()
            .filter_map(|r| r.analysis.as_ref())
            .map(|a| a.checks.len())
            .sum();
        let mut failures: Vec<DrawResult> = results
            .iter()
            .filter(|r| r.status == DrawStatus::Fail)
            .cloned()
            .collect();
        failures.sort_by_key(|r| r.spec.seed);
        Self {
            count: results.len(),
            passed: count_of(DrawStatus::Pass),
            failed: count_of(DrawStatus::Fail),
            degenerate: count_of(DrawStatus::Degenerate),
            no_contact: count_of(DrawStatus::NoContact),
            contacts_checked,
            rejections: results.iter().map(|r| r.rejections as u64).sum(),
            min_bound_gap: gaps.reduce(f64::min),
            failures,
        }
    }

    /// Manifest replaying exactly the failing draws.
    pub fn failure_manifest(&self) -> FuzzManifest {
        FuzzManifest::Replay {
            replay: self.failures.iter().map(|r| r.spec).collect(),
        }
    }
}

/// Expands a manifest into the draws to run. Campaign draw `i` uses seed
/// `seed + i`.
pub fn manifest_specs(manifest: &FuzzManifest, count: Option<usize>, seed: u64) -> Vec<CorpusSpec> {
    match manifest {
        FuzzManifest::Campaign {
            family,
            count: manifest_count,
        } => {
            let n = count.or(*manifest_count).unwrap_or(100);
            (0..n as u64)
                .map(|i| CorpusSpec {
                    family: *family,
                    seed: seed.wrapping_add(i),
                })
                .collect()
        }
        FuzzManifest::Replay { replay } => replay.clone(),
    }
}

/// Runs the draws on the rayon pool; results keep input order.
pub fn run_campaign(specs: &[CorpusSpec], config: &SearchConfig) -> Vec<DrawResult> {
    specs.par_iter().map(|&spec| run_draw(spec, config)).collect()
}
