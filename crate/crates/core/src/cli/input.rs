//! Function specifications accepted on the command line.

use std::path::Path;

use anyhow::{bail, Context};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::{AnalyticMap, HerglotzForm, HerglotzMixture};
use crate::corpus::CorpusSpec;
use crate::poly::Polynomial;
use crate::transforms::LevelParameter;

/// JSON function spec.
///
/// ```json
/// {"polynomial": [[1, 0], [1, 0], [0.5, 0]]}
/// {"herglotz": {"weights": [0.5, 0.5], "angles": [0.0, 3.0], "alpha": 0.25}}
/// {"corpus": {"family": {"kind": "paper_special"}, "seed": 0}}
/// ```
///
/// A bare coefficient array is accepted as a polynomial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FunctionSpec {
    Polynomial(Polynomial),
    Herglotz {
        weights: Vec<f64>,
        angles: Vec<f64>,
        alpha: LevelParameter,
    },
    Corpus(CorpusSpec),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum FunctionInput {
    Bare(Polynomial),
    Tagged(FunctionSpec),
}

/// A resolved function plus the level it naturally comes with, if any.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedFunction {
    pub map: AnalyticMap,
    pub natural_level: Option<LevelParameter>,
}

impl FunctionSpec {
    pub fn resolve(&self) -> anyhow::Result<ResolvedFunction> {
        match self {
            FunctionSpec::Polynomial(p) => Ok(ResolvedFunction {
                map: AnalyticMap::Polynomial(p.clone()),
                natural_level: None,
            }),
            FunctionSpec::Herglotz { weights, angles, alpha } => {
                let mixture = HerglotzMixture::new(weights.clone(), angles.clone())?;
                Ok(ResolvedFunction {
                    map: AnalyticMap::Herglotz(HerglotzForm::shifted(mixture, alpha.value())),
                    natural_level: Some(*alpha),
                })
            }
            FunctionSpec::Corpus(spec) => {
                let generated = spec.generate()?;
                Ok(ResolvedFunction {
                    map: generated.map,
                    natural_level: Some(generated.alpha),
                })
            }
        }
    }
}

/// Parses `"re,im;re,im;..."` in ascending degree. A term without `,im` is real.
pub fn parse_inline_coefficients(text: &str) -> anyhow::Result<Polynomial> {
    let mut coefficients = Vec::new();
    for (i, term) in text.split(';').enumerate() {
        let term = term.trim();
        if term.is_empty() {
            bail!("empty coefficient at position {i}");
        }
        let parts: Vec<&str> = term.split(',').map(str::trim).collect();
        let parse = |s: &str| -> anyhow::Result<f64> {
            s.parse::<f64>()
                .with_context(|| format!("coefficient {i}: cannot parse {s:?} as a number"))
        };
        let value = match parts[..] {
            [re] => Complex64::new(parse(re)?, 0.0),
            [re, im] => Complex64::new(parse(re)?, parse(im)?),
            _ => bail!("coefficient {i}: expected \"re\" or \"re,im\", got {term:?}"),
        };
        coefficients.push(value);
    }
    Ok(Polynomial::new(coefficients)?)
}

pub fn parse_function_json(text: &str) -> anyhow::Result<FunctionSpec> {
    let input: FunctionInput = serde_json::from_str(text).context("malformed function spec JSON")?;
    Ok(match input {
        FunctionInput::Bare(p) => FunctionSpec::Polynomial(p),
        FunctionInput::Tagged(spec) => spec,
    })
}

/// Interprets a `--function` argument: an existing file holding JSON, inline
/// JSON, or an inline coefficient list.
pub fn parse_function_arg(arg: &str) -> anyhow::Result<FunctionSpec> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        return parse_function_json(&text);
    }
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return parse_function_json(arg);
    }
    parse_inline_coefficients(arg).map(FunctionSpec::Polynomial)
}

/// Parses a point `"re,im"`.
pub fn parse_point(text: &str) -> anyhow::Result<Complex64> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [re, im] = parts[..] else {
        bail!("expected a point \"re,im\", got {text:?}");
    };
    let z = Complex64::new(re.parse()?, im.parse()?);
    if !z.re.is_finite() || !z.im.is_finite() {
        bail!("point must be finite");
    }
    Ok(z)
}
