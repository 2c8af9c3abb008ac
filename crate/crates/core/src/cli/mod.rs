//! Command-line front end.
//!
//! Verbs: `analyze`, `contact`, `verify`, `fuzz`, `plot`. Exit codes:
//! 0 all checks pass, 1 malformed input, 2 a check failed, 3 no contact,
//! 4 degenerate contact.

pub mod input;
pub mod pipeline;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::AnalyticMap;
use crate::contact::{first_contact, BoundaryContact, ContactOutcome, SearchConfig};
use crate::plot::{parse_csv, render_svg, sample_circle_image, to_csv, Scene};
use crate::tolerances::Tolerances;
use crate::transforms::LevelParameter;

use input::{parse_function_arg, parse_point, FunctionSpec, ResolvedFunction};
use pipeline::{
    analyze, check_contact, manifest_specs, run_campaign, Analysis, ContactCheck, FuzzManifest, FuzzSummary,
    EXIT_DEGENERATE, EXIT_FLAG_FALSE, EXIT_INPUT, EXIT_NO_CONTACT, EXIT_OK,
};

#[derive(Debug, Parser)]
#[command(name = "nunokawa", version, about = "Locate first-contact points of Re p with a level and verify the Nunokawa-type lemma there")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Level alpha, 0 <= alpha < 1.
    #[arg(long, global = true)]
    alpha: Option<f64>,
    /// Residual tolerance |Re p(z0) - alpha| for accepting a contact.
    #[arg(long, global = true)]
    tol_contact: Option<f64>,
    /// Tolerance for the identity and inequality checks.
    #[arg(long, global = true)]
    tol_identity: Option<f64>,
    /// Angular samples per circle in the contact search (at least 64).
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Base seed for fuzz campaigns.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output path (plot output, or the failure manifest for fuzz).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Add a Unix timestamp to JSON output.
    #[arg(long, global = true)]
    stamp: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlotFormat {
    Svg,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Locate contacts, check the interior hypothesis and verify the lemma.
    Analyze {
        /// Coefficients "re,im;re,im;..." (ascending degree), inline JSON, or a JSON file.
        #[arg(long, short)]
        function: String,
    },
    /// Locate first-contact points only.
    Contact {
        #[arg(long, short)]
        function: String,
    },
    /// Verify the lemma at located contacts, or at a given point.
    Verify {
        #[arg(long, short)]
        function: String,
        /// Point "re,im" to check instead of searching.
        #[arg(long, allow_hyphen_values = true)]
        z0: Option<String>,
    },
    /// Run a corpus campaign or replay a failure manifest.
    Fuzz {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        count: Option<usize>,
    },
    /// Sample images of circles |z| = r and write SVG or CSV.
    Plot {
        #[arg(long, short)]
        function: Option<String>,
        /// Comma-separated radii in (0, 1].
        #[arg(long, value_delimiter = ',')]
        radii: Vec<f64>,
        #[arg(long, default_value_t = 1024)]
        samples_per_circle: usize,
        #[arg(long, value_enum, default_value_t = PlotFormat::Svg)]
        plot_format: PlotFormat,
        /// JSON plot spec file; replaces the options above.
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Re-plot curves from a CSV file written by this command.
        #[arg(long)]
        from_csv: Option<PathBuf>,
    },
}

/// Circle-image plot request.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotSpec {
    pub function: FunctionSpec,
    pub radii: Vec<f64>,
    #[serde(default = "default_samples_per_circle")]
    pub samples_per_circle: usize,
    #[serde(default = "default_plot_format")]
    pub output_format: PlotFormat,
    #[serde(default)]
    pub level_alpha: Option<f64>,
}

fn default_samples_per_circle() -> usize {
    1024
}

fn default_plot_format() -> PlotFormat {
    PlotFormat::Svg
}

impl PlotSpec {
    pub fn validate(&self) -> anyhow::Result<()> {
        if self.radii.is_empty() {
            bail!("at least one radius is required");
        }
        if self.radii.iter().any(|r| !(*r > 0.0 && *r <= 1.0)) {
            bail!("radii must lie in (0, 1]");
        }
        if self.radii.windows(2).any(|w| w[0] >= w[1]) {
            bail!("radii must be sorted ascending without repeats");
        }
        if self.samples_per_circle < 256 {
            bail!("samples_per_circle must be at least 256");
        }
        if let Some(a) = self.level_alpha {
            LevelParameter::new(a)?;
        }
        Ok(())
    }
}

/// Rendered plot output.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotOutput {
    pub text: String,
    pub scene: Scene,
}

fn contact_markers(map: &AnalyticMap, alpha: LevelParameter, config: &SearchConfig) -> Vec<Complex64> {
    match first_contact(map, alpha, config) {
        Ok(outcome) => outcome
            .contacts()
            .iter()
            .filter_map(|c| map.eval(c.z0).ok())
            .collect(),
        Err(_) => Vec::new(),
    }
}

/// Samples the circles of `spec` and renders SVG or CSV.
pub fn render_plot(spec: &PlotSpec, config: &SearchConfig) -> anyhow::Result<PlotOutput> {
    spec.validate()?;
    let ResolvedFunction { map, .. } = spec.function.resolve()?;
    let images = spec
        .radii
        .iter()
        .map(|&r| sample_circle_image(&map, r, spec.samples_per_circle))
        .collect::<crate::Result<Vec<_>>>()?;
    let markers = match spec.level_alpha {
        Some(a) => contact_markers(&map, LevelParameter::new(a)?, config),
        None => Vec::new(),
    };
    let scene = Scene {
        curves: images.iter().map(|i| i.values.clone()).collect(),
        markers,
        level: spec.level_alpha,
    };
    let text = match spec.output_format {
        PlotFormat::Svg => render_svg(&scene),
        PlotFormat::Csv => images.iter().map(to_csv).collect::<Vec<_>>().join("\n"),
    };
    Ok(PlotOutput { text, scene })
}

struct Session {
    cli: Cli,
    config: SearchConfig,
}

fn build_config(cli: &Cli) -> anyhow::Result<SearchConfig> {
    let mut tolerances = Tolerances::default();
    if let Some(t) = cli.tol_contact {
        if !(t > 0.0 && t.is_finite()) {
            bail!("--tol-contact must be positive");
        }
        tolerances.contact = t;
    }
    if let Some(t) = cli.tol_identity {
        if !(t > 0.0 && t.is_finite()) {
            bail!("--tol-identity must be positive");
        }
        tolerances.identity = t;
    }
    let mut config = SearchConfig {
        tolerances,
        ..SearchConfig::default()
    };
    if let Some(n) = cli.samples {
        if n < 64 {
            bail!("--samples must be at least 64");
        }
        config.samples = n;
    }
    Ok(config)
}

fn resolve_level(cli: &Cli, natural: Option<LevelParameter>) -> anyhow::Result<LevelParameter> {
    match (cli.alpha, natural) {
        (Some(a), _) => Ok(LevelParameter::new(a)?),
        (None, Some(level)) => Ok(level),
        (None, None) => Err(anyhow!("--alpha is required for this function")),
    }
}

fn timestamp() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

fn emit_json<T: Serialize>(out: &mut dyn Write, value: &T, stamp: bool) -> anyhow::Result<()> {
    let mut json = serde_json::to_value(value)?;
    if stamp {
        if let Some(obj) = json.as_object_mut() {
            obj.insert("timestamp".into(), timestamp().into());
        }
    }
    writeln!(out, "{}", serde_json::to_string_pretty(&json)?)?;
    Ok(())
}

#[derive(Serialize)]
struct AnalysisOutput<'a> {
    #[serde(flatten)]
    analysis: &'a Analysis,
    passed: bool,
    exit_code: u8,
}

fn write_contact_text(out: &mut dyn Write, outcome: &ContactOutcome) -> anyhow::Result<()> {
    match outcome {
        ContactOutcome::Found { contacts } => {
            writeln!(out, "found {} contact(s)", contacts.len())?;
            for c in contacts {
                writeln!(
                    out,
                    "  z0 = {} {:+}i  r* = {}  theta0 = {}  beta = {}  residual = {:e}",
                    c.z0.re, c.z0.im, c.r_star, c.theta0, c.beta, c.residual
                )?;
            }
        }
        ContactOutcome::NoContact { min_real_margin } => {
            writeln!(out, "no contact (margin min Re p - alpha = {min_real_margin})")?;
        }
        ContactOutcome::Degenerate { reason } => writeln!(out, "degenerate: {reason}")?,
    }
    Ok(())
}

fn write_check_text(out: &mut dyn Write, check: &ContactCheck) -> anyhow::Result<()> {
    let r = &check.report;
    writeln!(out, "contact z0 = {} {:+}i", r.z0.re, r.z0.im)?;
    writeln!(out, "  interior hypothesis: {}", check.interior_hypothesis)?;
    writeln!(out, "  k = {}  m = {}  bound = {}", r.k, r.m, r.bound)?;
    writeln!(
        out,
        "  z0 p'/p = {} {:+}i  predicted = {} {:+}i",
        r.logderiv.re, r.logderiv.im, r.re_predicted, r.im_predicted
    )?;
    let failures = r.checks.failures();
    if failures.is_empty() {
        writeln!(out, "  checks: all pass")?;
    } else {
        writeln!(out, "  checks failed: {}", failures.join(", "))?;
    }
    if let Some(c) = r.corollary {
        writeln!(out, "  corollary: re_vanishes = {}  k_magnitude = {}", c.re_vanishes, c.k_magnitude)?;
    }
    Ok(())
}

fn emit_analysis(ctx: &Session, out: &mut dyn Write, analysis: &Analysis) -> anyhow::Result<u8> {
    let code = analysis.exit_code();
    match ctx.cli.format {
        Format::Json => emit_json(
            out,
            &AnalysisOutput {
                analysis,
                passed: code == EXIT_OK,
                exit_code: code,
            },
            ctx.cli.stamp,
        )?,
        Format::Text => {
            writeln!(out, "alpha = {}", analysis.alpha.value())?;
            write_contact_text(out, &analysis.outcome)?;
            for check in &analysis.checks {
                write_check_text(out, check)?;
            }
            writeln!(out, "exit {code}")?;
        }
    }
    Ok(code)
}

fn load_function(arg: &str) -> anyhow::Result<ResolvedFunction> {
    parse_function_arg(arg)?.resolve()
}

fn cmd_analyze(ctx: &Session, out: &mut dyn Write, function: &str) -> anyhow::Result<u8> {
    let f = load_function(function)?;
    let alpha = resolve_level(&ctx.cli, f.natural_level)?;
    let analysis = analyze(&f.map, alpha, &ctx.config)?;
    emit_analysis(ctx, out, &analysis)
}

fn cmd_contact(ctx: &Session, out: &mut dyn Write, function: &str) -> anyhow::Result<u8> {
    let f = load_function(function)?;
    let alpha = resolve_level(&ctx.cli, f.natural_level)?;
    let outcome = first_contact(&f.map, alpha, &ctx.config)?;
    match ctx.cli.format {
        Format::Json => emit_json(out, &outcome, ctx.cli.stamp)?,
        Format::Text => write_contact_text(out, &outcome)?,
    }
    Ok(match outcome {
        ContactOutcome::Found { .. } => EXIT_OK,
        ContactOutcome::NoContact { .. } => EXIT_NO_CONTACT,
        ContactOutcome::Degenerate { .. } => EXIT_DEGENERATE,
    })
}

fn cmd_verify(ctx: &Session, out: &mut dyn Write, function: &str, z0: Option<&str>) -> anyhow::Result<u8> {
    let f = load_function(function)?;
    let alpha = resolve_level(&ctx.cli, f.natural_level)?;
    let Some(z0) = z0 else {
        let analysis = analyze(&f.map, alpha, &ctx.config)?;
        return emit_analysis(ctx, out, &analysis);
    };
    let z0 = parse_point(z0)?;
    let contact = BoundaryContact::at_point(&f.map, alpha, z0)?;
    let check = check_contact(&f.map, alpha, &contact, &ctx.config)?;
    let code = if check.passed() { EXIT_OK } else { EXIT_FLAG_FALSE };
    match ctx.cli.format {
        Format::Json => emit_json(out, &check, ctx.cli.stamp)?,
        Format::Text => {
            write_check_text(out, &check)?;
            writeln!(out, "exit {code}")?;
        }
    }
    Ok(code)
}

fn cmd_fuzz(ctx: &Session, out: &mut dyn Write, manifest: &Path, count: Option<usize>) -> anyhow::Result<u8> {
    let text = std::fs::read_to_string(manifest).with_context(|| format!("reading {}", manifest.display()))?;
    let manifest: FuzzManifest = serde_json::from_str(&text).context("malformed fuzz manifest")?;
    let specs = manifest_specs(&manifest, count, ctx.cli.seed);
    let results = run_campaign(&specs, &ctx.config);
    let summary = FuzzSummary::from_results(&results);
    if let Some(path) = &ctx.cli.out {
        if summary.failed > 0 {
            let json = serde_json::to_string_pretty(&summary.failure_manifest())?;
            std::fs::write(path, json + "\n").with_context(|| format!("writing {}", path.display()))?;
        }
    }
    match ctx.cli.format {
        Format::Json => emit_json(out, &summary, ctx.cli.stamp)?,
        Format::Text => {
            writeln!(
                out,
                "draws {}  pass {}  fail {}  degenerate {}  no-contact {}",
                summary.count, summary.passed, summary.failed, summary.degenerate, summary.no_contact
            )?;
            writeln!(out, "contacts checked {}  rejections {}", summary.contacts_checked, summary.rejections)?;
            match summary.min_bound_gap {
                Some(g) => writeln!(out, "min (k - bound) * sign(beta) = {g}")?,
                None => writeln!(out, "min (k - bound) * sign(beta) = n/a")?,
            }
            for f in &summary.failures {
                writeln!(out, "FAIL seed {}: {}", f.spec.seed, f.reasons.join("; "))?;
            }
        }
    }
    Ok(if summary.failed == 0 { EXIT_OK } else { EXIT_FLAG_FALSE })
}

#[allow(clippy::too_many_arguments)]
fn cmd_plot(
    ctx: &Session,
    out: &mut dyn Write,
    function: Option<&str>,
    radii: &[f64],
    samples_per_circle: usize,
    plot_format: PlotFormat,
    spec_path: Option<&Path>,
    from_csv: Option<&Path>,
) -> anyhow::Result<u8> {
    let text = if let Some(csv_path) = from_csv {
        let csv = std::fs::read_to_string(csv_path).with_context(|| format!("reading {}", csv_path.display()))?;
        let curves: Vec<Vec<Complex64>> = parse_csv(&csv)?
            .into_iter()
            .map(|block| block.into_iter().map(|(_, v)| v).collect())
            .collect();
        let markers = match (function, ctx.cli.alpha) {
            (Some(f), Some(a)) => contact_markers(&load_function(f)?.map, LevelParameter::new(a)?, &ctx.config),
            _ => Vec::new(),
        };
        render_svg(&Scene {
            curves,
            markers,
            level: ctx.cli.alpha,
        })
    } else {
        let spec = match spec_path {
            Some(path) => {
                let json = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                serde_json::from_str::<PlotSpec>(&json).context("malformed plot spec")?
            }
            None => PlotSpec {
                function: parse_function_arg(function.ok_or_else(|| anyhow!("--function is required"))?)?,
                radii: radii.to_vec(),
                samples_per_circle,
                output_format: plot_format,
                level_alpha: ctx.cli.alpha,
            },
        };
        render_plot(&spec, &ctx.config)?.text
    };
    match &ctx.cli.out {
        Some(path) => std::fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(EXIT_OK)
}

fn dispatch(ctx: &Session, out: &mut dyn Write) -> anyhow::Result<u8> {
    match &ctx.cli.command {
        Command::Analyze { function } => cmd_analyze(ctx, out, function),
        Command::Contact { function } => cmd_contact(ctx, out, function),
        Command::Verify { function, z0 } => cmd_verify(ctx, out, function, z0.as_deref()),
        Command::Fuzz { manifest, count } => cmd_fuzz(ctx, out, manifest, *count),
        Command::Plot {
            function,
            radii,
            samples_per_circle,
            plot_format,
            spec,
            from_csv,
        } => cmd_plot(
            ctx,
            out,
            function.as_deref(),
            radii,
            *samples_per_circle,
            *plot_format,
            spec.as_deref(),
            from_csv.as_deref(),
        ),
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INPUT,
            };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let config = match build_config(&cli) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            return EXIT_INPUT;
        }
    };
    let ctx = Session { cli, config };
    match dispatch(&ctx, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_INPUT
        }
    }
}
