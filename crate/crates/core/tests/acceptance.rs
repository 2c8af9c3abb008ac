//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.
//!
//! Run with `cargo test --test acceptance`. Set `UPDATE_GOLDEN=1` to rewrite
//! the SVG golden file.

// Negated comparisons make NaN count as a failure.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use nunokawa::cli::pipeline::{run_draw, DrawStatus};
use nunokawa::cli::input::FunctionSpec;
use nunokawa::cli::{render_plot, PlotFormat, PlotSpec};
use nunokawa::contact::{first_contact, min_real_on_circle};
use nunokawa::corpus::{paper_example, paper_special, CorpusSpec, Family};
use nunokawa::lemma::{jack_m, nunokawa_k, verify_theorem};
use nunokawa::plot::parse_csv;
use nunokawa::tolerances::DEFAULT_ANGULAR_SAMPLES;
use nunokawa::transforms::{cayley_at, normalize};
use nunokawa::{AnalyticMap, Complex64, ContactOutcome, ContactValue, LevelParameter, Polynomial, SearchConfig, Tolerances};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Tolerances and limits, one block per criterion.
const C1_RADIUS: f64 = 1e-9;
const C1_CONTACT: f64 = 1e-8;
const C1_LOGDERIV: f64 = 1e-9;
const C1_K: f64 = 1e-8;
const C1_BUDGET: Duration = Duration::from_secs(1);

const C2_GRID: usize = 50;
const C2_ALPHA_MAX: f64 = 0.98;
const C2_K: f64 = 1e-8;
const C2_LOGDERIV: f64 = 1e-9;
const C2_BUDGET: Duration = Duration::from_secs(5);

const C3_M: f64 = 1e-8;
const C3_FD_STEP: f64 = 1e-5;
const C3_FD: f64 = 1e-7;
const C3_BUDGET: Duration = Duration::from_secs(1);

const C4_MIN_DRAWS: usize = 1000;
const C4_DEGREES: std::ops::RangeInclusive<usize> = 2..=8;
const C4_ALPHAS: [f64; 3] = [0.0, 0.3, 0.6];
const C4_TOL: f64 = 1e-8;
const C4_BUDGET: Duration = Duration::from_secs(60);

const C5_TOL: f64 = 1e-8;

const C6_DRAWS: u64 = 100;
const C6_BUDGET: Duration = Duration::from_secs(30);

const C7_POLYS: u64 = 100;
const C7_RADIUS: f64 = 0.6;
const C7_GRID: usize = 1_000_000;
const C7_VALUE: f64 = 1e-9;
const C7_ANGLE: f64 = 1e-6;
const C7_BUDGET: Duration = Duration::from_secs(60);

const C8_MIN_RE: f64 = 1e-8;
const C8_MIN_IM: f64 = 1e-6;
const C8_BUDGET: Duration = Duration::from_secs(1);
// Rows within rounding of the minimum count as attaining it.
const C8_TIE: f64 = 1e-12;

// Frozen values. `M_EXAMPLE` is k / bound = 2 / (5/4).
const K_EXAMPLE: f64 = 2.0;
const BOUND_EXAMPLE: f64 = 1.25;
const M_EXAMPLE: f64 = 1.6;

struct Verdict {
    pass: bool,
    detail: String,
}

fn level(a: f64) -> LevelParameter {
    LevelParameter::new(a).expect("valid level")
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn within_budget(pass: bool, elapsed: Duration, budget: Duration, detail: String) -> Verdict {
    let on_time = elapsed < budget;
    Verdict {
        pass: pass && on_time,
        detail: format!("{detail}; {:.3}s of {}s budget", elapsed.as_secs_f64(), budget.as_secs()),
    }
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let tol = Tolerances::default();
    let alpha = level(0.5);
    let p = paper_special();
    let outcome = first_contact(&p, alpha, &SearchConfig::default()).expect("search runs");
    let contacts = outcome.contacts();
    let mut errors = Vec::new();
    if contacts.len() != 2 {
        errors.push(format!("expected 2 contacts, got {outcome:?}"));
    }
    let mut worst = [0.0f64; 4];
    for contact in contacts {
        let sign = contact.beta.signum();
        let expected_z0 = c(-0.5, 0.5 * sign);
        worst[0] = worst[0].max((contact.r_star - FRAC_1_SQRT_2).abs());
        worst[1] = worst[1].max((contact.z0 - expected_z0).norm());
        let logderiv = p.log_derivative_at(contact.z0, tol.zero).expect("log derivative");
        worst[2] = worst[2].max((logderiv - c(-0.8, 0.4 * sign)).norm());
        let k = nunokawa_k(&p, alpha, contact.z0, &tol).expect("k").k;
        worst[3] = worst[3].max((k - K_EXAMPLE * sign).abs());
        let report = verify_theorem(&p, alpha, contact, &tol).expect("report");
        if !report.passed() {
            errors.push(format!("flags failed at theta0 = {}: {:?}", contact.theta0, report.checks.failures()));
        }
    }
    for (name, value, limit) in [
        ("r*", worst[0], C1_RADIUS),
        ("z0", worst[1], C1_CONTACT),
        ("logderiv", worst[2], C1_LOGDERIV),
        ("k", worst[3], C1_K),
    ] {
        if !(value <= limit) {
            errors.push(format!("{name} error {value:e} > {limit:e}"));
        }
    }
    for sign in [1.0, -1.0] {
        let bound = ContactValue::new(alpha, 0.25 * sign).expect("contact value").k_bound();
        if bound != BOUND_EXAMPLE * sign {
            errors.push(format!("bound {bound} != {}", BOUND_EXAMPLE * sign));
        }
    }
    let detail = if errors.is_empty() {
        format!(
            "max errors r* {:.1e}, z0 {:.1e}, logderiv {:.1e}, k {:.1e}",
            worst[0], worst[1], worst[2], worst[3]
        )
    } else {
        errors.join("; ")
    };
    within_budget(errors.is_empty(), start.elapsed(), C1_BUDGET, detail)
}

fn alpha_grid() -> impl Iterator<Item = f64> {
    (0..C2_GRID).map(|i| C2_ALPHA_MAX * i as f64 / (C2_GRID - 1) as f64)
}

fn criterion_2() -> Verdict {
    let start = Instant::now();
    let tol = Tolerances::default();
    let z0 = c(-0.5, 0.5);
    let mut worst_k = 0.0f64;
    let mut worst_logderiv = 0.0f64;
    let mut bound_ok = true;
    for a in alpha_grid() {
        let alpha = level(a);
        let p = paper_example(alpha);
        let k = nunokawa_k(&p, alpha, z0, &tol).expect("k").k;
        worst_k = worst_k.max((k - K_EXAMPLE).abs());
        let beta = p.eval(z0).expect("eval").im;
        let bound = ContactValue::new(alpha, beta).expect("contact value").k_bound();
        bound_ok &= (bound - BOUND_EXAMPLE).abs() <= C2_K;
        let s = 1.0 - a;
        let denom = 4.0 * a * a + s * s;
        let expected = c(-4.0 * a * s / denom, 2.0 * s * s / denom);
        let logderiv = p.log_derivative_at(z0, tol.zero).expect("log derivative");
        worst_logderiv = worst_logderiv.max((logderiv - expected).norm());
    }
    let pass = worst_k <= C2_K && worst_logderiv <= C2_LOGDERIV && bound_ok;
    let detail = format!(
        "{C2_GRID} levels, max |k - 2| {worst_k:.1e}, max logderiv error {worst_logderiv:.1e}, bound 5/4 at every level: {bound_ok}"
    );
    within_budget(pass, start.elapsed(), C2_BUDGET, detail)
}

/// `m = z0 w'(z0) / w(z0)` by central differences of `w = (1 - q) / (1 + q)`,
/// where `q` is evaluated by a monomial sum rather than the library.
fn finite_difference_m(coefficients: &[Complex64], z0: Complex64) -> f64 {
    let q = |z: Complex64| coefficients.iter().rev().fold(c(0.0, 0.0), |acc, a| acc * z + a);
    let w = |z: Complex64| (1.0 - q(z)) / (1.0 + q(z));
    let h = C3_FD_STEP;
    let dw = (w(z0 + h) - w(z0 - h)) / (2.0 * h);
    (z0 * dw / w(z0)).re
}

fn criterion_3() -> Verdict {
    let start = Instant::now();
    let tol = Tolerances::default();
    let z0 = c(-0.5, 0.5);
    let mut worst = 0.0f64;
    let mut worst_fd = 0.0f64;
    for a in alpha_grid() {
        let alpha = level(a);
        let q = normalize(&paper_example(alpha), alpha).expect("normalize");
        let m = jack_m(&q, z0, &tol).expect("m");
        worst = worst.max((m - M_EXAMPLE).abs());
        let coefficients = q.as_polynomial().expect("polynomial").coefficients().to_vec();
        worst_fd = worst_fd.max((finite_difference_m(&coefficients, z0) - M_EXAMPLE).abs());
    }
    let pass = worst <= C3_M && worst_fd <= C3_FD;
    let detail = format!("max |m - 8/5| {worst:.1e}, finite-difference oracle error {worst_fd:.1e}");
    within_budget(pass, start.elapsed(), C3_BUDGET, detail)
}

#[derive(Default)]
struct IdentityTally {
    draws: usize,
    verified: usize,
    degenerate: usize,
    corollary_contacts: usize,
    violations: Vec<String>,
    corollary_violations: Vec<String>,
}

/// Recomputes every identity of criterion 4 from raw evaluations of `p`.
fn check_identities(p: &AnalyticMap, alpha: f64, z0: Complex64, tally: &mut IdentityTally, label: &str) {
    let value = p.eval(z0).expect("eval");
    let derivative = p.derivative_at(z0).expect("derivative");
    let beta = value.im;
    let s = 1.0 - alpha;
    let zp = z0 * derivative;

    let q = normalize(p, level(alpha)).expect("normalize");
    let w_modulus = cayley_at(&q, z0).expect("cayley").norm();
    let shifted = zp / (value - alpha);
    let k = shifted.im;
    let m = jack_m(&q, z0, &Tolerances::default()).unwrap_or(f64::NAN);
    let bound = 0.5 * (beta / s + s / beta);
    let logderiv = zp / value;
    let sign_ok = if beta > 0.0 { k >= bound - C4_TOL } else { k <= bound + C4_TOL };

    let mut fail = |what: String| tally.violations.push(format!("{label}: {what}"));
    if !((w_modulus - 1.0).abs() <= C4_TOL) {
        fail(format!("|w(z0)| = {w_modulus}"));
    }
    if !(shifted.re.abs() <= C4_TOL) {
        fail(format!("Re(z0 p'/(p - alpha)) = {:e}", shifted.re));
    }
    if !(m >= 1.0 - C4_TOL) {
        fail(format!("m = {m}"));
    }
    if !((k - m * bound).abs() <= C4_TOL * k.abs()) {
        fail(format!("k = {k}, m bound = {}", m * bound));
    }
    if !sign_ok {
        fail(format!("k = {k} vs bound {bound} at beta {beta}"));
    }
    if !(logderiv.re <= C4_TOL) {
        fail(format!("Re(z0 p'/p) = {:e}", logderiv.re));
    }
    if alpha == 0.0 {
        tally.corollary_contacts += 1;
        if !(logderiv.re.abs() <= C5_TOL) {
            tally.corollary_violations.push(format!("{label}: |Re(z0 p'/p)| = {:e}", logderiv.re.abs()));
        }
        if !(k.abs() >= 1.0 - C5_TOL) {
            tally.corollary_violations.push(format!("{label}: |k| = {}", k.abs()));
        }
    }
}

fn identity_campaign() -> (IdentityTally, Duration) {
    let start = Instant::now();
    let config = SearchConfig::default();
    let combos = C4_DEGREES.count() * C4_ALPHAS.len();
    let per_combo = C4_MIN_DRAWS.div_ceil(combos) as u64;
    let mut tally = IdentityTally::default();
    for degree in C4_DEGREES {
        for alpha in C4_ALPHAS {
            for seed in 0..per_combo {
                let spec = CorpusSpec {
                    family: Family::RandomPolynomial {
                        degree,
                        alpha: level(alpha),
                        real_coefficients: false,
                    },
                    seed,
                };
                let label = format!("degree {degree} alpha {alpha} seed {seed}");
                tally.draws += 1;
                let result = run_draw(spec, &config);
                match result.status {
                    DrawStatus::Degenerate => {
                        tally.degenerate += 1;
                        continue;
                    }
                    DrawStatus::Pass => {}
                    status => {
                        tally.violations.push(format!("{label}: status {status:?} {:?}", result.reasons));
                        continue;
                    }
                }
                tally.verified += 1;
                let map = spec.generate().expect("regenerates").map;
                let analysis = result.analysis.expect("analysis present");
                for check in &analysis.checks {
                    check_identities(&map, alpha, check.contact.z0, &mut tally, &label);
                }
            }
        }
    }
    (tally, start.elapsed())
}

fn criterion_4(tally: &IdentityTally, elapsed: Duration) -> Verdict {
    let pass = tally.violations.is_empty() && tally.draws >= C4_MIN_DRAWS && tally.verified >= C4_MIN_DRAWS * 9 / 10;
    let mut detail = format!(
        "{} draws, {} verified, {} degenerate excluded, {} violations",
        tally.draws,
        tally.verified,
        tally.degenerate,
        tally.violations.len()
    );
    if let Some(first) = tally.violations.first() {
        detail.push_str(&format!("; first: {first}"));
    }
    within_budget(pass, elapsed, C4_BUDGET, detail)
}

fn criterion_5(tally: &IdentityTally) -> Verdict {
    let mut detail = format!(
        "{} contacts at alpha = 0, {} violations",
        tally.corollary_contacts,
        tally.corollary_violations.len()
    );
    if let Some(first) = tally.corollary_violations.first() {
        detail.push_str(&format!("; first: {first}"));
    }
    Verdict {
        pass: tally.corollary_contacts > 0 && tally.corollary_violations.is_empty(),
        detail,
    }
}

fn criterion_6() -> Verdict {
    let start = Instant::now();
    let config = SearchConfig::default();
    let mut no_contact = 0;
    let mut others = Vec::new();
    for seed in 0..C6_DRAWS {
        let n_atoms = 1 + (seed % 8) as usize;
        let alpha = level(0.1 * (seed % 10) as f64);
        let spec = CorpusSpec {
            family: Family::HerglotzShift { n_atoms, alpha },
            seed,
        };
        let generated = spec.generate().expect("herglotz draw");
        match first_contact(&generated.map, generated.alpha, &config).expect("search runs") {
            ContactOutcome::NoContact { .. } => no_contact += 1,
            other => others.push(format!("seed {seed}: {other:?}")),
        }
    }
    let mut detail = format!("{no_contact}/{C6_DRAWS} NoContact");
    if let Some(first) = others.first() {
        detail.push_str(&format!("; first: {first}"));
    }
    within_budget(others.is_empty(), start.elapsed(), C6_BUDGET, detail)
}

/// Grid minima of `Re p` on `|z| = r`: every local minimum of the sampled
/// values, refined by a parabola through the three neighbouring samples.
fn grid_minima(coefficients: &[Complex64], r: f64, n: usize) -> Vec<(f64, f64)> {
    let re_at = |theta: f64| {
        let z = Complex64::from_polar(r, theta);
        let mut power = c(1.0, 0.0);
        let mut sum = c(0.0, 0.0);
        for a in coefficients {
            sum += a * power;
            power *= z;
        }
        sum.re
    };
    let h = TAU / n as f64;
    let values: Vec<f64> = (0..n).map(|j| re_at(h * j as f64)).collect();
    let mut minima = Vec::new();
    for j in 0..n {
        let (left, mid, right) = (values[(j + n - 1) % n], values[j], values[(j + 1) % n]);
        if mid < left && mid <= right {
            let curvature = left - 2.0 * mid + right;
            let offset = if curvature > 0.0 { 0.5 * (left - right) / curvature } else { 0.0 };
            let theta = (h * (j as f64 + offset)).rem_euclid(TAU);
            minima.push((theta, re_at(theta).min(mid)));
        }
    }
    minima
}

fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

fn criterion_7() -> Verdict {
    let start = Instant::now();
    let mut worst_value = 0.0f64;
    let mut worst_angle = 0.0f64;
    let mut failures = Vec::new();
    for seed in 0..C7_POLYS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let degree = rng.random_range(1..=12usize);
        let mut coefficients = vec![c(1.0, 0.0)];
        for _ in 0..degree {
            coefficients.push(c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        }
        let p = AnalyticMap::Polynomial(Polynomial::new(coefficients.clone()).expect("finite"));
        let found = min_real_on_circle(&p, C7_RADIUS, DEFAULT_ANGULAR_SAMPLES).expect("minimum");
        let minima = grid_minima(&coefficients, C7_RADIUS, C7_GRID);
        let oracle = minima.iter().map(|m| m.1).fold(f64::INFINITY, f64::min);
        let value_error = (found.value - oracle).abs();
        // Symmetric minima: any grid minimum tying the global one is acceptable.
        let angle_error = minima
            .iter()
            .filter(|m| m.1 - oracle <= C7_VALUE)
            .map(|m| circular_distance(m.0, found.theta))
            .fold(f64::INFINITY, f64::min);
        worst_value = worst_value.max(value_error);
        worst_angle = worst_angle.max(angle_error);
        if !(value_error <= C7_VALUE && angle_error <= C7_ANGLE) {
            failures.push(format!("seed {seed}: value error {value_error:e}, angle error {angle_error:e}"));
        }
    }
    let mut detail = format!(
        "{C7_POLYS} polynomials, max value error {worst_value:.1e}, max angle error {worst_angle:.1e}"
    );
    if let Some(first) = failures.first() {
        detail.push_str(&format!("; first: {first}"));
    }
    within_budget(failures.is_empty(), start.elapsed(), C7_BUDGET, detail)
}

fn circle_plot_spec(output_format: PlotFormat) -> PlotSpec {
    PlotSpec {
        function: FunctionSpec::Polynomial(Polynomial::from_real(&[1.0, 1.0, 0.5]).expect("finite")),
        radii: vec![FRAC_1_SQRT_2, 1.0],
        samples_per_circle: 1024,
        output_format,
        level_alpha: Some(0.5),
    }
}

fn golden_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/circle_images.svg")
}

fn criterion_8() -> Verdict {
    let start = Instant::now();
    let config = SearchConfig::default();
    let mut errors = Vec::new();

    let csv = render_plot(&circle_plot_spec(PlotFormat::Csv), &config).expect("csv plot").text;
    let blocks = parse_csv(&csv).expect("csv parses");
    let (mut min_error, mut im_error) = (f64::INFINITY, f64::INFINITY);
    if blocks.len() != 2 {
        errors.push(format!("expected 2 CSV blocks, got {}", blocks.len()));
    } else {
        let inner = &blocks[0];
        let min_re = inner.iter().map(|row| row.1.re).fold(f64::INFINITY, f64::min);
        min_error = (min_re - 0.5).abs();
        let at_min: Vec<f64> = inner.iter().filter(|row| row.1.re - min_re <= C8_TIE).map(|row| row.1.im).collect();
        im_error = at_min.iter().map(|im| (im.abs() - 0.25).abs()).fold(0.0, f64::max);
        let has_both = at_min.iter().any(|im| *im > 0.0) && at_min.iter().any(|im| *im < 0.0);
        if !(min_error <= C8_MIN_RE) {
            errors.push(format!("inner minimum of re is {min_re}"));
        }
        if !(im_error <= C8_MIN_IM) {
            errors.push(format!("im at minimum {at_min:?}"));
        }
        if !has_both {
            let angles: Vec<f64> = inner.iter().filter(|row| row.1.re - min_re <= C8_TIE).map(|row| row.0 / PI).collect();
            errors.push(format!("minimum not attained at both conjugate points, theta/pi {angles:?}"));
        }
    }

    let svg = render_plot(&circle_plot_spec(PlotFormat::Svg), &config).expect("svg plot").text;
    let again = render_plot(&circle_plot_spec(PlotFormat::Svg), &config).expect("svg plot").text;
    if svg != again {
        errors.push("SVG output differs between runs".into());
    }
    let path = golden_path();
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &svg).expect("write golden");
    }
    match std::fs::read_to_string(&path) {
        Ok(golden) if golden == svg => {}
        Ok(_) => errors.push(format!("SVG differs from {}", path.display())),
        Err(e) => errors.push(format!("cannot read {}: {e}", path.display())),
    }
    let detail = if errors.is_empty() {
        format!("inner min re error {min_error:.1e}, im error {im_error:.1e}, SVG matches golden ({} bytes)", svg.len())
    } else {
        errors.join("; ")
    };
    within_budget(errors.is_empty(), start.elapsed(), C8_BUDGET, detail)
}

fn main() -> ExitCode {
    let mut verdicts: Vec<(&str, Verdict)> = vec![
        ("1 special case of the example", criterion_1()),
        ("2 example family over the level grid", criterion_2()),
        ("3 Jack quantity m = 8/5", criterion_3()),
    ];
    let (tally, elapsed) = identity_campaign();
    verdicts.push(("4 identity property suite", criterion_4(&tally, elapsed)));
    verdicts.push(("5 corollary suite", criterion_5(&tally)));
    verdicts.push(("6 negative control", criterion_6()));
    verdicts.push(("7 contact-search oracle", criterion_7()));
    verdicts.push(("8 circle-image regression", criterion_8()));

    let mut failed = 0;
    for (name, verdict) in &verdicts {
        let status = if verdict.pass { "PASS" } else { "FAIL" };
        println!("[{status}] criterion {name}: {}", verdict.detail);
        failed += usize::from(!verdict.pass);
    }
    println!("acceptance: {} passed, {failed} failed", verdicts.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
