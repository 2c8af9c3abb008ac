//! Images of circles `|z| = r` under a map, as CSV blocks or an SVG overlay.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::analytic::AnalyticMap;
use crate::error::{LemmaError, Result};

pub const CSV_HEADER: &str = "theta,re,im";

/// Samples of `p(r e^{i theta})`; the last sample repeats the first at
/// `theta = 2 pi` so the curve is closed.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleImage {
    pub radius: f64,
    pub thetas: Vec<f64>,
    pub values: Vec<Complex64>,
}

pub fn sample_circle_image(p: &AnalyticMap, radius: f64, samples: usize) -> Result<CircleImage> {
    if !(radius > 0.0 && radius <= 1.0) {
        return Err(LemmaError::InvalidParameter(format!("radius must lie in (0, 1], got {radius}")));
    }
    if samples == 0 {
        return Err(LemmaError::InvalidParameter("samples must be positive".into()));
    }
    let mut thetas = Vec::with_capacity(samples + 1);
    let mut values = Vec::with_capacity(samples + 1);
    for j in 0..samples {
        let theta = TAU * j as f64 / samples as f64;
        thetas.push(theta);
        values.push(p.eval_closed(Complex64::from_polar(radius, theta))?);
    }
    thetas.push(TAU);
    values.push(values[0]);
    Ok(CircleImage { radius, thetas, values })
}

/// One CSV block: header plus one LF-terminated row per sample.
pub fn to_csv(image: &CircleImage) -> String {
    let mut out = String::with_capacity(32 * image.values.len());
    out.push_str(CSV_HEADER);
    out.push('\n');
    for (theta, v) in image.thetas.iter().zip(&image.values) {
        let _ = writeln!(out, "{},{},{}", theta, v.re, v.im);
    }
    out
}

/// Parses one or more CSV blocks, each starting with the header line.
/// Blank lines between blocks are ignored.
pub fn parse_csv(text: &str) -> Result<Vec<Vec<(f64, Complex64)>>> {
    let mut blocks: Vec<Vec<(f64, Complex64)>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if line == CSV_HEADER {
            blocks.push(Vec::new());
            continue;
        }
        let Some(block) = blocks.last_mut() else {
            return Err(LemmaError::InvalidParameter(format!("line {}: data before header", lineno + 1)));
        };
        let fields: Vec<f64> = line
            .split(',')
            .map(|f| f.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| LemmaError::InvalidParameter(format!("line {}: {e}", lineno + 1)))?;
        let [theta, re, im] = fields[..] else {
            return Err(LemmaError::InvalidParameter(format!(
                "line {}: expected 3 fields, got {}",
                lineno + 1,
                fields.len()
            )));
        };
        block.push((theta, Complex64::new(re, im)));
    }
    Ok(blocks)
}

/// Geometry of an SVG figure: closed curves, marked points, and an optional
/// vertical level line `Re = alpha`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Scene {
    pub curves: Vec<Vec<Complex64>>,
    pub markers: Vec<Complex64>,
    pub level: Option<f64>,
}

const STROKES: [&str; 2] = ["#1f4e9c", "#c0392b"];

// Avoids "-0" in the output.
fn num(v: f64) -> f64 {
    v + 0.0
}

/// Renders the scene with a viewBox fitted to its bounding box plus a 5% margin.
/// The imaginary axis points up.
pub fn render_svg(scene: &Scene) -> String {
    let points = scene.curves.iter().flatten().chain(&scene.markers);
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for v in points {
        x0 = x0.min(v.re);
        x1 = x1.max(v.re);
        y0 = y0.min(-v.im);
        y1 = y1.max(-v.im);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (-0.5, 0.5, -0.5, 0.5);
    }
    if x1 - x0 <= 0.0 {
        x0 -= 0.5;
        x1 += 0.5;
    }
    if y1 - y0 <= 0.0 {
        y0 -= 0.5;
        y1 += 0.5;
    }
    let (mx, my) = (0.05 * (x1 - x0), 0.05 * (y1 - y0));
    let (vx, vy, vw, vh) = (x0 - mx, y0 - my, (x1 - x0) + 2.0 * mx, (y1 - y0) + 2.0 * my);
    let span = vw.max(vh);
    let stroke_width = 0.004 * span;
    let marker_radius = 0.01 * span;

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"640\" height=\"{}\" viewBox=\"{} {} {} {}\">",
        num((640.0 * vh / vw).round()),
        num(vx),
        num(vy),
        num(vw),
        num(vh)
    );
    let _ = writeln!(
        out,
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#ffffff\"/>",
        num(vx),
        num(vy),
        num(vw),
        num(vh)
    );
    if let Some(alpha) = scene.level {
        let _ = writeln!(
            out,
            "<line x1=\"{a}\" y1=\"{}\" x2=\"{a}\" y2=\"{}\" stroke=\"#7f7f7f\" stroke-width=\"{}\" stroke-dasharray=\"{} {}\"/>",
            num(vy),
            num(vy + vh),
            num(stroke_width),
            num(4.0 * stroke_width),
            num(2.0 * stroke_width),
            a = num(alpha)
        );
    }
    for (i, curve) in scene.curves.iter().enumerate() {
        let mut pts = String::with_capacity(24 * curve.len());
        for (j, v) in curve.iter().enumerate() {
            if j > 0 {
                pts.push(' ');
            }
            let _ = write!(pts, "{},{}", num(v.re), num(-v.im));
        }
        let _ = writeln!(
            out,
            "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"{}\" points=\"{}\"/>",
            STROKES[i % STROKES.len()],
            num(stroke_width),
            pts
        );
    }
    for m in &scene.markers {
        let _ = writeln!(
            out,
            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"#000000\"/>",
            num(m.re),
            num(-m.im),
            num(marker_radius)
        );
    }
    out.push_str("</svg>\n");
    out
}
