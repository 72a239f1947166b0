//! Self-contained SVG figures. Each marker carries its exact data values as
//! `data-*` attributes, formatted like the CSV files.

use std::fmt::Write;

use polygen_core::Complex64;

use crate::output::{format_float, Part, Presented};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 48.0;
const PALETTE: [&str; 6] = ["#1f4e9e", "#c0392b", "#2e8b57", "#8e44ad", "#d35400", "#34495e"];

/// Axis-aligned data range mapped onto a panel.
struct Frame {
    x: (f64, f64),
    y: (f64, f64),
    top: f64,
}

impl Frame {
    fn new(xs: impl Iterator<Item = f64>, ys: impl Iterator<Item = f64>, top: f64) -> Self {
        Frame {
            x: padded_range(xs),
            y: padded_range(ys),
            top,
        }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        self.top + HEIGHT - MARGIN - (y - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - 2.0 * MARGIN)
    }
}

fn padded_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        return (-1.0, 1.0);
    }
    let pad = if hi > lo { 0.05 * (hi - lo) } else { 1.0 };
    (lo - pad, hi + pad)
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Dot for component 1, star for component 2, then squares, triangles,
/// diamonds.
fn marker(out: &mut String, component: usize, cx: f64, cy: f64, attrs: &str) {
    let color = PALETTE[component % PALETTE.len()];
    match component {
        0 => {
            let _ = writeln!(out, r#"<circle class="marker x1" cx="{cx:.2}" cy="{cy:.2}" r="3" fill="{color}" {attrs}/>"#);
        }
        1 => {
            let pts: Vec<String> = (0..10)
                .map(|k| {
                    let r = if k % 2 == 0 { 6.0 } else { 2.5 };
                    let t = std::f64::consts::PI * (k as f64 / 5.0 - 0.5);
                    format!("{:.2},{:.2}", cx + r * t.cos(), cy + r * t.sin())
                })
                .collect();
            let _ = writeln!(out, r#"<polygon class="marker x2" points="{}" fill="{color}" {attrs}/>"#, pts.join(" "));
        }
        n => {
            let shape = match n % 3 {
                2 => format!("M{:.2},{:.2}h6v6h-6z", cx - 3.0, cy - 3.0),
                0 => format!("M{cx:.2},{:.2}l4,7h-8z", cy - 4.0),
                _ => format!("M{cx:.2},{:.2}l4,4l-4,4l-4,-4z", cy - 4.0),
            };
            let _ = writeln!(out, r#"<path class="marker x{}" d="{shape}" fill="{color}" {attrs}/>"#, n + 1);
        }
    }
}

fn data_attrs(ell: usize, component: usize, z: Complex64) -> String {
    format!(
        r#"data-ell="{ell}" data-component="{}" data-re="{}" data-im="{}""#,
        component + 1,
        format_float(z.re),
        format_float(z.im)
    )
}

fn axes(out: &mut String, frame: &Frame, x_label: &str, y_label: &str) {
    let (left, right) = (MARGIN, WIDTH - MARGIN);
    let (top, bottom) = (frame.top + MARGIN, frame.top + HEIGHT - MARGIN);
    let _ = writeln!(
        out,
        r##"<rect x="{left}" y="{top}" width="{}" height="{}" fill="none" stroke="#444"/>"##,
        right - left,
        bottom - top
    );
    for (value, anchor, x, y) in [
        (frame.x.0, "start", left, bottom + 16.0),
        (frame.x.1, "end", right, bottom + 16.0),
    ] {
        let _ = writeln!(out, r#"<text x="{x}" y="{y}" font-size="11" text-anchor="{anchor}">{value:.3}</text>"#);
    }
    for (value, y) in [(frame.y.0, bottom), (frame.y.1, top + 10.0)] {
        let _ = writeln!(out, r#"<text x="{}" y="{y}" font-size="11" text-anchor="end">{value:.3}</text>"#, left - 4.0);
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        bottom + 32.0,
        escape(x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="14" y="{}" font-size="12" text-anchor="middle" transform="rotate(-90 14 {})">{}</text>"#,
        (top + bottom) / 2.0,
        (top + bottom) / 2.0,
        escape(y_label)
    );
}

fn document(height: f64, title: &str, body: &str) -> String {
    format!(
        concat!(
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
            "\n<title>{t}</title>\n",
            r#"<rect width="100%" height="100%" fill="white"/>"#,
            "\n{body}</svg>\n"
        ),
        w = WIDTH,
        h = height,
        t = escape(title),
        body = body
    )
}

/// Connecting segments between consecutive steps; visual aid only.
fn aid(out: &mut String, points: &[(f64, f64)], component: usize) {
    if points.len() < 2 {
        return;
    }
    let pts: Vec<String> = points.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
    let _ = writeln!(
        out,
        r#"<polyline class="aid" points="{}" fill="none" stroke="{}" stroke-opacity="0.35" stroke-width="1"/>"#,
        pts.join(" "),
        PALETTE[component % PALETTE.len()]
    );
}

/// Trajectory of every component in the complex plane.
pub fn plane_svg(p: &Presented, title: &str) -> String {
    let all = || p.states.iter().flat_map(|s| s.as_slice().iter().copied());
    let frame = Frame::new(all().map(|z| z.re), all().map(|z| z.im), 0.0);
    let mut body = String::new();
    axes(&mut body, &frame, "Re x", "Im x");
    for n in 0..p.arity() {
        let pts: Vec<(f64, f64)> = p
            .states
            .iter()
            .map(|s| (frame.px(s.as_slice()[n].re), frame.py(s.as_slice()[n].im)))
            .collect();
        aid(&mut body, &pts, n);
    }
    for (ell, s) in p.states.iter().enumerate() {
        for (n, &z) in s.as_slice().iter().enumerate() {
            marker(&mut body, n, frame.px(z.re), frame.py(z.im), &data_attrs(ell, n, z));
        }
    }
    document(HEIGHT, title, &body)
}

/// Real parts (upper panel) and imaginary parts (lower panel) against `l`.
pub fn reim_svg(p: &Presented, title: &str) -> String {
    let mut body = String::new();
    let steps = || (0..p.len()).map(|ell| ell as f64);
    for (panel, part) in [Part::Re, Part::Im].into_iter().enumerate() {
        let values = || p.states.iter().flat_map(move |s| s.as_slice().iter().map(move |&z| part.of(z)));
        let frame = Frame::new(steps(), values(), panel as f64 * HEIGHT);
        let _ = writeln!(body, r#"<g class="panel" data-part="{}">"#, part.prefix());
        axes(&mut body, &frame, "l", &format!("{} x", if part == Part::Re { "Re" } else { "Im" }));
        for n in 0..p.arity() {
            let pts: Vec<(f64, f64)> = p
                .states
                .iter()
                .enumerate()
                .map(|(ell, s)| (frame.px(ell as f64), frame.py(part.of(s.as_slice()[n]))))
                .collect();
            aid(&mut body, &pts, n);
        }
        for (ell, s) in p.states.iter().enumerate() {
            for (n, &z) in s.as_slice().iter().enumerate() {
                marker(&mut body, n, frame.px(ell as f64), frame.py(part.of(z)), &data_attrs(ell, n, z));
            }
        }
        body.push_str("</g>\n");
    }
    document(2.0 * HEIGHT, title, &body)
}
