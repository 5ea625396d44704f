use std::fmt::Write;

use crate::catalog::Label;

const SIZE: f64 = 480.0;
const MARGIN: f64 = 24.0;

/// A 2-D scatter plot as a standalone SVG document. Bonafide points are
/// green and spoof points orange; coordinates are scaled to fit.
pub fn scatter_svg(points: &[(Label, [f64; 2])]) -> String {
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for (_, p) in points {
        for a in 0..2 {
            lo[a] = lo[a].min(p[a]);
            hi[a] = hi[a].max(p[a]);
        }
    }
    let span = |a: usize| if hi[a] > lo[a] { hi[a] - lo[a] } else { 1.0 };
    let inner = SIZE - 2.0 * MARGIN;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (label, p) in points {
        let x = MARGIN + (p[0] - lo[0]) / span(0) * inner;
        let y = SIZE - MARGIN - (p[1] - lo[1]) / span(1) * inner;
        let color = match label {
            Label::Bonafide => "#2ca02c",
            Label::Spoof => "#ff7f0e",
        };
        let _ = writeln!(
            out,
            r#"<circle cx="{x:.2}" cy="{y:.2}" r="2.5" fill="{color}" fill-opacity="0.7"/>"#
        );
    }
    out.push_str("</svg>\n");
    out
}
