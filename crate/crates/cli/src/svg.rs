//! Static SVG plot of zeros and counting circles on a log-scaled radial axis.
//!
//! A point `r·e^{iφ}` is drawn at angle `φ` and distance proportional to
//! `log10 r` between the smallest and largest decade in view. All numbers are
//! printed with fixed decimals so equal input gives byte-equal output.

use std::fmt::Write as _;
use std::io;
use std::path::Path;

use theta_atlas_core::analytic::ZeroReport;

const SIZE: f64 = 640.0;
const CENTER: f64 = SIZE / 2.0;
const INNER: f64 = 24.0;
const OUTER: f64 = 280.0;

struct Axis {
    lo: f64,
    hi: f64,
}

impl Axis {
    fn fit(moduli: impl Iterator<Item = f64>) -> Self {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for m in moduli.filter(|m| *m > 0.0) {
            lo = lo.min(m.log10());
            hi = hi.max(m.log10());
        }
        if !lo.is_finite() {
            return Axis { lo: 0.0, hi: 1.0 };
        }
        Axis {
            lo: lo.floor(),
            hi: hi.ceil().max(lo.floor() + 1.0),
        }
    }

    fn radius(&self, modulus: f64) -> f64 {
        let t = (modulus.log10() - self.lo) / (self.hi - self.lo);
        INNER + t.clamp(0.0, 1.0) * (OUTER - INNER)
    }
}

/// Renders the zeros of `report` and the circles `|z| = r` for `r` in `radii`.
pub fn render_svg(report: &ZeroReport, radii: &[f64]) -> Result<String, String> {
    let zeros: Vec<_> = report.zeros.iter().map(|z| z.location).collect();
    if zeros.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) || radii.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
        return Err("non-finite plot input".to_string());
    }
    let axis = Axis::fit(zeros.iter().map(|z| z.norm()).chain(radii.iter().copied()));
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE:.0}" height="{SIZE:.0}" viewBox="0 0 {SIZE:.0} {SIZE:.0}">"#
    );
    let _ = writeln!(
        s,
        r#"<title>zeros of theta(q, z), q = {:.6}{:+.6}i</title>"#,
        report.q.re, report.q.im
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r##"<g stroke="#999" stroke-width="1"><line x1="{:.2}" y1="{CENTER:.2}" x2="{:.2}" y2="{CENTER:.2}"/><line x1="{CENTER:.2}" y1="{:.2}" x2="{CENTER:.2}" y2="{:.2}"/></g>"##,
        CENTER - OUTER,
        CENTER + OUTER,
        CENTER - OUTER,
        CENTER + OUTER
    );
    let _ = writeln!(
        s,
        r##"<g fill="none" stroke="#ddd" stroke-width="1" font-family="sans-serif" font-size="10">"##
    );
    let mut decade = axis.lo;
    while decade <= axis.hi {
        let r = axis.radius(10f64.powf(decade));
        let _ = writeln!(
            s,
            r##"<circle cx="{CENTER:.2}" cy="{CENTER:.2}" r="{r:.2}"/><text x="{:.2}" y="{:.2}" fill="#666" stroke="none">1e{decade:.0}</text>"##,
            CENTER + r + 2.0,
            CENTER - 2.0
        );
        decade += 1.0;
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(
        s,
        r##"<g fill="none" stroke="#1f77b4" stroke-width="1.5" stroke-dasharray="6 4" font-family="sans-serif" font-size="10">"##
    );
    for (i, &radius) in radii.iter().enumerate() {
        let r = axis.radius(radius);
        let _ = writeln!(
            s,
            r##"<circle cx="{CENTER:.2}" cy="{CENTER:.2}" r="{r:.2}"><title>n = {} radius {radius:.6e}</title></circle><text x="{CENTER:.2}" y="{:.2}" fill="#1f77b4" stroke="none">n={}</text>"##,
            i + 1,
            CENTER - r - 3.0,
            i + 1
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r##"<g fill="#d62728" stroke="black" stroke-width="0.5">"##);
    for (entry, z) in report.zeros.iter().zip(&zeros) {
        let r = axis.radius(z.norm());
        let phi = z.arg();
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="4"><title>zero {} at {:.6e}{:+.6e}i, multiplicity {}</title></circle>"#,
            CENTER + r * phi.cos(),
            CENTER - r * phi.sin(),
            entry.index,
            z.re,
            z.im,
            entry.multiplicity
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, "</svg>");
    Ok(s)
}

pub fn write_svg(report: &ZeroReport, radii: &[f64], out: &Path) -> io::Result<()> {
    let svg = render_svg(report, radii).map_err(io::Error::other)?;
    std::fs::write(out, svg)
}
