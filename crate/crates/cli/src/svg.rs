//! Hand-written SVG phase portraits.
//!
//! `p₁` runs left to right, `p₂` bottom to top. The `ṗ₁ = 0` nullcline is
//! solid green, the `ṗ₂ = 0` nullcline dashed orange; asymptotically stable
//! states are solid dots, all others hollow.

use std::fmt::Write;

use hawkdove::flow::nullcline_field;
use hawkdove::{Label, Report64, Response64};

const SIZE: f64 = 600.0;
const MARGIN: f64 = 50.0;
const GLYPHS: usize = 15;

fn x(p1: f64) -> f64 {
    MARGIN + p1 * (SIZE - 2.0 * MARGIN)
}

fn y(p2: f64) -> f64 {
    SIZE - MARGIN - p2 * (SIZE - 2.0 * MARGIN)
}

fn polyline(points: &[(f64, f64)]) -> String {
    points
        .iter()
        .map(|&(a, b)| format!("{:.2},{:.2}", x(a), y(b)))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn render(f: &Response64, report: &Report64, title: &str) -> String {
    let portrait = nullcline_field(f, GLYPHS);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, "<title>{}</title>", escape(title));
    let _ = writeln!(s, r##"<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="#ffffff"/>"##);
    let side = SIZE - 2.0 * MARGIN;
    let _ = writeln!(
        s,
        r##"<rect class="frame" x="{MARGIN}" y="{MARGIN}" width="{side}" height="{side}" fill="none" stroke="#000000"/>"##
    );
    for t in [0.0, 0.5, 1.0] {
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle">{t}</text>"#,
            x(t),
            SIZE - MARGIN + 18.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="end">{t}</text>"#,
            MARGIN - 6.0,
            y(t) + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" font-size="14" text-anchor="middle">p1</text>"#,
        SIZE / 2.0,
        SIZE - 12.0
    );
    let _ = writeln!(
        s,
        r#"<text x="14" y="{:.2}" font-size="14" text-anchor="middle">p2</text>"#,
        SIZE / 2.0
    );

    // direction glyphs, all of the same length
    let len = 0.4 * side / (GLYPHS - 1) as f64;
    for v in &portrait.vectors {
        let norm = v.v1.hypot(v.v2);
        if norm < 1e-12 {
            continue;
        }
        let (dx, dy) = (v.v1 / norm * len, -v.v2 / norm * len);
        let (x0, y0) = (x(v.p1), y(v.p2));
        let _ = writeln!(
            s,
            r##"<line class="glyph" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#999999" stroke-width="1"/>"##,
            x0,
            y0,
            x0 + dx,
            y0 + dy
        );
        let _ = writeln!(
            s,
            r##"<circle class="glyph-head" cx="{:.2}" cy="{:.2}" r="1.5" fill="#999999"/>"##,
            x0 + dx,
            y0 + dy
        );
    }

    let _ = writeln!(
        s,
        r##"<polyline class="nullcline nullcline-p1" points="{}" fill="none" stroke="#2ca02c" stroke-width="2"/>"##,
        polyline(&portrait.inverse_curve)
    );
    let _ = writeln!(
        s,
        r##"<polyline class="nullcline nullcline-p2" points="{}" fill="none" stroke="#ff7f0e" stroke-width="2" stroke-dasharray="8,5"/>"##,
        polyline(&portrait.w_curve)
    );

    if report.continuum {
        let _ = writeln!(
            s,
            r##"<line class="continuum" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#000000" stroke-width="4" stroke-opacity="0.4"/>"##,
            x(0.0),
            y(1.0),
            x(1.0),
            y(0.0)
        );
    } else {
        for st in &report.states {
            let (class, fill) = match st.label {
                Label::AsymptoticallyStable => ("state stable", "#000000"),
                Label::Unstable => ("state unstable", "#ffffff"),
                Label::Marginal | Label::Continuum => ("state marginal", "#ffffff"),
            };
            let _ = writeln!(
                s,
                r##"<circle class="{class}" cx="{:.2}" cy="{:.2}" r="7" fill="{fill}" stroke="#000000" stroke-width="2"/>"##,
                x(st.location.p1),
                y(st.location.p2)
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
