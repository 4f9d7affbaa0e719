//! SVG diagrams: function graphs, the two-dimensional complex with
//! additive faces shaded, and move diagrams.

use std::fmt::Write;

use groupcut::complex2d::Additivity;
use groupcut::moves::Character;
use groupcut::presentation::FinitePresentation;
use groupcut::{PwlFunction, Rat};

const SIZE: f64 = 400.0;
const MARGIN: f64 = 30.0;
const TRANSLATION: &str = "#1f5fbf";
const REFLECTION: &str = "#c8102e";
const PALETTE: [&str; 6] = ["#f2c14e", "#7fb069", "#9d79bc", "#f78154", "#4d9de0", "#b5b5b5"];

/// Maps `[0, w] x [lo, hi]` to the drawing area, `y` pointing up.
struct Frame {
    w: f64,
    lo: f64,
    hi: f64,
}

impl Frame {
    fn x(&self, x: &Rat) -> f64 {
        MARGIN + x.to_f64() / self.w * SIZE
    }

    fn y(&self, y: &Rat) -> f64 {
        MARGIN + (self.hi - y.to_f64()) / (self.hi - self.lo) * SIZE
    }
}

fn open(out: &mut String, width: f64, height: f64) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = width,
        h = height
    );
    let _ = writeln!(out, r#"<rect class="background" x="0" y="0" width="{width}" height="{height}" fill="white"/>"#);
}

fn frame_box(out: &mut String) {
    let _ = writeln!(
        out,
        r##"<rect class="frame" x="{MARGIN}" y="{MARGIN}" width="{SIZE}" height="{SIZE}" fill="none" stroke="#444" stroke-width="0.5"/>"##
    );
}

fn graph(out: &mut String, fr: &Frame, pi: &PwlFunction, color: &str, class: &str) {
    for (k, cell) in pi.cells().iter().enumerate() {
        let (a, b) = (cell.lo(), cell.hi());
        let (ya, yb) = (pi.limit(a, groupcut::Side::Right), pi.limit(b, groupcut::Side::Left));
        let _ = writeln!(
            out,
            r#"<line class="{class}" data-cell="{k}" x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="{color}" stroke-width="2"/>"#,
            fr.x(a),
            fr.y(&ya),
            fr.x(b),
            fr.y(&yb)
        );
    }
    for n in pi.nodes() {
        let _ = writeln!(
            out,
            r#"<circle class="value" cx="{:.3}" cy="{:.3}" r="3" fill="{color}"/>"#,
            fr.x(&n.x),
            fr.y(&n.value)
        );
        for lim in [&n.left, &n.right] {
            if lim != &n.value {
                let _ = writeln!(
                    out,
                    r#"<circle class="limit" cx="{:.3}" cy="{:.3}" r="3" fill="white" stroke="{color}"/>"#,
                    fr.x(&n.x),
                    fr.y(lim)
                );
            }
        }
    }
}

fn value_range<'a>(fns: impl IntoIterator<Item = &'a PwlFunction>) -> (f64, f64) {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for pi in fns {
        for n in pi.nodes() {
            for v in [&n.left, &n.value, &n.right] {
                lo = lo.min(v.to_f64());
                hi = hi.max(v.to_f64());
            }
        }
    }
    (lo, hi)
}

/// Graph of `pi` with filled dots at values and open dots at differing
/// one-sided limits; optional overlays are drawn in red.
pub fn function_plot(pi: &PwlFunction, overlays: &[PwlFunction]) -> String {
    let (lo, hi) = value_range(std::iter::once(pi).chain(overlays));
    let fr = Frame { w: 1.0, lo, hi };
    let mut out = String::new();
    open(&mut out, SIZE + 2.0 * MARGIN, SIZE + 2.0 * MARGIN);
    frame_box(&mut out);
    for o in overlays {
        graph(&mut out, &fr, o, REFLECTION, "overlay");
    }
    graph(&mut out, &fr, pi, "black", "function");
    out.push_str("</svg>\n");
    out
}

/// The complex on `[0, 1]^2`: cell lines, additive two-dimensional faces
/// shaded, additive edges and vertices emphasized.
pub fn complex_plot(add: &Additivity) -> String {
    let fr = Frame { w: 1.0, lo: 0.0, hi: 1.0 };
    let mut out = String::new();
    open(&mut out, SIZE + 2.0 * MARGIN, SIZE + 2.0 * MARGIN);
    let c = add.complex();
    for (idx, face) in c.faces().iter().enumerate() {
        if face.dim() != 2 || !add.is_additive(idx) {
            continue;
        }
        let (cx, cy) = (face.centroid().0.to_f64(), face.centroid().1.to_f64());
        let mut pts: Vec<&(Rat, Rat)> = face.vertices().iter().collect();
        pts.sort_by(|a, b| {
            let ta = (a.1.to_f64() - cy).atan2(a.0.to_f64() - cx);
            let tb = (b.1.to_f64() - cy).atan2(b.0.to_f64() - cx);
            ta.total_cmp(&tb)
        });
        let poly: Vec<String> = pts.iter().map(|p| format!("{:.3},{:.3}", fr.x(&p.0), fr.y(&p.1))).collect();
        let _ = writeln!(out, r#"<polygon class="additive-face" points="{}" fill="{}" fill-opacity="0.6"/>"#, poly.join(" "), PALETTE[0]);
    }
    for b in c.breakpoints().iter().filter(|b| b <= &&Rat::one()) {
        let _ = writeln!(
            out,
            r##"<line class="grid" x1="{x:.3}" y1="{:.3}" x2="{x:.3}" y2="{:.3}" stroke="#999" stroke-width="0.5"/>"##,
            fr.y(&Rat::zero()),
            fr.y(&Rat::one()),
            x = fr.x(b)
        );
        let _ = writeln!(
            out,
            r##"<line class="grid" x1="{:.3}" y1="{y:.3}" x2="{:.3}" y2="{y:.3}" stroke="#999" stroke-width="0.5"/>"##,
            fr.x(&Rat::zero()),
            fr.x(&Rat::one()),
            y = fr.y(b)
        );
    }
    for b in c.breakpoints() {
        let (x0, x1) = (if b > &Rat::one() { b - &Rat::one() } else { Rat::zero() }, if b < &Rat::one() { b.clone() } else { Rat::one() });
        let _ = writeln!(
            out,
            r##"<line class="grid" x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="#999" stroke-width="0.5"/>"##,
            fr.x(&x0),
            fr.y(&(b - &x0)),
            fr.x(&x1),
            fr.y(&(b - &x1))
        );
    }
    for (idx, face) in c.faces().iter().enumerate() {
        if !add.is_additive(idx) {
            continue;
        }
        match face.dim() {
            1 => {
                let v = face.vertices();
                let _ = writeln!(
                    out,
                    r#"<line class="additive-edge" x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="{TRANSLATION}" stroke-width="2"/>"#,
                    fr.x(&v[0].0),
                    fr.y(&v[0].1),
                    fr.x(&v[1].0),
                    fr.y(&v[1].1)
                );
            }
            0 => {
                let v = &face.vertices()[0];
                let _ = writeln!(out, r#"<circle class="additive-vertex" cx="{:.3}" cy="{:.3}" r="2.5" fill="{REFLECTION}"/>"#, fr.x(&v.0), fr.y(&v.1));
            }
            _ => {}
        }
    }
    frame_box(&mut out);
    out.push_str("</svg>\n");
    out
}

/// Graphs of the presentation moves (translations blue, reflections red)
/// and the squares `I x J` of each covered component.
pub fn closure_plot(p: &FinitePresentation) -> String {
    let fr = Frame { w: 1.0, lo: 0.0, hi: 1.0 };
    let mut out = String::new();
    open(&mut out, SIZE + 2.0 * MARGIN, SIZE + 2.0 * MARGIN);
    frame_box(&mut out);
    for (ci, comp) in p.components().iter().enumerate() {
        let color = PALETTE[ci % PALETTE.len()];
        for a in comp.iter() {
            for b in comp.iter() {
                let _ = writeln!(
                    out,
                    r#"<rect class="component" data-component="{ci}" x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="{color}" fill-opacity="0.5"/>"#,
                    fr.x(a.lo()),
                    fr.y(b.hi()),
                    fr.x(a.hi()) - fr.x(a.lo()),
                    fr.y(b.lo()) - fr.y(b.hi())
                );
            }
        }
    }
    for m in p.moves() {
        let Some((s, e)) = m.graph_segment() else { continue };
        let (class, color) = match m.chi() {
            Character::Translation => ("translation", TRANSLATION),
            Character::Reflection => ("reflection", REFLECTION),
        };
        let _ = writeln!(
            out,
            r#"<line class="{class}" data-move="{m}" x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="{color}" stroke-width="2"/>"#,
            fr.x(&s.0),
            fr.y(&s.1),
            fr.x(&e.0),
            fr.y(&e.1)
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use groupcut::catalog::{equiv7_example_1, gmic};
    use groupcut::closure::closure_of;
    use groupcut::exactnum::r;

    fn count(svg: &str, needle: &str) -> usize {
        svg.matches(needle).count()
    }

    #[test]
    fn closure_diagram_for_equiv7() {
        let p = closure_of(&equiv7_example_1(), None).unwrap().presentation;
        let svg = closure_plot(&p);
        assert_eq!(count(&svg, r#"class="translation""#), 1);
        assert_eq!(count(&svg, r#"class="reflection""#), 1);
        assert_eq!(count(&svg, r#"class="component""#), 1);
    }

    #[test]
    fn function_plot_marks_limits() {
        let svg = function_plot(&equiv7_example_1(), &[]);
        assert_eq!(count(&svg, r#"class="function""#), 2);
        assert!(count(&svg, r#"class="limit""#) >= 2);
        assert_eq!(count(&function_plot(&gmic(r(1, 2)).unwrap(), &[]), r#"class="limit""#), 0);
    }

    #[test]
    fn complex_plot_shades_additive_faces() {
        let add = Additivity::of(&gmic(r(1, 2)).unwrap()).unwrap();
        let svg = complex_plot(&add);
        assert!(count(&svg, r#"class="additive-face""#) >= 2);
        assert!(svg.ends_with("</svg>\n"));
    }
}
