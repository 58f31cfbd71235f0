//! Deterministic SVG figures of planar scenes.

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::io::Write;

use crate::error::{Error, Result};
use crate::geometry::{Piece, SetExpr, Vector};
use crate::scene::{format_number, Scene};
use crate::separation::{Hyperplane, SeparationCertificate};

/// What to draw on top of the sets.
#[derive(Debug, Clone, Copy)]
pub enum Overlay<'a> {
    None,
    Support(&'a Hyperplane),
    Separation(&'a SeparationCertificate),
}

impl Overlay<'_> {
    fn hyperplane(&self) -> Option<&Hyperplane> {
        match self {
            Overlay::None => None,
            Overlay::Support(h) => Some(h),
            Overlay::Separation(c) => Some(&c.hyperplane),
        }
    }
}

const PRECISION: usize = 6;
const STYLE: &str = ".set-a{fill:#4c72b0;fill-opacity:0.35;stroke:#4c72b0}\
.set-b{fill:#dd8452;fill-opacity:0.35;stroke:#dd8452}\
.point-p{fill:#000000}\
.hyperplane{stroke:#c44e52;fill:none}";

#[derive(Debug, Clone, Copy)]
struct Viewport {
    min_x: f64,
    min_y: f64,
    max_x: f64,
    max_y: f64,
}

impl Viewport {
    fn around<'a>(points: impl IntoIterator<Item = &'a Vector>) -> Self {
        let mut vp = Viewport {
            min_x: f64::INFINITY,
            min_y: f64::INFINITY,
            max_x: f64::NEG_INFINITY,
            max_y: f64::NEG_INFINITY,
        };
        for v in points {
            vp.min_x = vp.min_x.min(v[0]);
            vp.max_x = vp.max_x.max(v[0]);
            vp.min_y = vp.min_y.min(v[1]);
            vp.max_y = vp.max_y.max(v[1]);
        }
        // Flat boxes get a unit extent so the figure is never empty.
        for (lo, hi) in [
            (&mut vp.min_x, &mut vp.max_x),
            (&mut vp.min_y, &mut vp.max_y),
        ] {
            if *hi - *lo <= 0.0 {
                *lo -= 0.5;
                *hi += 0.5;
            }
        }
        let (dx, dy) = (0.1 * vp.width(), 0.1 * vp.height());
        vp.min_x -= dx;
        vp.max_x += dx;
        vp.min_y -= dy;
        vp.max_y += dy;
        vp
    }

    fn width(&self) -> f64 {
        self.max_x - self.min_x
    }

    fn height(&self) -> f64 {
        self.max_y - self.min_y
    }

    /// Clip the line `anchor + t d` to the box (Liang-Barsky).
    fn clip_line(&self, anchor: &Vector, d: [f64; 2]) -> Option<([f64; 2], [f64; 2])> {
        let (mut t0, mut t1) = (f64::NEG_INFINITY, f64::INFINITY);
        let bounds = [
            (anchor[0], d[0], self.min_x, self.max_x),
            (anchor[1], d[1], self.min_y, self.max_y),
        ];
        for (a, dir, lo, hi) in bounds {
            if dir.abs() < 1e-15 {
                if a < lo || a > hi {
                    return None;
                }
                continue;
            }
            let (ta, tb) = ((lo - a) / dir, (hi - a) / dir);
            t0 = t0.max(ta.min(tb));
            t1 = t1.min(ta.max(tb));
        }
        if t0 > t1 {
            return None;
        }
        let at = |t: f64| [anchor[0] + t * d[0], anchor[1] + t * d[1]];
        Some((at(t0), at(t1)))
    }
}

fn num(x: f64) -> String {
    format_number(x, PRECISION)
}

/// Convex hull in counter-clockwise order (monotone chain).
fn hull_2d(points: &[Vector]) -> Vec<[f64; 2]> {
    let mut pts: Vec<[f64; 2]> = points.iter().map(|v| [v[0], v[1]]).collect();
    pts.sort_by(|a, b| {
        a[0].partial_cmp(&b[0])
            .unwrap_or(Ordering::Equal)
            .then(a[1].partial_cmp(&b[1]).unwrap_or(Ordering::Equal))
    });
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: [f64; 2], a: [f64; 2], b: [f64; 2]| {
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let mut lower: Vec<[f64; 2]> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<[f64; 2]> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn draw_set(svg: &mut String, set: &SetExpr, class: &str, marker: f64) {
    let _ = writeln!(svg, "<g class=\"{class}\">");
    for piece in set.pieces() {
        match piece {
            Piece::Points(ps) => {
                for v in ps.points() {
                    let _ = writeln!(
                        svg,
                        "<circle cx=\"{}\" cy=\"{}\" r=\"{}\"/>",
                        num(v[0]),
                        num(-v[1]),
                        num(marker)
                    );
                }
            }
            Piece::Polytope(poly) => {
                let hull = hull_2d(poly.vertices());
                if hull.len() == 1 {
                    let _ = writeln!(
                        svg,
                        "<circle cx=\"{}\" cy=\"{}\" r=\"{}\"/>",
                        num(hull[0][0]),
                        num(-hull[0][1]),
                        num(marker)
                    );
                } else {
                    let coords: Vec<String> = hull
                        .iter()
                        .map(|p| format!("{},{}", num(p[0]), num(-p[1])))
                        .collect();
                    let _ = writeln!(svg, "<polygon points=\"{}\"/>", coords.join(" "));
                }
            }
        }
    }
    svg.push_str("</g>\n");
}

/// Render a planar scene and an optional hyperplane as an SVG document.
///
/// The view box is the bounding box of every point (including `p` and the
/// hyperplane anchor) inflated by 20%, with the y axis pointing up. The
/// hyperplane is the only `<line>` element.
pub fn render_plot_2d(scene: &Scene, overlay: Overlay<'_>) -> Result<String> {
    if scene.dim != 2 {
        return Err(Error::UnsupportedDimension {
            required: 2,
            found: scene.dim,
        });
    }
    let hyperplane = overlay.hyperplane();
    let vp = Viewport::around(scene.all_points().chain(hyperplane.map(|h| h.anchor())));
    let marker = 0.01 * vp.width().max(vp.height());
    let stroke = 0.4 * marker;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\" width=\"600\" height=\"{}\">",
        num(vp.min_x),
        num(-vp.max_y),
        num(vp.width()),
        num(vp.height()),
        num(600.0 * vp.height() / vp.width())
    );
    let _ = writeln!(svg, "<style>{STYLE}</style>");
    let _ = writeln!(svg, "<g stroke-width=\"{}\">", num(stroke));
    draw_set(&mut svg, &scene.set_a, "set-a", marker);
    if let Some(b) = &scene.set_b {
        draw_set(&mut svg, b, "set-b", marker);
    }
    if let Some(h) = hyperplane {
        let n = h.normal();
        if let Some((from, to)) = vp.clip_line(h.anchor(), [-n[1], n[0]]) {
            let _ = writeln!(
                svg,
                "<line class=\"hyperplane\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
                num(from[0]),
                num(-from[1]),
                num(to[0]),
                num(-to[1])
            );
        }
    }
    if let Some(p) = &scene.point_p {
        let _ = writeln!(
            svg,
            "<circle class=\"point-p\" cx=\"{}\" cy=\"{}\" r=\"{}\"/>",
            num(p[0]),
            num(-p[1]),
            num(1.5 * marker)
        );
    }
    svg.push_str("</g>\n</svg>\n");
    Ok(svg)
}

/// Write the figure to `out`.
pub fn emit_plot_2d(scene: &Scene, overlay: Overlay<'_>, out: &mut dyn Write) -> Result<()> {
    let svg = render_plot_2d(scene, overlay)?;
    out.write_all(svg.as_bytes())
        .map_err(|e| Error::Scene(format!("cannot write plot: {e}")))
}
