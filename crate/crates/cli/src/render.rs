//! SVG rendering of planar instances: generator vectors, the span region
//! (a 45-degree strip for max-plus, a cone for max-times), the target vector,
//! computed witness points, and the reachable set of an extended equation.
//!
//! Output is standalone SVG 1.1, a pure function of its inputs: identical
//! documents render to identical bytes.

use crate::doc::ProblemDocument;
use crate::error::CliError;
use tropic_core::{Semifield, Vector};

/// Computed points to overlay on the span plot, in carrier coordinates.
#[derive(Debug, Default, Clone)]
pub struct PlotOverlay {
    /// The nearest span point to the target, when known.
    pub nearest: Option<[f64; 2]>,
    /// The below-projection of the target onto the span.
    pub below: Option<[f64; 2]>,
    /// The above-projection of the target onto the span.
    pub above: Option<[f64; 2]>,
    /// Residual value, annotated on the plot.
    pub delta: Option<f64>,
    /// Draw the reachable set of `A x (+) b` using the document's `b`.
    pub extended: bool,
}

fn point(v: &Vector) -> [f64; 2] {
    [v.get(0), v.get(1)]
}

/// The extreme boundary parameters of the planar span: line intercepts for
/// max-plus, ray slopes for max-times. Columns with a zero entry open the
/// corresponding side of the region.
struct Boundaries {
    sf: Semifield,
    lo: f64,
    hi: f64,
}

impl Boundaries {
    fn of(sf: Semifield, columns: &[[f64; 2]]) -> Boundaries {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for col in columns {
            let param = match sf {
                // intercept of the 45-degree line through the endpoint
                Semifield::MaxPlus => {
                    if col[0] == f64::NEG_INFINITY {
                        f64::INFINITY
                    } else if col[1] == f64::NEG_INFINITY {
                        f64::NEG_INFINITY
                    } else {
                        col[1] - col[0]
                    }
                }
                // slope of the ray through the endpoint
                _ => {
                    if col[0] == 0.0 {
                        f64::INFINITY
                    } else {
                        col[1] / col[0]
                    }
                }
            };
            lo = lo.min(param);
            hi = hi.max(param);
        }
        Boundaries { sf, lo, hi }
    }

    /// The lowest span point vertically above `(x, _)`, if the span has a
    /// lower boundary there.
    fn floor_above(&self, x: f64) -> Option<f64> {
        match self.sf {
            Semifield::MaxPlus => self.lo.is_finite().then_some(x + self.lo),
            _ => (self.lo.is_finite() && self.lo > 0.0).then_some(x * self.lo),
        }
    }

    /// The leftmost span point horizontally right of `(_, y)`, if the span
    /// has an upper boundary there.
    fn wall_right_of(&self, y: f64) -> Option<f64> {
        match self.sf {
            Semifield::MaxPlus => self.hi.is_finite().then_some(y - self.hi),
            _ => (self.hi.is_finite() && self.hi > 0.0).then(|| y / self.hi),
        }
    }

    /// Segments joining `b` to the span: the extension of the reachable set
    /// of `A x (+) b` when `b` lies outside the span.
    fn segments_from(&self, b: [f64; 2]) -> Vec<([f64; 2], [f64; 2])> {
        let mut out = Vec::new();
        if let Some(floor) = self.floor_above(b[0]) {
            if b[1] < floor {
                out.push((b, [b[0], floor]));
            }
        }
        if let Some(wall) = self.wall_right_of(b[1]) {
            if b[0] < wall {
                out.push((b, [wall, b[1]]));
            }
        }
        out
    }

    /// Clip the frame rectangle down to the span region.
    fn region(&self, frame: &Frame) -> Vec<[f64; 2]> {
        let mut region = frame.corners();
        match self.sf {
            Semifield::MaxPlus => {
                if self.hi.is_finite() {
                    region = clip(&region, -1.0, 1.0, self.hi); // y - x <= hi
                }
                if self.lo.is_finite() {
                    region = clip(&region, 1.0, -1.0, -self.lo); // y - x >= lo
                }
            }
            _ => {
                region = clip(&region, -1.0, 0.0, 0.0); // x >= 0
                region = clip(&region, 0.0, -1.0, 0.0); // y >= 0
                if self.hi.is_finite() {
                    region = clip(&region, -self.hi, 1.0, 0.0); // y <= hi x
                }
                if self.lo.is_finite() && self.lo > 0.0 {
                    region = clip(&region, self.lo, -1.0, 0.0); // y >= lo x
                }
            }
        }
        region
    }
}

/// Clip a convex polygon by the half-plane `a*x + b*y <= c`.
fn clip(poly: &[[f64; 2]], a: f64, b: f64, c: f64) -> Vec<[f64; 2]> {
    let inside = |p: [f64; 2]| a * p[0] + b * p[1] <= c + 1e-9;
    let mut out = Vec::with_capacity(poly.len() + 2);
    for (k, &p) in poly.iter().enumerate() {
        let q = poly[(k + 1) % poly.len()];
        let (pin, qin) = (inside(p), inside(q));
        if pin {
            out.push(p);
        }
        if pin != qin {
            let denom = a * (q[0] - p[0]) + b * (q[1] - p[1]);
            if denom.abs() > 1e-12 {
                let t = (c - a * p[0] - b * p[1]) / denom;
                out.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
            }
        }
    }
    out
}

struct Frame {
    min: [f64; 2],
    max: [f64; 2],
    scale: f64,
    height: f64,
}

impl Frame {
    fn fit(points: &[[f64; 2]]) -> Frame {
        let mut min = [f64::INFINITY; 2];
        let mut max = [f64::NEG_INFINITY; 2];
        for p in points {
            for k in 0..2 {
                if p[k].is_finite() {
                    min[k] = min[k].min(p[k]);
                    max[k] = max[k].max(p[k]);
                }
            }
        }
        for k in 0..2 {
            if !min[k].is_finite() {
                min[k] = 0.0;
                max[k] = 1.0;
            }
            if max[k] - min[k] < 1.0 {
                max[k] += 0.5;
                min[k] -= 0.5;
            }
            let margin = 0.1 * (max[k] - min[k]);
            min[k] -= margin;
            max[k] += margin;
        }
        let width = 640.0;
        let scale = width / (max[0] - min[0]);
        let height = (max[1] - min[1]) * scale;
        Frame {
            min,
            max,
            scale,
            height,
        }
    }

    fn map(&self, p: [f64; 2]) -> (f64, f64) {
        (
            (p[0] - self.min[0]) * self.scale,
            (self.max[1] - p[1]) * self.scale,
        )
    }

    fn corners(&self) -> Vec<[f64; 2]> {
        vec![
            [self.min[0], self.min[1]],
            [self.max[0], self.min[1]],
            [self.max[0], self.max[1]],
            [self.min[0], self.max[1]],
        ]
    }
}

fn fmt(v: f64) -> String {
    format!("{:.2}", v)
}

fn polygon(frame: &Frame, pts: &[[f64; 2]], style: &str) -> String {
    if pts.len() < 3 {
        return String::new();
    }
    let coords = pts
        .iter()
        .map(|&p| {
            let (x, y) = frame.map(p);
            format!("{},{}", fmt(x), fmt(y))
        })
        .collect::<Vec<_>>()
        .join(" ");
    format!("  <polygon points=\"{coords}\" style=\"{style}\"/>\n")
}

fn line(frame: &Frame, from: [f64; 2], to: [f64; 2], style: &str, marker: bool) -> String {
    let (x1, y1) = frame.map(from);
    let (x2, y2) = frame.map(to);
    let marker = if marker {
        " marker-end=\"url(#tip)\""
    } else {
        ""
    };
    format!(
        "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" style=\"{style}\"{marker}/>\n",
        fmt(x1),
        fmt(y1),
        fmt(x2),
        fmt(y2)
    )
}

fn dot(frame: &Frame, p: [f64; 2], fill: &str) -> String {
    let (x, y) = frame.map(p);
    format!(
        "  <circle cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"{fill}\"/>\n",
        fmt(x),
        fmt(y)
    )
}

fn text(frame: &Frame, p: [f64; 2], dx: f64, dy: f64, content: &str) -> String {
    let (x, y) = frame.map(p);
    format!(
        "  <text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"13\">{content}</text>\n",
        fmt(x + dx),
        fmt(y + dy)
    )
}

/// Render the instance to SVG text.
pub fn render_svg(doc: &ProblemDocument, overlay: &PlotOverlay) -> Result<String, CliError> {
    let sf = doc.semifield;
    if !matches!(sf, Semifield::MaxPlus | Semifield::MaxTimes) {
        return Err(CliError::UnsupportedPlot(format!(
            "plots cover max-plus and max-times instances, not {sf}"
        )));
    }
    if doc.a.rows() != 2 {
        return Err(CliError::UnsupportedPlot(format!(
            "plots need two-dimensional instances, A has {} rows",
            doc.a.rows()
        )));
    }
    let columns: Vec<[f64; 2]> = (0..doc.a.cols()).map(|j| point(&doc.a.column(j))).collect();
    let d = point(&doc.d);
    let b = overlay
        .extended
        .then(|| doc.b.as_ref().map(point))
        .flatten();
    let bounds = Boundaries::of(sf, &columns);
    let segments = b.map(|b| bounds.segments_from(b)).unwrap_or_default();

    let origin = [0.0, 0.0];
    let mut features: Vec<[f64; 2]> = vec![origin, d];
    features.extend(columns.iter().copied());
    features.extend(
        [overlay.nearest, overlay.below, overlay.above, b]
            .into_iter()
            .flatten(),
    );
    for (from, to) in &segments {
        features.push(*from);
        features.push(*to);
    }
    let frame = Frame::fit(&features);

    let mut body = String::new();
    let region = bounds.region(&frame);
    body.push_str(&polygon(
        &frame,
        &region,
        "fill:#bcd7f0;stroke:#5b87b5;stroke-width:1;fill-opacity:0.55",
    ));

    // the reachable set of A x (+) b: the part of the span dominating b, plus
    // the segments connecting b to it
    if let Some(b) = b {
        let mut shaded = region.clone();
        shaded = clip(&shaded, -1.0, 0.0, -b[0]); // x >= b1
        shaded = clip(&shaded, 0.0, -1.0, -b[1]); // y >= b2
        body.push_str(&polygon(
            &frame,
            &shaded,
            "fill:#7fa8d0;stroke:#446a94;stroke-width:1;fill-opacity:0.75",
        ));
        for (from, to) in &segments {
            body.push_str(&line(
                &frame,
                *from,
                *to,
                "stroke:#446a94;stroke-width:2",
                false,
            ));
        }
    }

    // axes through the origin
    body.push_str(&line(
        &frame,
        [frame.min[0], 0.0],
        [frame.max[0], 0.0],
        "stroke:#999999;stroke-width:1",
        false,
    ));
    body.push_str(&line(
        &frame,
        [0.0, frame.min[1]],
        [0.0, frame.max[1]],
        "stroke:#999999;stroke-width:1",
        false,
    ));

    // generators
    for (j, col) in columns.iter().enumerate() {
        if col.iter().all(|v| v.is_finite()) {
            body.push_str(&line(
                &frame,
                origin,
                *col,
                "stroke:#2c4a6e;stroke-width:2",
                true,
            ));
            body.push_str(&text(&frame, *col, 6.0, -4.0, &format!("a{}", j + 1)));
        }
    }

    // target and optional addend
    if d.iter().all(|v| v.is_finite()) {
        body.push_str(&line(
            &frame,
            origin,
            d,
            "stroke:#b03a2e;stroke-width:2",
            true,
        ));
        body.push_str(&text(&frame, d, 6.0, -4.0, "d"));
    }
    if let Some(b) = b {
        if b.iter().all(|v| v.is_finite()) {
            body.push_str(&line(
                &frame,
                origin,
                b,
                "stroke:#7d6608;stroke-width:2",
                true,
            ));
            body.push_str(&text(&frame, b, 6.0, 14.0, "b"));
        }
    }

    // witness points
    for (p, label, fill) in [
        (overlay.below, "y1", "#1d8348"),
        (overlay.above, "y2", "#7d3c98"),
        (overlay.nearest, "y*", "#ca6f1e"),
    ] {
        if let Some(p) = p {
            if p.iter().all(|v| v.is_finite()) {
                body.push_str(&dot(&frame, p, fill));
                body.push_str(&text(&frame, p, 6.0, 14.0, label));
            }
        }
    }

    if let Some(delta) = overlay.delta {
        let label = if delta.is_finite() {
            format!("Δ = {delta}")
        } else {
            "Δ = inf".to_string()
        };
        body.push_str(&format!(
            "  <text x=\"12\" y=\"20\" font-family=\"sans-serif\" font-size=\"15\">{label}</text>\n"
        ));
    }

    let height = frame.height;
    Ok(format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"0 0 640 {h}\" \
         width=\"640\" height=\"{h}\">\n\
         <defs>\n  <marker id=\"tip\" markerWidth=\"8\" markerHeight=\"8\" refX=\"6\" refY=\"3\" \
         orient=\"auto\">\n    <path d=\"M0,0 L6,3 L0,6 z\"/>\n  </marker>\n</defs>\n\
         <rect x=\"0\" y=\"0\" width=\"640\" height=\"{h}\" fill=\"#ffffff\"/>\n{body}</svg>\n",
        h = fmt(height),
        body = body
    ))
}
