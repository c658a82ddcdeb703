//! Plain SVG rendering of a two-dimensional tolerable set together with the
//! estimate and its `x_hat +- IVE` box.

use std::fmt::Write;

const SIZE: f64 = 640.0;
const MARGIN: f64 = 70.0;

/// Everything drawn in a 2-D plot.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotData {
    /// Counterclockwise vertices; two for a segment, one for a point, none
    /// for an empty set.
    pub polygon: Vec<[f64; 2]>,
    pub x_hat: [f64; 2],
    pub ive: f64,
    pub max_tol: f64,
}

impl PlotData {
    pub fn is_empty_set(&self) -> bool {
        self.polygon.is_empty()
    }

    pub fn is_zero_area(&self) -> bool {
        !self.polygon.is_empty() && self.polygon.len() < 3
    }

    fn ive_box(&self) -> Option<[[f64; 2]; 2]> {
        (self.ive.is_finite() && self.ive != 0.0).then(|| {
            let r = self.ive.abs();
            [
                [self.x_hat[0] - r, self.x_hat[1] - r],
                [self.x_hat[0] + r, self.x_hat[1] + r],
            ]
        })
    }
}

struct View {
    lo: [f64; 2],
    hi: [f64; 2],
}

impl View {
    fn fit(points: &[[f64; 2]]) -> Self {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for p in points {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        // square aspect, 8% padding
        let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-9) * 1.08;
        let c = [0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1])];
        View {
            lo: [c[0] - 0.5 * span, c[1] - 0.5 * span],
            hi: [c[0] + 0.5 * span, c[1] + 0.5 * span],
        }
    }

    fn px(&self, p: [f64; 2]) -> (f64, f64) {
        let w = SIZE - 2.0 * MARGIN;
        (
            MARGIN + (p[0] - self.lo[0]) / (self.hi[0] - self.lo[0]) * w,
            SIZE - MARGIN - (p[1] - self.lo[1]) / (self.hi[1] - self.lo[1]) * w,
        )
    }
}

fn points_attr(view: &View, pts: &[[f64; 2]]) -> String {
    pts.iter()
        .map(|&p| {
            let (x, y) = view.px(p);
            format!("{x:.2},{y:.2}")
        })
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn render_svg(data: &PlotData) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#);

    let mut title = format!("Tolerable solution set, max Tol = {:.6}", data.max_tol);
    if data.is_zero_area() {
        title.push_str(" [zero-area: unstable set]");
    }
    let _ = writeln!(
        s,
        r#"<text id="title" x="{}" y="24" text-anchor="middle" font-size="15">{title}</text>"#,
        SIZE / 2.0
    );

    if data.is_empty_set() {
        let _ = writeln!(
            s,
            r#"<text id="annotation" x="{}" y="{}" text-anchor="middle">tolerable solution set is empty (max Tol = {:.6} &lt; 0)</text>"#,
            SIZE / 2.0,
            SIZE / 2.0,
            data.max_tol
        );
        s.push_str("</svg>\n");
        return s;
    }

    let mut extent = data.polygon.clone();
    extent.push(data.x_hat);
    if let Some(b) = data.ive_box() {
        extent.extend(b);
    }
    let view = View::fit(&extent);

    // frame with corner labels
    let (x0, y0) = view.px(view.lo);
    let (x1, y1) = view.px(view.hi);
    let _ = writeln!(
        s,
        r##"<rect id="frame" x="{x0:.2}" y="{y1:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="#888"/>"##,
        x1 - x0,
        y0 - y1
    );
    let _ = writeln!(s, r#"<text x="{x0:.2}" y="{:.2}" text-anchor="start">{:.4}</text>"#, y0 + 16.0, view.lo[0]);
    let _ = writeln!(s, r#"<text x="{x1:.2}" y="{:.2}" text-anchor="end">{:.4}</text>"#, y0 + 16.0, view.hi[0]);
    let _ = writeln!(s, r#"<text x="{:.2}" y="{y0:.2}" text-anchor="end">{:.4}</text>"#, x0 - 4.0, view.lo[1]);
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{:.4}</text>"#, x0 - 4.0, y1 + 10.0, view.hi[1]);
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">x1</text>"#, SIZE / 2.0, y0 + 34.0);
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">x2</text>"#, x0 - 40.0, SIZE / 2.0);

    // coordinate axes where visible
    if view.lo[1] <= 0.0 && 0.0 <= view.hi[1] {
        let (_, y) = view.px([0.0, 0.0]);
        let _ = writeln!(s, r##"<line id="axis-x1" x1="{x0:.2}" y1="{y:.2}" x2="{x1:.2}" y2="{y:.2}" stroke="#bbb"/>"##);
    }
    if view.lo[0] <= 0.0 && 0.0 <= view.hi[0] {
        let (x, _) = view.px([0.0, 0.0]);
        let _ = writeln!(s, r##"<line id="axis-x2" x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{y1:.2}" stroke="#bbb"/>"##);
    }

    match data.polygon.len() {
        1 => {
            let (x, y) = view.px(data.polygon[0]);
            let _ = writeln!(s, r##"<circle id="tolerable-set" cx="{x:.2}" cy="{y:.2}" r="3" fill="#3a7bd5"/>"##);
        }
        2 => {
            let _ = writeln!(
                s,
                r##"<polyline id="tolerable-set" points="{}" fill="none" stroke="#3a7bd5" stroke-width="3"/>"##,
                points_attr(&view, &data.polygon)
            );
        }
        _ => {
            let _ = writeln!(
                s,
                r##"<polygon id="tolerable-set" points="{}" fill="#3a7bd5" fill-opacity="0.35" stroke="#3a7bd5"/>"##,
                points_attr(&view, &data.polygon)
            );
        }
    }

    if let Some([lo, hi]) = data.ive_box() {
        let (bx0, by0) = view.px(lo);
        let (bx1, by1) = view.px(hi);
        let _ = writeln!(
            s,
            r##"<rect id="ive-box" x="{bx0:.2}" y="{by1:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="#d9534f" stroke-dasharray="6 4"/>"##,
            bx1 - bx0,
            by0 - by1
        );
    }

    let (cx, cy) = view.px(data.x_hat);
    let _ = writeln!(s, r#"<circle id="x-hat" cx="{cx:.2}" cy="{cy:.2}" r="4" fill="black"/>"#);

    let lx = SIZE - MARGIN - 170.0;
    let ly = 44.0;
    let _ = writeln!(s, r#"<g id="legend">"#);
    let _ = writeln!(s, r##"<rect x="{lx}" y="{ly}" width="14" height="10" fill="#3a7bd5" fill-opacity="0.35" stroke="#3a7bd5"/>"##);
    let _ = writeln!(s, r#"<text x="{}" y="{}">tolerable set</text>"#, lx + 20.0, ly + 10.0);
    let _ = writeln!(s, r#"<circle cx="{}" cy="{}" r="4" fill="black"/>"#, lx + 7.0, ly + 25.0);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}">x_hat = ({:.4}, {:.4})</text>"#,
        lx + 20.0,
        ly + 29.0,
        data.x_hat[0],
        data.x_hat[1]
    );
    let _ = writeln!(s, r##"<rect x="{lx}" y="{}" width="14" height="10" fill="none" stroke="#d9534f" stroke-dasharray="3 2"/>"##, ly + 38.0);
    let _ = writeln!(s, r#"<text x="{}" y="{}">x_hat +- IVE, IVE = {:.4}</text>"#, lx + 20.0, ly + 48.0, data.ive);
    s.push_str("</g>\n</svg>\n");
    s
}
