//! Static SVG snapshots of the two planar examples.

use std::fmt::Write as _;

use crate::faces2d::{Faces2dConfig, SetDescription2D};
use crate::poly::rational::{int, rat};
use crate::poly::{F64Poly, MPoly};
use crate::rigidconv::renegar_derivative;
use crate::{example1, example2};

/// A drawing in world coordinates `[xmin, xmax] x [ymin, ymax]`.
pub struct Svg {
    window: [f64; 4],
    width: f64,
    height: f64,
    body: String,
}

fn num(v: f64) -> String {
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

impl Svg {
    pub fn new(window: [f64; 4], width: f64) -> Self {
        let height = width * (window[3] - window[2]) / (window[1] - window[0]);
        Svg {
            window,
            width,
            height,
            body: String::new(),
        }
    }

    fn px(&self, p: [f64; 2]) -> (f64, f64) {
        let [x0, x1, y0, y1] = self.window;
        (
            (p[0] - x0) / (x1 - x0) * self.width,
            (y1 - p[1]) / (y1 - y0) * self.height,
        )
    }

    fn path_d(&self, pts: &[[f64; 2]], closed: bool) -> String {
        let mut d = String::new();
        for (i, p) in pts.iter().enumerate() {
            let (x, y) = self.px(*p);
            let _ = write!(d, "{}{} {} ", if i == 0 { "M" } else { "L" }, num(x), num(y));
        }
        if closed {
            d.push('Z');
        }
        d.trim_end().to_string()
    }

    pub fn polygon(&mut self, pts: &[[f64; 2]], style: &str) {
        let d = self.path_d(pts, true);
        let _ = writeln!(self.body, r#"<path d="{d}" {style}/>"#);
    }

    pub fn line(&mut self, a: [f64; 2], b: [f64; 2], style: &str) {
        let d = self.path_d(&[a, b], false);
        let _ = writeln!(self.body, r#"<path d="{d}" {style}/>"#);
    }

    pub fn circle(&mut self, c: [f64; 2], r: f64, style: &str) {
        let (x, y) = self.px(c);
        let _ = writeln!(self.body, r#"<circle cx="{}" cy="{}" r="{}" {style}/>"#, num(x), num(y), num(r));
    }

    pub fn text(&mut self, at: [f64; 2], s: &str, style: &str) {
        let (x, y) = self.px(at);
        let esc = s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;");
        let _ = writeln!(self.body, r#"<text x="{}" y="{}" {style}>{esc}</text>"#, num(x), num(y));
    }

    pub fn axes(&mut self) {
        let [x0, x1, y0, y1] = self.window;
        let style = r##"stroke="#888" stroke-width="0.8""##;
        if y0 <= 0.0 && 0.0 <= y1 {
            self.line([x0, 0.0], [x1, 0.0], style);
        }
        if x0 <= 0.0 && 0.0 <= x1 {
            self.line([0.0, y0], [0.0, y1], style);
        }
    }

    /// Zero set of `f` by marching squares on an `nx x ny` grid.
    pub fn contour(&mut self, f: &F64Poly, nx: usize, ny: usize, style: &str) {
        let [x0, x1, y0, y1] = self.window;
        let xs: Vec<f64> = (0..=nx).map(|i| x0 + (x1 - x0) * i as f64 / nx as f64).collect();
        let ys: Vec<f64> = (0..=ny).map(|j| y0 + (y1 - y0) * j as f64 / ny as f64).collect();
        let v: Vec<Vec<f64>> = ys.iter().map(|&y| xs.iter().map(|&x| f.eval(&[x, y])).collect()).collect();
        let mut d = String::new();
        for j in 0..ny {
            for i in 0..nx {
                let c = [
                    ([xs[i], ys[j]], v[j][i]),
                    ([xs[i + 1], ys[j]], v[j][i + 1]),
                    ([xs[i + 1], ys[j + 1]], v[j + 1][i + 1]),
                    ([xs[i], ys[j + 1]], v[j + 1][i]),
                ];
                let mut cross = Vec::with_capacity(4);
                for k in 0..4 {
                    let (pa, fa) = c[k];
                    let (pb, fb) = c[(k + 1) % 4];
                    if (fa < 0.0) != (fb < 0.0) {
                        let t = fa / (fa - fb);
                        cross.push([pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1])]);
                    }
                }
                let pairs: Vec<([f64; 2], [f64; 2])> = match cross.len() {
                    2 => vec![(cross[0], cross[1])],
                    4 => {
                        // Saddle: decide by the centre value.
                        let centre = f.eval(&[0.5 * (xs[i] + xs[i + 1]), 0.5 * (ys[j] + ys[j + 1])]);
                        if (centre < 0.0) == (c[0].1 < 0.0) {
                            vec![(cross[0], cross[1]), (cross[2], cross[3])]
                        } else {
                            vec![(cross[0], cross[3]), (cross[1], cross[2])]
                        }
                    }
                    _ => vec![],
                };
                for (a, b) in pairs {
                    let (ax, ay) = self.px(a);
                    let (bx, by) = self.px(b);
                    let _ = write!(d, "M{} {} L{} {} ", num(ax), num(ay), num(bx), num(by));
                }
            }
        }
        if !d.is_empty() {
            let _ = writeln!(self.body, r#"<path d="{}" fill="none" {style}/>"#, d.trim_end());
        }
    }

    pub fn finish(&self, title: &str) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n<title>{title}</title>\n<rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n{body}</svg>\n",
            w = num(self.width),
            h = num(self.height),
            body = self.body
        )
    }
}

const GRID: usize = 400;

/// `S(p, 1 - t1)` with the curves `p = 0`, `p^(1) = 0`, `p^(2) = 0` and `c_1 = 0`.
pub fn example1_figure(cfg: &Faces2dConfig) -> String {
    let p = example1::p();
    let set = SetDescription2D::new(
        vec![p.clone(), MPoly::parse("1 - t1", 2).expect("valid")],
        [int(0), int(0)],
        [[example1::WINDOW[0], example1::WINDOW[1]], [example1::WINDOW[2], example1::WINDOW[3]]],
    )
    .expect("origin is interior");
    let mut svg = Svg::new(example1::WINDOW, 660.0);
    svg.polygon(&set.sample_boundary(cfg.rays.min(1024)), r##"fill="#cfe3f7" stroke="none""##);
    svg.axes();
    let c1 = example1::c1();
    svg.contour(&c1.to_f64_poly(), GRID, GRID / 2, r##"stroke="#999" stroke-width="1" stroke-dasharray="5 3""##);
    let colors = ["#1f4e9c", "#2e8b57", "#c0392b"];
    for (k, col) in colors.iter().enumerate() {
        let q = renegar_derivative(&p, k as u32).expect("degree 3");
        svg.contour(&q.to_f64_poly(), GRID, GRID / 2, &format!(r#"stroke="{col}" stroke-width="1.6""#));
    }
    svg.circle([1.0, 0.0], 3.5, r#"fill="black""#);
    svg.line([1.0, -2.5], [1.0, 2.5], r#"stroke="black" stroke-width="0.8" stroke-dasharray="2 3""#);
    let label = r#"font-family="sans-serif" font-size="12""#;
    svg.text([-3.8, 2.2], "S = S(p, 1 - t1) = S(A)", label);
    svg.text([-3.8, 1.9], "p = 0 (blue), p' = 0 (green), p'' = 0 (red), c1 = 0 (dashed)", label);
    svg.text([1.1, 0.15], "(1,0): mult 2, exposed by t1 = 1", label);
    svg.finish("Example 1: rigidly convex set of the cubic p")
}

/// The four-generator set with the non-exposed corner `(0,0)`.
pub fn example2_figure(cfg: &Faces2dConfig) -> String {
    let w = example2::WINDOW;
    let ip = example2::interior_point();
    let set = SetDescription2D::new(example2::four(), [ip[0].clone(), ip[1].clone()], [[w[0], w[1]], [w[2], w[3]]])
        .expect("interior point is strictly feasible");
    let mut svg = Svg::new(w, 600.0);
    svg.polygon(&set.sample_boundary(cfg.rays.min(1024)), r##"fill="#f7e0c8" stroke="#8a5a2b" stroke-width="1.4""##);
    svg.axes();
    svg.contour(
        &MPoly::parse("t2 - t1^3", 2).expect("valid").to_f64_poly(),
        GRID,
        GRID * 2 / 3,
        r##"stroke="#8a5a2b" stroke-width="0.8" stroke-dasharray="4 3""##,
    );
    // A tangent l_a for comparison.
    let a = rat(1, 2);
    let t = example2::tangent(&a);
    svg.contour(&t.to_f64_poly(), GRID, GRID * 2 / 3, r##"stroke="#2e8b57" stroke-width="1""##);
    svg.line([w[0], 0.0], [w[1], 0.0], r##"stroke="#c0392b" stroke-width="1.4" stroke-dasharray="6 3""##);
    svg.circle([0.0, 0.0], 4.0, r##"fill="white" stroke="#c0392b" stroke-width="2""##);
    let label = r#"font-family="sans-serif" font-size="12""#;
    svg.text([0.05, -0.12], "(0,0): face, not exposed", label);
    svg.text([-1.45, -0.35], "only support line: t2 = 0 (contact = segment)", label);
    svg.text([-1.45, 1.4], "S(t2 - t1^3, t1 + 1, t2, 1 - t2)", label);
    svg.finish("Example 2: a non-exposed face")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_well_formed() {
        let cfg = Faces2dConfig::default();
        let a = example1_figure(&cfg);
        assert_eq!(a, example1_figure(&cfg));
        assert!(a.starts_with("<svg") && a.trim_end().ends_with("</svg>"));
        let b = example2_figure(&cfg);
        assert!(b.contains("not exposed"));
    }

    #[test]
    fn contour_of_circle() {
        let mut s = Svg::new([-2.0, 2.0, -2.0, 2.0], 100.0);
        s.contour(&MPoly::parse("t1^2 + t2^2 - 1", 2).unwrap().to_f64_poly(), 20, 20, "");
        assert!(s.body.contains("<path"));
    }
}
