//! Faces and exposedness for planar convex sets `{g_i >= 0}`.
//!
//! The boundary is sampled by bisection along rays from an interior point.
//! Support cones come from those samples; chords and contact sets are then
//! measured exactly along rational lines. Verdicts are numerical at the
//! sampling resolution and say so in the report.

use std::f64::consts::PI;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::rational::{from_f64, int, parse_rational, to_f64, Rational};
use crate::poly::{F64Poly, MPoly, ParseError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Faces2dError {
    #[error("generators must be polynomials in 2 variables")]
    NotPlanar,
    #[error("interior point is not strictly feasible")]
    InteriorPointInfeasible,
    #[error("point is in the interior of the set, not on its boundary")]
    Interior,
    #[error("point lies outside the set")]
    Outside,
    #[error("invalid set description: {0}")]
    Invalid(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Faces2dConfig {
    pub rays: usize,
    /// Angular grid for normals and chords (steps per full turn).
    pub sweep: usize,
    pub tol: f64,
    pub contact_tol: f64,
}

impl Default for Faces2dConfig {
    fn default() -> Self {
        Faces2dConfig {
            rays: 4096,
            sweep: 4096,
            tol: 1e-8,
            contact_tol: 1e-5,
        }
    }
}

impl Faces2dConfig {
    pub fn resolution_label(&self) -> String {
        format!("numerical at resolution {} rays, 1/{} turn", self.rays, self.sweep)
    }
}

#[derive(Debug, Clone)]
pub struct SetDescription2D {
    generators: Vec<MPoly>,
    fast: Vec<F64Poly>,
    interior: [Rational; 2],
    bbox: [[f64; 2]; 2],
}

#[derive(Deserialize)]
struct RawSet {
    generators: Vec<String>,
    interior_point: Vec<serde_json::Value>,
    bbox: [[f64; 2]; 2],
}

fn value_to_rational(v: &serde_json::Value) -> Option<Rational> {
    match v {
        serde_json::Value::String(s) => parse_rational(s),
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Some(int(i))
            } else {
                n.as_f64().and_then(from_f64)
            }
        }
        _ => None,
    }
}

impl SetDescription2D {
    pub fn new(generators: Vec<MPoly>, interior: [Rational; 2], bbox: [[f64; 2]; 2]) -> Result<Self, Faces2dError> {
        if generators.iter().any(|g| g.nvars() != 2) {
            return Err(Faces2dError::NotPlanar);
        }
        if !(bbox[0][0] < bbox[0][1] && bbox[1][0] < bbox[1][1]) {
            return Err(Faces2dError::Invalid("empty bounding box".into()));
        }
        for g in &generators {
            if !g.eval(&interior).expect("two variables").is_positive() {
                return Err(Faces2dError::InteriorPointInfeasible);
            }
        }
        let fast = generators.iter().map(MPoly::to_f64_poly).collect();
        Ok(SetDescription2D {
            generators,
            fast,
            interior,
            bbox,
        })
    }

    pub fn from_json(src: &str) -> Result<Self, Faces2dError> {
        let raw: RawSet = serde_json::from_str(src).map_err(|e| Faces2dError::Invalid(e.to_string()))?;
        let gens = raw
            .generators
            .iter()
            .map(|s| MPoly::parse(s, 2))
            .collect::<Result<Vec<_>, _>>()?;
        if raw.interior_point.len() != 2 {
            return Err(Faces2dError::NotPlanar);
        }
        let ip: Vec<Rational> = raw
            .interior_point
            .iter()
            .map(|v| value_to_rational(v).ok_or_else(|| Faces2dError::Invalid(format!("bad coordinate {v}"))))
            .collect::<Result<_, _>>()?;
        Self::new(gens, [ip[0].clone(), ip[1].clone()], raw.bbox)
    }

    pub fn generators(&self) -> &[MPoly] {
        &self.generators
    }

    pub fn interior_point(&self) -> &[Rational; 2] {
        &self.interior
    }

    pub fn bbox(&self) -> [[f64; 2]; 2] {
        self.bbox
    }

    fn coeff_scale(&self) -> f64 {
        self.generators
            .iter()
            .map(|g| to_f64(&g.max_abs_coeff()))
            .fold(1.0, f64::max)
    }

    fn diameter(&self) -> f64 {
        let dx = self.bbox[0][1] - self.bbox[0][0];
        let dy = self.bbox[1][1] - self.bbox[1][0];
        (dx * dx + dy * dy).sqrt()
    }

    fn min_value_f64(&self, p: [f64; 2]) -> f64 {
        self.fast.iter().map(|g| g.eval(&p)).fold(f64::INFINITY, f64::min)
    }

    pub fn contains_f64(&self, p: [f64; 2]) -> bool {
        self.min_value_f64(p) >= 0.0
    }

    pub fn contains_exact(&self, p: &[Rational]) -> bool {
        self.generators
            .iter()
            .all(|g| !g.eval(p).expect("two variables").is_negative())
    }

    fn min_value_exact(&self, p: &[Rational]) -> Rational {
        self.generators
            .iter()
            .map(|g| g.eval(p).expect("two variables"))
            .min()
            .unwrap_or_else(|| int(1))
    }

    /// Boundary samples, one per ray, in ray order.
    pub fn sample_boundary(&self, rays: usize) -> Vec<[f64; 2]> {
        let c = [to_f64(&self.interior[0]), to_f64(&self.interior[1])];
        (0..rays)
            .map(|k| {
                let th = 2.0 * PI * (k as f64) / (rays as f64);
                let u = [th.cos(), th.sin()];
                let rmax = self.exit_distance(c, u);
                let at = |r: f64| [c[0] + r * u[0], c[1] + r * u[1]];
                if self.contains_f64(at(rmax)) {
                    return at(rmax);
                }
                let (mut lo, mut hi) = (0.0, rmax);
                for _ in 0..64 {
                    let mid = 0.5 * (lo + hi);
                    if self.contains_f64(at(mid)) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                at(lo)
            })
            .collect()
    }

    fn exit_distance(&self, c: [f64; 2], u: [f64; 2]) -> f64 {
        let mut r = f64::INFINITY;
        for i in 0..2 {
            if u[i] > 0.0 {
                r = r.min((self.bbox[i][1] - c[i]) / u[i]);
            } else if u[i] < 0.0 {
                r = r.min((self.bbox[i][0] - c[i]) / u[i]);
            }
        }
        r.max(0.0)
    }

    /// `sup { t >= 0 : x + t u in S }` by exact bisection, or `0` when
    /// `x + probe u` already leaves `S`.
    fn exact_extent(&self, x: &[Rational], u: &[Rational], probe: f64, tmax: f64) -> f64 {
        let at = |t: f64| -> Vec<Rational> {
            let tq = from_f64(t).expect("finite");
            vec![&x[0] + &tq * &u[0], &x[1] + &tq * &u[1]]
        };
        if !self.contains_exact(&at(probe)) {
            return 0.0;
        }
        if self.contains_exact(&at(tmax)) {
            return tmax;
        }
        let (mut lo, mut hi) = (probe, tmax);
        for _ in 0..50 {
            let mid = 0.5 * (lo + hi);
            if self.contains_exact(&at(mid)) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }
}

/// Rational approximation with a small denominator when within `1e-12`,
/// otherwise the exact binary value.
pub fn snap(v: f64) -> Rational {
    for q in 1..=64i64 {
        let p = (v * q as f64).round();
        if (v - p / q as f64).abs() <= 1e-12 {
            return Rational::new((p as i64).into(), q.into());
        }
    }
    from_f64(v).expect("finite")
}

/// Direction scaled so its largest component is `±1`, then snapped.
fn snap_direction(g: [f64; 2]) -> [Rational; 2] {
    let m = g[0].abs().max(g[1].abs());
    [snap(g[0] / m), snap(g[1] / m)]
}

fn angle_norm(a: f64) -> f64 {
    let mut a = a % (2.0 * PI);
    if a <= -PI {
        a += 2.0 * PI;
    } else if a > PI {
        a -= 2.0 * PI;
    }
    a
}

fn unit(th: f64) -> [f64; 2] {
    [th.cos(), th.sin()]
}

/// Inward normals `g` at a boundary point with `g . (y - x) >= -tol` on all samples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupportCone {
    pub point: [f64; 2],
    /// Arc `[lo, hi]` of normal angles (radians); `lo > hi` means empty.
    pub arc: [f64; 2],
    /// Grid normals inside the arc, or the arc midpoint when the arc is
    /// narrower than the grid.
    pub normals: Vec<[f64; 2]>,
    /// Arc narrower than one grid step: a single support line.
    pub single_line: bool,
}

impl SupportCone {
    pub fn width(&self) -> f64 {
        self.arc[1] - self.arc[0]
    }

    pub fn midpoint(&self) -> [f64; 2] {
        unit(0.5 * (self.arc[0] + self.arc[1]))
    }

    /// Whether direction `g` lies in the arc widened by `slack` radians.
    pub fn contains_direction(&self, g: [f64; 2], slack: f64) -> bool {
        let th = g[1].atan2(g[0]);
        let mid = 0.5 * (self.arc[0] + self.arc[1]);
        angle_norm(th - mid).abs() <= 0.5 * self.width() + slack
    }
}

fn support_cone_at(s: &SetDescription2D, x: [f64; 2], samples: &[[f64; 2]], cfg: &Faces2dConfig) -> SupportCone {
    let c = [to_f64(&s.interior[0]), to_f64(&s.interior[1])];
    let reference = (c[1] - x[1]).atan2(c[0] - x[0]);
    let tol = cfg.tol * s.diameter().max(1.0);
    let (mut lo, mut hi) = (-PI / 2.0, PI / 2.0);
    for y in samples {
        let d = [y[0] - x[0], y[1] - x[1]];
        let r = (d[0] * d[0] + d[1] * d[1]).sqrt();
        if r < 1e-12 {
            continue;
        }
        let psi = angle_norm(d[1].atan2(d[0]) - reference);
        let w = (tol / r).min(1.0).asin();
        lo = lo.max(psi - PI / 2.0 - w);
        hi = hi.min(psi + PI / 2.0 + w);
    }
    let arc = [reference + lo, reference + hi];
    let step = 2.0 * PI / cfg.sweep as f64;
    let mut normals = Vec::new();
    if arc[0] <= arc[1] {
        let k0 = (arc[0] / step).ceil() as i64;
        let k1 = (arc[1] / step).floor() as i64;
        for k in k0..=k1 {
            normals.push(unit(k as f64 * step));
        }
        if normals.is_empty() {
            normals.push(unit(0.5 * (arc[0] + arc[1])));
        }
    }
    SupportCone {
        point: x,
        arc,
        single_line: arc[0] <= arc[1] && arc[1] - arc[0] < step,
        normals,
    }
}

fn point_f64(x: &[Rational]) -> [f64; 2] {
    [to_f64(&x[0]), to_f64(&x[1])]
}

fn boundary_status(s: &SetDescription2D, x: &[Rational], cfg: &Faces2dConfig) -> Result<(), Faces2dError> {
    let m = to_f64(&s.min_value_exact(x));
    let tol = cfg.tol * s.coeff_scale();
    if m > tol {
        Err(Faces2dError::Interior)
    } else if m < -tol {
        Err(Faces2dError::Outside)
    } else {
        Ok(())
    }
}

/// Support lines through the boundary point `x`.
pub fn support_lines_through(s: &SetDescription2D, x: &[Rational], cfg: &Faces2dConfig) -> Result<SupportCone, Faces2dError> {
    boundary_status(s, x, cfg)?;
    let samples = s.sample_boundary(cfg.rays);
    Ok(support_cone_at(s, point_f64(x), &samples, cfg))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Face2D {
    Point { point: [f64; 2] },
    Segment { a: [f64; 2], b: [f64; 2] },
    Full,
}

/// Exact-coordinate face, kept alongside the float view.
#[derive(Debug, Clone, PartialEq)]
pub struct FaceExact {
    pub face: Face2D,
    pub ends: Vec<Vec<Rational>>,
}

impl FaceExact {
    /// A point in the relative interior (midpoint for segments).
    pub fn base_point(&self) -> Option<Vec<Rational>> {
        match self.ends.len() {
            1 => Some(self.ends[0].clone()),
            2 => Some(
                self.ends[0]
                    .iter()
                    .zip(&self.ends[1])
                    .map(|(a, b)| (a + b) / int(2))
                    .collect(),
            ),
            _ => None,
        }
    }
}

/// The smallest face containing `x`, via chords through `x`.
pub fn face_of_point_2d(s: &SetDescription2D, x: &[Rational], cfg: &Faces2dConfig) -> Result<FaceExact, Faces2dError> {
    let min = s.min_value_exact(x);
    let tol = cfg.tol * s.coeff_scale();
    if to_f64(&min) < -tol {
        return Err(Faces2dError::Outside);
    }
    if min.is_positive() {
        return Ok(FaceExact {
            face: Face2D::Full,
            ends: Vec::new(),
        });
    }
    let xf = point_f64(x);
    let samples = s.sample_boundary(cfg.rays);
    let cone = support_cone_at(s, xf, &samples, cfg);

    let mut dirs: Vec<[Rational; 2]> = Vec::new();
    let half = cfg.sweep / 2;
    for k in 0..half {
        dirs.push(snap_direction(unit(2.0 * PI * k as f64 / cfg.sweep as f64)));
    }
    for y in &samples {
        let d = [y[0] - xf[0], y[1] - xf[1]];
        if d[0].abs().max(d[1].abs()) > 1e-9 {
            dirs.push(snap_direction(d));
        }
    }
    if cone.arc[0] <= cone.arc[1] {
        for th in cone.arc {
            dirs.push(snap_direction(unit(th + PI / 2.0)));
        }
    }
    dirs.sort_by(|a, b| a.cmp(b));
    dirs.dedup();

    let diam = s.diameter();
    let probe = 1e-9 * diam.max(1.0);
    let mut best: Option<(f64, Vec<Rational>, Vec<Rational>)> = None;
    for u in &dirs {
        let uf = [to_f64(&u[0]), to_f64(&u[1])];
        let un = (uf[0] * uf[0] + uf[1] * uf[1]).sqrt();
        // Cheap float rejection before exact work.
        let pre = 1e-6 / un;
        let plus = s.min_value_f64([xf[0] + pre * uf[0], xf[1] + pre * uf[1]]);
        let minus = s.min_value_f64([xf[0] - pre * uf[0], xf[1] - pre * uf[1]]);
        if plus < -1e-10 * s.coeff_scale() || minus < -1e-10 * s.coeff_scale() {
            continue;
        }
        let neg = [-u[0].clone(), -u[1].clone()];
        let tmax = diam / un;
        let tp = s.exact_extent(x, u, probe / un, tmax);
        if tp == 0.0 {
            continue;
        }
        let tm = s.exact_extent(x, &neg, probe / un, tmax);
        if tm == 0.0 {
            continue;
        }
        let len = (tp + tm) * un;
        if best.as_ref().is_none_or(|b| len > b.0) {
            let tpq = from_f64(tp).expect("finite");
            let tmq = from_f64(tm).expect("finite");
            let a = vec![&x[0] - &tmq * &u[0], &x[1] - &tmq * &u[1]];
            let b = vec![&x[0] + &tpq * &u[0], &x[1] + &tpq * &u[1]];
            best = Some((len, a, b));
        }
    }
    Ok(match best {
        Some((_, a, b)) => FaceExact {
            face: Face2D::Segment {
                a: point_f64(&a),
                b: point_f64(&b),
            },
            ends: vec![a, b],
        },
        None => FaceExact {
            face: Face2D::Point { point: xf },
            ends: vec![x.to_vec()],
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FaceReport {
    pub face: Face2D,
    pub exposed: bool,
    /// `l(t) = g . (t - base)` with `l >= 0` on `S`.
    pub exposing_line: Option<MPoly>,
    pub support_cone: SupportCone,
    /// Exact contact set `S ∩ {l = 0}` of the first candidate line (or the
    /// exposing line when exposed), as a segment.
    pub contact: Option<[[f64; 2]; 2]>,
    pub hausdorff: Option<f64>,
    pub resolution: String,
}

impl FaceReport {
    pub fn contact_is_segment(&self, min_len: f64) -> bool {
        self.contact.is_some_and(|[a, b]| ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt() > min_len)
    }
}

fn dist_point_segment(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let ab = [b[0] - a[0], b[1] - a[1]];
    let ap = [p[0] - a[0], p[1] - a[1]];
    let len2 = ab[0] * ab[0] + ab[1] * ab[1];
    let t = if len2 == 0.0 {
        0.0
    } else {
        ((ap[0] * ab[0] + ap[1] * ab[1]) / len2).clamp(0.0, 1.0)
    };
    let q = [a[0] + t * ab[0] - p[0], a[1] + t * ab[1] - p[1]];
    (q[0] * q[0] + q[1] * q[1]).sqrt()
}

fn hausdorff_segments(s1: [[f64; 2]; 2], s2: [[f64; 2]; 2]) -> f64 {
    let d1 = s1.iter().map(|&p| dist_point_segment(p, s2[0], s2[1])).fold(0.0, f64::max);
    let d2 = s2.iter().map(|&p| dist_point_segment(p, s1[0], s1[1])).fold(0.0, f64::max);
    d1.max(d2)
}

/// Is `face` exposed? Candidate normals come from the support cone at the
/// face's relative-interior point; for each, the contact set along the
/// rational line is computed exactly and compared with the face.
pub fn is_exposed_2d(s: &SetDescription2D, face: &FaceExact, cfg: &Faces2dConfig) -> FaceReport {
    let samples = s.sample_boundary(cfg.rays);
    let Some(base) = face.base_point() else {
        return FaceReport {
            face: face.face.clone(),
            exposed: false,
            exposing_line: None,
            support_cone: SupportCone {
                point: [f64::NAN; 2],
                arc: [1.0, 0.0],
                normals: Vec::new(),
                single_line: false,
            },
            contact: None,
            hausdorff: None,
            resolution: cfg.resolution_label(),
        };
    };
    let bf = point_f64(&base);
    let cone = support_cone_at(s, bf, &samples, cfg);
    let face_seg = match &face.face {
        Face2D::Point { point } => [*point, *point],
        Face2D::Segment { a, b } => [*a, *b],
        Face2D::Full => unreachable!("full faces have no base point"),
    };

    // Grid normals nearest the arc midpoint first (they snap to short
    // rational directions), then the midpoint and the arc ends.
    let mut cands: Vec<[f64; 2]> = Vec::new();
    if cone.arc[0] <= cone.arc[1] {
        let mid = 0.5 * (cone.arc[0] + cone.arc[1]);
        let mut grid = cone.normals.clone();
        grid.sort_by(|a, b| {
            let da = angle_norm(a[1].atan2(a[0]) - mid).abs();
            let db = angle_norm(b[1].atan2(b[0]) - mid).abs();
            da.total_cmp(&db)
        });
        let stride = (grid.len() / 32).max(1);
        cands.extend(grid.into_iter().step_by(stride));
        cands.push(cone.midpoint());
        cands.push(unit(cone.arc[0]));
        cands.push(unit(cone.arc[1]));
    }

    let tol = cfg.tol * s.diameter().max(1.0);
    let diam = s.diameter();
    let mut first: Option<([[f64; 2]; 2], f64)> = None;
    for g in cands {
        let gq = snap_direction(g);
        let gf = [to_f64(&gq[0]), to_f64(&gq[1])];
        let gn = (gf[0] * gf[0] + gf[1] * gf[1]).sqrt();
        let supports = samples
            .iter()
            .all(|y| (gf[0] * (y[0] - bf[0]) + gf[1] * (y[1] - bf[1])) / gn >= -tol);
        if !supports {
            continue;
        }
        let v = [-gq[1].clone(), gq[0].clone()];
        let vn = gn;
        let neg = [gq[1].clone(), -gq[0].clone()];
        let tp = s.exact_extent(&base, &v, 0.0, diam / vn);
        let tm = s.exact_extent(&base, &neg, 0.0, diam / vn);
        let contact = [
            [bf[0] - tm * to_f64(&v[0]), bf[1] - tm * to_f64(&v[1])],
            [bf[0] + tp * to_f64(&v[0]), bf[1] + tp * to_f64(&v[1])],
        ];
        let h = hausdorff_segments(contact, face_seg);
        if first.is_none() {
            first = Some((contact, h));
        }
        if h <= cfg.contact_tol {
            let c0 = -(&gq[0] * &base[0] + &gq[1] * &base[1]);
            let line = MPoly::affine(c0, &gq);
            return FaceReport {
                face: face.face.clone(),
                exposed: true,
                exposing_line: Some(line),
                support_cone: cone,
                contact: Some(contact),
                hausdorff: Some(h),
                resolution: cfg.resolution_label(),
            };
        }
    }
    FaceReport {
        face: face.face.clone(),
        exposed: false,
        exposing_line: None,
        support_cone: cone,
        contact: first.map(|f| f.0),
        hausdorff: first.map(|f| f.1),
        resolution: cfg.resolution_label(),
    }
}

/// Evaluates a report's exposing line at `y`.
pub fn line_value(line: &MPoly, y: [f64; 2]) -> f64 {
    line.eval_f64(&y)
}

/// Whether `line` vanishes (exactly) at the rational point `y`.
pub fn line_vanishes(line: &MPoly, y: &[Rational]) -> bool {
    line.eval(y).map(|v| v.is_zero()).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational::rat;
    use crate::{example1, example2};

    fn four_set() -> SetDescription2D {
        SetDescription2D::new(example2::four(), [rat(1, 2), rat(1, 2)], [[-1.5, 1.5], [-0.5, 1.5]]).unwrap()
    }

    fn cubic_set() -> SetDescription2D {
        let gens = vec![example1::p(), MPoly::parse("1 - t1", 2).unwrap()];
        SetDescription2D::new(gens, [int(0), int(0)], [[-4.0, 7.0], [-2.5, 2.5]]).unwrap()
    }

    fn square() -> SetDescription2D {
        let gens = ["t1", "1 - t1", "t2", "1 - t2"].iter().map(|s| MPoly::parse(s, 2).unwrap()).collect();
        SetDescription2D::new(gens, [rat(1, 2), rat(1, 2)], [[-1.0, 2.0], [-1.0, 2.0]]).unwrap()
    }

    fn cfg() -> Faces2dConfig {
        Faces2dConfig {
            rays: 1024,
            sweep: 1024,
            ..Faces2dConfig::default()
        }
    }

    #[test]
    fn support_examples() {
        let c = support_lines_through(&four_set(), &[int(0), int(0)], &cfg()).unwrap();
        assert!(c.single_line, "{:?}", c.arc);
        let g = c.normals[0];
        assert!(g[0].abs() < 1e-9 && (g[1] - 1.0).abs() < 1e-9);

        let c = support_lines_through(&square(), &[int(0), int(0)], &cfg()).unwrap();
        assert!((c.width() - PI / 2.0).abs() < 1e-6);
        assert!(c.contains_direction([1.0, 0.0], 1e-9) && c.contains_direction([0.0, 1.0], 1e-9));

        let c = support_lines_through(&cubic_set(), &[int(1), int(0)], &cfg()).unwrap();
        assert!(c.contains_direction([-1.0, 0.0], 0.0));

        assert!(matches!(
            support_lines_through(&square(), &[rat(1, 2), rat(1, 2)], &cfg()),
            Err(Faces2dError::Interior)
        ));
        assert!(matches!(
            support_lines_through(&square(), &[int(3), int(3)], &cfg()),
            Err(Faces2dError::Outside)
        ));
    }

    #[test]
    fn faces_of_points() {
        let s = four_set();
        let f = face_of_point_2d(&s, &[rat(-1, 2), int(0)], &cfg()).unwrap();
        match f.face {
            Face2D::Segment { a, b } => {
                let (l, r) = if a[0] < b[0] { (a, b) } else { (b, a) };
                assert!((l[0] + 1.0).abs() < 1e-9 && r[0].abs() < 1e-9 && l[1] == 0.0 && r[1] == 0.0);
            }
            other => panic!("{other:?}"),
        }
        let f = face_of_point_2d(&s, &[int(0), int(0)], &cfg()).unwrap();
        assert!(matches!(f.face, Face2D::Point { .. }));
        let f = face_of_point_2d(&s, &[rat(1, 2), rat(1, 2)], &cfg()).unwrap();
        assert_eq!(f.face, Face2D::Full);
        assert!(face_of_point_2d(&s, &[int(1), int(-1)], &cfg()).is_err());
    }

    #[test]
    fn exposedness() {
        let s = four_set();
        let f = face_of_point_2d(&s, &[int(0), int(0)], &cfg()).unwrap();
        let r = is_exposed_2d(&s, &f, &cfg());
        assert!(!r.exposed);
        assert!(r.support_cone.single_line);
        assert!(r.contact_is_segment(0.5));

        let f = face_of_point_2d(&s, &[rat(-1, 2), int(0)], &cfg()).unwrap();
        let r = is_exposed_2d(&s, &f, &cfg());
        assert!(r.exposed);
        assert_eq!(r.exposing_line.unwrap(), MPoly::parse("t2", 2).unwrap());

        let c = cubic_set();
        let f = face_of_point_2d(&c, &[int(1), int(0)], &cfg()).unwrap();
        let r = is_exposed_2d(&c, &f, &cfg());
        assert!(r.exposed);
        assert_eq!(r.exposing_line.unwrap(), MPoly::parse("1 - t1", 2).unwrap());
    }

    #[test]
    fn json_input() {
        let src = r#"{"generators": ["t1", "1 - t1", "t2", "1 - t2"], "interior_point": ["1/2", 0.5], "bbox": [[-1, 2], [-1, 2]]}"#;
        let s = SetDescription2D::from_json(src).unwrap();
        assert_eq!(s.interior_point()[1], rat(1, 2));
        let bad = r#"{"generators": ["t1"], "interior_point": [0, 0], "bbox": [[-1, 2], [-1, 2]]}"#;
        assert!(matches!(SetDescription2D::from_json(bad), Err(Faces2dError::InteriorPointInfeasible)));
    }
}
