//! End-to-end regression of the two worked examples.
//!
//! Every criterion is a list of named checks with an expected value, where
//! that value comes from (`paper`, `derived` or `elementary`), the computed
//! value and a verdict. Reports are deterministic: runtimes are only
//! included when asked for.

use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::faces2d::{face_of_point_2d, is_exposed_2d, Face2D, Faces2dConfig, SetDescription2D};
use crate::lasserre::{
    nesting_check, qm_member, qm_problem, relaxation_member, relaxation_problem, tangent_witness, verify_dual_certificate,
    verify_qm_certificate_exact, CertTolerances, Generators, QmOutcome, RelaxOutcome,
};
use crate::linmat::{
    char_poly_coeffs, eval_pencil, exposing_functional, face_of_point, is_psd_exact, spectrahedron_member, FaceStatus,
    LinMatPoly, QMatrix,
};
use crate::poly::rational::{int, parse_rational, rat, to_f64, Rational};
use crate::poly::{Monomial, MPoly};
use crate::rigidconv::{check_rz, default_directions, exposing_tangent, hyperbolicity_cone_member, mult, renegar_derivative};
use crate::sdp::{self, verify_solution, SDPProblem, SolverConfig, Status};
use crate::{example1, example2};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReproduceConfig {
    pub solver: SolverConfig,
    pub cert: CertTolerances,
    pub faces: Faces2dConfig,
    /// Directions for the real-zero check.
    pub directions: usize,
    pub seed: u64,
    /// Groups (`symbolic`, `faces`, `sdp`) or criteria (`c3`) to leave out.
    pub skip: Vec<String>,
    pub timings: bool,
}

impl Default for ReproduceConfig {
    fn default() -> Self {
        ReproduceConfig {
            solver: SolverConfig::default(),
            cert: CertTolerances::default(),
            faces: Faces2dConfig::default(),
            directions: 256,
            seed: 20_240_917,
            skip: Vec::new(),
            timings: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Paper,
    Derived,
    Elementary,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub criterion: u8,
    pub source: Source,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub stalled: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionResult {
    pub criterion: u8,
    pub title: &'static str,
    pub pass: bool,
    pub limit_seconds: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_seconds: Option<f64>,
    #[serde(skip)]
    pub elapsed: f64,
    #[serde(skip)]
    pub checks: Vec<CheckRecord>,
}

impl CriterionResult {
    pub fn within_limit(&self) -> bool {
        self.elapsed < self.limit_seconds
    }

    pub fn stalled(&self) -> bool {
        self.checks.iter().any(|c| c.stalled)
    }

    pub fn failures(&self) -> Vec<&CheckRecord> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PaperReport {
    pub schema: u32,
    pub pass: bool,
    pub complete: bool,
    pub config: ReproduceConfig,
    pub warnings: Vec<String>,
    pub skipped: Vec<u8>,
    pub criteria: Vec<CriterionResult>,
    /// Sorted by name.
    pub checks: Vec<CheckRecord>,
}

impl PaperReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn any_stalled(&self) -> bool {
        self.checks.iter().any(|c| c.stalled)
    }
}

pub const CRITERIA: [(u8, &str, &str, f64); 10] = [
    (1, "characteristic polynomial coefficients", "symbolic", 1.0),
    (2, "Renegar chain and multiplicities", "symbolic", 1.0),
    (3, "equality of the four descriptions on a grid", "symbolic", 60.0),
    (4, "real-zero check and hyperbolicity cone", "symbolic", 30.0),
    (5, "quadratic-module certificates for tangents", "sdp", 30.0),
    (6, "non-exposed face detection", "faces", 60.0),
    (7, "halving probe refutes a tangent", "sdp", 600.0),
    (8, "relaxation contains S and is nested", "sdp", 600.0),
    (9, "kernel faces of random pencils are exposed", "symbolic", 300.0),
    (10, "solver verdicts carry valid certificates", "sdp", 300.0),
];

fn is_skipped(c: u8, group: &str, skip: &[String]) -> bool {
    skip.iter().any(|s| {
        let s = s.trim().to_ascii_lowercase();
        s == group || s == format!("c{c}") || s == c.to_string()
    })
}

struct Checks {
    criterion: u8,
    out: Vec<CheckRecord>,
}

impl Checks {
    fn new(criterion: u8) -> Self {
        Checks {
            criterion,
            out: Vec::new(),
        }
    }

    fn push(&mut self, name: &str, source: Source, expected: impl ToString, computed: impl ToString, pass: bool) {
        self.out.push(CheckRecord {
            name: format!("c{:02}.{name}", self.criterion),
            criterion: self.criterion,
            source,
            expected: expected.to_string(),
            computed: computed.to_string(),
            pass,
            stalled: false,
        });
    }

    fn stalled(&mut self, name: &str, source: Source, expected: impl ToString, computed: impl ToString) {
        self.push(name, source, expected, computed, false);
        self.out.last_mut().expect("just pushed").stalled = true;
    }

    fn error(&mut self, name: &str, err: impl std::fmt::Display) {
        self.push(name, Source::Elementary, "no error", format!("error: {err}"), false);
    }
}

fn parse2(s: &str) -> MPoly {
    MPoly::parse(s, 2).expect("valid polynomial")
}

fn sci(v: f64) -> String {
    format!("{v:.3e}")
}

/// `c * q` for some nonzero rational `c`?
fn proportional(l: &MPoly, q: &MPoly) -> bool {
    let Some((m, c)) = q.terms().next() else {
        return l.is_zero();
    };
    let lc = l.coeff(m);
    if lc.is_zero() {
        return false;
    }
    &q.scale(&(lc / c)) == l
}

/// Rational points `(r^2 - 1, ±r(r^2 - 2))`, `r = k/8`, on the boundary loop of Example 1.
pub fn example1_boundary_points() -> Vec<Vec<Rational>> {
    let mut out = Vec::new();
    for k in 1..=10 {
        let r = rat(k, 8);
        let t1 = &r * &r - int(1);
        let t2 = &r * (&r * &r - int(2));
        out.push(vec![t1.clone(), t2.clone()]);
        out.push(vec![t1, -t2]);
    }
    out
}

fn c1_charpoly(ch: &mut Checks) {
    let cp = char_poly_coeffs(&example1::pencil());
    let want = [example1::p(), example1::c1(), example1::c2()];
    for (i, w) in want.iter().enumerate() {
        let got = cp.c.get(i).cloned().unwrap_or_else(|| MPoly::zero(2));
        ch.push(&format!("c{i}"), Source::Paper, w, &got, &got == w);
    }
}

fn c2_renegar(ch: &mut Checks) {
    let p = example1::p();
    for (k, want) in [(1u32, "-t1^2 - t2^2 - 2*t1 + 3"), (2, "6 - t1")] {
        let want = parse2(want);
        match renegar_derivative(&p, k) {
            Ok(got) => ch.push(&format!("p{k}"), Source::Paper, &want, &got, got == want),
            Err(e) => ch.error(&format!("p{k}"), e),
        }
    }
    let node = [int(1), int(0)];
    match mult(&p, &node) {
        Ok(m) => ch.push("mult_at_node", Source::Paper, 2, m, m == 2),
        Err(e) => ch.error("mult_at_node", e),
    }
    let pts = example1_boundary_points();
    let mut bad = Vec::new();
    for x in &pts {
        match mult(&p, x) {
            Ok(1) => {}
            other => bad.push(format!("({}, {}): {other:?}", x[0], x[1])),
        }
    }
    ch.push(
        "mult_one_on_boundary",
        Source::Derived,
        format!("mult = 1 at {} points", pts.len()),
        if bad.is_empty() {
            format!("mult = 1 at {} points", pts.len())
        } else {
            bad.join("; ")
        },
        bad.is_empty(),
    );
    match exposing_tangent(&p, &node) {
        Ok(t) => {
            let l = t.linear_form();
            let want = parse2("1 - t1");
            ch.push("tangent_at_node", Source::Paper, "{t1 = 1}", format!("{{{l} = 0}}"), proportional(&l, &want));
        }
        Err(e) => ch.error("tangent_at_node", e),
    }
}

fn c3_descriptions(ch: &mut Checks) {
    let a = example1::pencil();
    let (p, c1, c2) = (example1::p(), example1::c1(), example1::c2());
    let one_minus = parse2("1 - t1");
    let mut mismatch = [0usize; 3];
    let mut first: [Option<String>; 3] = [None, None, None];
    let mut members = 0usize;
    for i in 0..=200i64 {
        for j in 0..=200i64 {
            let x = [rat(-800 + 11 * i, 200), rat(-500 + 5 * j, 200)];
            let in_a = spectrahedron_member(&a, &x).expect("3x3 pencil");
            members += usize::from(in_a);
            let v0 = p.eval(&x).expect("2 vars");
            let v1 = -c1.eval(&x).expect("2 vars");
            let v2 = c2.eval(&x).expect("2 vars");
            let lin = one_minus.eval(&x).expect("2 vars");
            let nonneg = |v: &Rational| !v.is_negative();
            let verdicts = [
                nonneg(&v0) && nonneg(&v1) && nonneg(&v2),
                nonneg(&v0) && nonneg(&v1),
                nonneg(&v0) && nonneg(&lin),
            ];
            for k in 0..3 {
                if verdicts[k] != in_a {
                    mismatch[k] += 1;
                    if first[k].is_none() {
                        first[k] = Some(format!("({}, {})", x[0], x[1]));
                    }
                }
            }
        }
    }
    let names = ["S(A)=S(c0,-c1,c2)", "S(A)=S(c0,-c1)", "S(A)=S(p,1-t1)"];
    for k in 0..3 {
        let computed = match &first[k] {
            None => "0 mismatches of 40401".to_string(),
            Some(at) => format!("{} mismatches of 40401, first at {at}", mismatch[k]),
        };
        ch.push(names[k], Source::Paper, "0 mismatches of 40401", computed, mismatch[k] == 0);
    }
    ch.push("grid_has_members", Source::Elementary, "some grid points in S", format!("{members} in S"), members > 0);
}

fn c4_rz(ch: &mut Checks, cfg: &ReproduceConfig) {
    let p = example1::p();
    let dirs = default_directions(2, cfg.directions);
    match check_rz(&p, &[int(0), int(0)], &dirs) {
        Ok(r) => ch.push(
            "rz_at_origin",
            Source::Paper,
            format!("real-zero along {} directions", cfg.directions),
            format!(
                "{} of {} directions real-rooted",
                r.verdicts.iter().filter(|v| **v).count(),
                r.directions.len()
            ),
            r.overall && r.directions.len() == cfg.directions,
        ),
        Err(e) => ch.error("rz_at_origin", e),
    }
    let big_p = p.homogenize(3).expect("degree 3");
    let e = [int(0), int(0), int(1)];
    let a = example1::pencil();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut pts: Vec<Vec<Rational>> = (0..500)
        .map(|_| {
            vec![
                rat(-4096 + 11 * rng.random_range(0..=1024i64), 1024),
                rat(-2560 + 5 * rng.random_range(0..=1024i64), 1024),
            ]
        })
        .collect();
    let sampled = pts.len();
    pts.extend(example1_boundary_points());
    pts.push(vec![int(1), int(0)]);
    let mut bad = Vec::new();
    let mut inside = 0;
    for x in &pts {
        let xh = [x[0].clone(), x[1].clone(), int(1)];
        let cone = hyperbolicity_cone_member(&big_p, &e, &xh);
        let planar = spectrahedron_member(&a, x).expect("3x3 pencil");
        inside += usize::from(planar);
        match cone {
            Ok(c) if c == planar => {}
            other => bad.push(format!("({}, {}): cone {other:?}, planar {planar}", x[0], x[1])),
        }
    }
    ch.push(
        "hyperbolicity_cone_agrees",
        Source::Paper,
        format!("agreement at {sampled} sampled + {} boundary points", pts.len() - sampled),
        if bad.is_empty() {
            format!("agreement at all {} points ({inside} in S)", pts.len())
        } else {
            format!("{} disagreements, first {}", bad.len(), bad[0])
        },
        bad.is_empty(),
    );
}

fn tangent_a_values() -> Vec<Rational> {
    vec![int(0), rat(1, 4), rat(1, 2), rat(3, 4), int(1)]
}

fn c5_qm(ch: &mut Checks, cfg: &ReproduceConfig) {
    let gens = Generators::new(2, example2::triple()).expect("valid generators");
    for a in tangent_a_values() {
        let ell = example2::tangent(&a);
        let name = format!("qm_member[a={a}]");
        match qm_member(&gens, 3, &ell, &cfg.solver, &cfg.cert) {
            Ok(QmOutcome::Certified { certificate }) => ch.push(
                &name,
                Source::Paper,
                format!("CERTIFIED, residual <= {}", sci(cfg.cert.cert_tol)),
                format!("CERTIFIED, residual {}", sci(certificate.residual)),
                certificate.residual <= cfg.cert.cert_tol,
            ),
            Ok(QmOutcome::Undecided { reason }) => ch.stalled(&name, Source::Paper, "CERTIFIED", format!("UNDECIDED: {reason}")),
            Ok(other) => ch.push(&name, Source::Paper, "CERTIFIED", other.label(), false),
            Err(e) => ch.error(&name, e),
        }
        let name = format!("exact_witness[a={a}]");
        match verify_qm_certificate_exact(&gens, 3, &ell, &tangent_witness(&a)) {
            Ok(ok) => ch.push(&name, Source::Paper, "exact identity", if ok { "exact identity" } else { "identity fails" }, ok),
            Err(e) => ch.error(&name, e),
        }
    }
}

fn example1_set() -> SetDescription2D {
    let w = example1::WINDOW;
    SetDescription2D::new(vec![example1::p(), parse2("1 - t1")], [int(0), int(0)], [[w[0], w[1]], [w[2], w[3]]])
        .expect("origin is interior")
}

fn four_set() -> SetDescription2D {
    let w = example2::WINDOW;
    let ip = example2::interior_point();
    SetDescription2D::new(example2::four(), [ip[0].clone(), ip[1].clone()], [[w[0], w[1]], [w[2], w[3]]])
        .expect("interior point is strictly feasible")
}

fn c6_faces(ch: &mut Checks, cfg: &ReproduceConfig) {
    let fc = &cfg.faces;
    let s = four_set();
    match face_of_point_2d(&s, &[int(0), int(0)], fc) {
        Ok(face) => {
            ch.push(
                "corner_face",
                Source::Paper,
                "{(0,0)}",
                serde_json::to_string(&face.face).expect("serializes"),
                matches!(face.face, Face2D::Point { .. }),
            );
            let r = is_exposed_2d(&s, &face, fc);
            ch.push("corner_exposed", Source::Paper, false, r.exposed, !r.exposed);
            let n = r.support_cone.normals.first().copied().unwrap_or([f64::NAN; 2]);
            let single = r.support_cone.single_line && n[0].abs() < 1e-9 && (n[1] - 1.0).abs() < 1e-9;
            ch.push(
                "corner_support_cone",
                Source::Paper,
                "single line {t2 = 0}",
                format!(
                    "{} normal(s), arc width {}, first ({:.6}, {:.6})",
                    r.support_cone.normals.len(),
                    sci(r.support_cone.width()),
                    n[0],
                    n[1]
                ),
                single,
            );
            let seg = r.contact_is_segment(10.0 * fc.contact_tol);
            ch.push(
                "corner_contact_segment",
                Source::Paper,
                "contact set is a segment",
                format!("contact {:?}", r.contact),
                seg,
            );
        }
        Err(e) => ch.error("corner_face", e),
    }
    match face_of_point_2d(&s, &[rat(-1, 2), int(0)], fc) {
        Ok(face) => {
            let r = is_exposed_2d(&s, &face, fc);
            let ok = r.exposed && r.exposing_line.as_ref().is_some_and(|l| proportional(l, &parse2("t2")));
            ch.push(
                "bottom_edge_exposed",
                Source::Derived,
                "exposed by {t2 = 0}",
                format!("{} {:?}", r.exposed, r.exposing_line.map(|l| l.to_string())),
                ok,
            );
        }
        Err(e) => ch.error("bottom_edge_exposed", e),
    }
    let s1 = example1_set();
    match face_of_point_2d(&s1, &[int(1), int(0)], fc) {
        Ok(face) => {
            let r = is_exposed_2d(&s1, &face, fc);
            let ok = matches!(face.face, Face2D::Point { .. })
                && r.exposed
                && r.exposing_line.as_ref().is_some_and(|l| proportional(l, &parse2("1 - t1")));
            ch.push(
                "node_exposed",
                Source::Paper,
                "face {(1,0)} exposed by {t1 = 1}",
                format!(
                    "face {}, exposed {}, line {:?}",
                    serde_json::to_string(&face.face).expect("serializes"),
                    r.exposed,
                    r.exposing_line.map(|l| l.to_string())
                ),
                ok,
            );
        }
        Err(e) => ch.error("node_exposed", e),
    }
}

#[derive(Deserialize)]
struct AStarFixture {
    a_star: String,
}

/// The frozen outcome of the first halving probe.
pub fn frozen_a_star() -> Rational {
    let fx: AStarFixture =
        serde_json::from_str(include_str!("../tests/fixtures/probe_a_star.json")).expect("fixture parses");
    parse_rational(&fx.a_star).expect("fixture holds a rational")
}

fn c7_probe(ch: &mut Checks, cfg: &ReproduceConfig) {
    let gens = Generators::new(2, example2::four()).expect("valid generators");
    let report = match crate::lasserre::halving_probe(&gens, 3, &cfg.solver, &cfg.cert) {
        Ok(r) => r,
        Err(e) => return ch.error("halving_probe", e),
    };
    let trail: Vec<String> = report.steps.iter().map(|s| format!("{}:{}", s.a, s.status)).collect();
    let Some(a_star) = report.a_star.as_ref().and_then(|s| parse_rational(s)) else {
        let stalled = report.steps.iter().any(|s| s.status == "UNDECIDED");
        let computed = format!("no refutation [{}]", trail.join(", "));
        if stalled {
            ch.stalled("refuted", Source::Derived, "REFUTED for some a >= 2^-20", computed);
        } else {
            ch.push("refuted", Source::Derived, "REFUTED for some a >= 2^-20", computed, false);
        }
        return;
    };
    ch.push(
        "refuted",
        Source::Derived,
        "REFUTED for some a >= 2^-20",
        format!("REFUTED at a = {a_star} [{}]", trail.join(", ")),
        a_star >= rat(1, 1 << 20),
    );
    let frozen = frozen_a_star();
    ch.push("a_star_matches_fixture", Source::Derived, &frozen, &a_star, a_star == frozen);
    let cert = report.certificate.expect("refutations carry a certificate");
    let ell = example2::tangent(&a_star);
    let l1 = cert.moments.get(&Monomial::one(2)).unwrap_or(f64::NAN);
    ch.push("certificate_L1", Source::Elementary, 1, l1, l1 == 1.0);
    let min_eig = cert.localizing_min_eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    ch.push(
        "certificate_psd",
        Source::Elementary,
        format!(">= -{}", sci(cfg.cert.psd_tol)),
        sci(min_eig),
        min_eig >= -cfg.cert.psd_tol,
    );
    let value = cert.moments.apply(&ell).unwrap_or(f64::NAN);
    ch.push(
        "certificate_value",
        Source::Elementary,
        format!("<= -{}", sci(cfg.cert.refute_tol)),
        format!("{value:.12}"),
        value <= -cfg.cert.refute_tol,
    );
    let ok = verify_dual_certificate(&gens, 3, &ell, &cert, &cfg.cert);
    ch.push("certificate_verified", Source::Elementary, true, ok, ok);
}

/// Rational points of `S` from a seeded rejection sampler on the box.
pub fn sample_points_in(gens: &Generators, bbox: [[i64; 2]; 2], count: usize, seed: u64) -> Vec<Vec<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let den = 256i64;
    while out.len() < count {
        let x: Vec<Rational> = bbox
            .iter()
            .map(|[lo, hi]| rat(rng.random_range(lo * den..=hi * den), den))
            .collect();
        if gens.contains(&x) {
            out.push(x);
        }
    }
    out
}

fn relax_sets() -> [(&'static str, Generators, [[i64; 2]; 2], [f64; 4]); 2] {
    [
        (
            "triple",
            Generators::new(2, example2::triple()).expect("valid"),
            [[0, 1], [0, 1]],
            [-0.25, 1.25, -0.25, 1.25],
        ),
        (
            "four",
            Generators::new(2, example2::four()).expect("valid"),
            [[-1, 1], [0, 1]],
            [-1.25, 1.25, -0.25, 1.25],
        ),
    ]
}

fn c8_relaxation(ch: &mut Checks, cfg: &ReproduceConfig) {
    for (k, (name, gens, bbox, grid)) in relax_sets().into_iter().enumerate() {
        let pts = sample_points_in(&gens, bbox, 100, cfg.seed.wrapping_add(k as u64));
        let mut counts = [0usize; 3];
        let mut first_bad = None;
        for x in &pts {
            let xf: Vec<f64> = x.iter().map(to_f64).collect();
            match relaxation_member(&gens, 3, &xf, &cfg.solver) {
                Ok(RelaxOutcome::In { .. }) => counts[0] += 1,
                Ok(o) => {
                    counts[if matches!(o, RelaxOutcome::Out { .. }) { 1 } else { 2 }] += 1;
                    first_bad.get_or_insert_with(|| format!("({}, {}) {}", x[0], x[1], o.label()));
                }
                Err(e) => return ch.error(&format!("{name}.members_in"), e),
            }
        }
        let computed = format!("IN {}, OUT {}, UNDECIDED {}{}", counts[0], counts[1], counts[2], first_bad.map(|s| format!(", first {s}")).unwrap_or_default());
        if counts[1] == 0 && counts[2] > 0 {
            ch.stalled(&format!("{name}.members_in"), Source::Paper, "IN at 100 points of S", computed);
        } else {
            ch.push(&format!("{name}.members_in"), Source::Paper, "IN at 100 points of S", computed, counts[0] == 100);
        }

        let gp: Vec<Vec<f64>> = (0..5)
            .flat_map(|i| {
                (0..5).map(move |j| {
                    vec![
                        grid[0] + (grid[1] - grid[0]) * i as f64 / 4.0,
                        grid[2] + (grid[3] - grid[2]) * j as f64 / 4.0,
                    ]
                })
            })
            .collect();
        match nesting_check(&gens, 3, &gp, &cfg.solver) {
            Ok(r) => {
                let undecided = r.entries.iter().filter(|e| e.upper == "UNDECIDED" || e.lower == "UNDECIDED").count();
                ch.push(
                    &format!("{name}.nesting_4_in_3"),
                    Source::Paper,
                    "0 violations on 25 points",
                    format!("{} violations, {undecided} undecided on {} points", r.violations, r.entries.len()),
                    r.violations == 0 && r.entries.len() == 25,
                );
            }
            Err(e) => ch.error(&format!("{name}.nesting_4_in_3"), e),
        }
    }
}

/// A random 3x3 pencil `A0 + t1 A1 + t2 A2` with `A0 > 0` and a rational
/// boundary point where `A(x)` is a nonzero singular PSD matrix.
pub fn random_pencil(rng: &mut ChaCha8Rng) -> (LinMatPoly, Vec<Rational>) {
    loop {
        let mut sym = || {
            let mut m = QMatrix::zero(3);
            for i in 0..3 {
                for j in i..3 {
                    let v = int(rng.random_range(-3..=3));
                    m.set(i, j, v.clone());
                    m.set(j, i, v);
                }
            }
            m
        };
        let a1 = sym();
        let a2 = sym();
        let rank = rng.random_range(1..=2usize);
        let mut m = QMatrix::zero(3);
        for _ in 0..rank {
            let w: Vec<Rational> = (0..3).map(|_| int(rng.random_range(-2..=2))).collect();
            for i in 0..3 {
                for j in 0..3 {
                    let v = m.get(i, j) + &w[i] * &w[j];
                    m.set(i, j, v);
                }
            }
        }
        let x = vec![rat(rng.random_range(-6..=6), 4), rat(rng.random_range(-6..=6), 4)];
        if m.is_zero() || (x[0].is_zero() && x[1].is_zero()) {
            continue;
        }
        let a0 = m.add(&a1.scale(&-x[0].clone())).add(&a2.scale(&-x[1].clone()));
        // Leading principal minors for positive definiteness.
        let rows = a0.rows();
        let m1 = rows[0][0].clone();
        let m2 = &rows[0][0] * &rows[1][1] - &rows[0][1] * &rows[1][0];
        if !(m1.is_positive() && m2.is_positive() && a0.det().is_positive()) {
            continue;
        }
        let pencil = LinMatPoly::new(vec![a0, a1, a2]).expect("symmetric");
        return (pencil, x);
    }
}

/// `sup { s >= 0 : A(s v) >= 0 }`, capped at `cap`.
fn boundary_distance(mats: &[DMatrix<f64>], v: [f64; 2], cap: f64) -> f64 {
    let l = mats[0].clone().cholesky().expect("A0 > 0").l();
    let li = l.try_inverse().expect("invertible");
    let av = &mats[1] * v[0] + &mats[2] * v[1];
    let b = &li * av * li.transpose();
    let b = (&b + b.transpose()) * 0.5;
    let lmin = b.symmetric_eigenvalues().min();
    if lmin < 0.0 {
        (-1.0 / lmin).min(cap)
    } else {
        cap
    }
}

fn dist_to_segment(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let ab = DVector::from_vec(vec![b[0] - a[0], b[1] - a[1]]);
    let ap = DVector::from_vec(vec![p[0] - a[0], p[1] - a[1]]);
    let len2 = ab.norm_squared();
    let t = if len2 == 0.0 { 0.0 } else { (ap.dot(&ab) / len2).clamp(0.0, 1.0) };
    (ap - ab * t).norm()
}

struct PencilOutcome {
    ok: bool,
    detail: String,
}

fn check_random_pencil(pencil: &LinMatPoly, x: &[Rational], rng: &mut ChaCha8Rng) -> PencilOutcome {
    let fail = |detail: String| PencilOutcome { ok: false, detail };
    let face = match face_of_point(pencil, x) {
        Ok(f) => f,
        Err(e) => return fail(format!("face_of_point: {e}")),
    };
    if face.status != FaceStatus::Proper {
        return fail(format!("face status {:?}", face.status));
    }
    let ell = match exposing_functional(&face, pencil) {
        Ok(l) => l,
        Err(e) => return fail(format!("exposing_functional: {e}")),
    };
    // Exact: l vanishes on the affine hull of the face.
    if !ell.eval(x).expect("2 vars").is_zero() {
        return fail("l(x) != 0".into());
    }
    let lin = [ell.coeff(&Monomial::var(2, 0)), ell.coeff(&Monomial::var(2, 1))];
    for d in &face.hull.directions {
        if !(&lin[0] * &d[0] + &lin[1] * &d[1]).is_zero() {
            return fail("l not constant on the face".into());
        }
    }
    let mats: Vec<DMatrix<f64>> = pencil.matrices().iter().map(QMatrix::to_f64).collect();
    let xf = [to_f64(&x[0]), to_f64(&x[1])];
    let lf = ell.to_f64_poly();
    let scale = to_f64(&ell.max_abs_coeff()).max(1.0);
    let cap = 100.0;

    // The face as a segment (or point) in float coordinates.
    let face_seg = match face.hull.directions.first() {
        None => [xf, xf],
        Some(d) => {
            let df = [to_f64(&d[0]), to_f64(&d[1])];
            let reach = |sgn: f64| {
                let (mut lo, mut hi) = (0.0, cap);
                let inside = |s: f64| {
                    let y = [xf[0] + sgn * s * df[0], xf[1] + sgn * s * df[1]];
                    let m = &mats[0] + &mats[1] * y[0] + &mats[2] * y[1];
                    m.symmetric_eigenvalues().min() >= -1e-12 * (1.0 + m.norm())
                };
                if inside(hi) {
                    return hi;
                }
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    if inside(mid) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                lo
            };
            let (sp, sm) = (reach(1.0), reach(-1.0));
            [
                [xf[0] - sm * df[0], xf[1] - sm * df[1]],
                [xf[0] + sp * df[0], xf[1] + sp * df[1]],
            ]
        }
    };

    // 1000 samples of S: boundary points (a fifth aimed near x) and interior points.
    let theta_x = xf[1].atan2(xf[0]);
    let mut samples: Vec<[f64; 2]> = face_seg.to_vec();
    for k in 0..1000 {
        let th = if k < 200 {
            theta_x + rng.random_range(-0.05..0.05)
        } else {
            rng.random_range(0.0..std::f64::consts::TAU)
        };
        let v = [th.cos(), th.sin()];
        let r = boundary_distance(&mats, v, cap);
        let frac = if k < 600 { 1.0 } else { rng.random_range(0.0..1.0) };
        samples.push([frac * r * v[0], frac * r * v[1]]);
    }
    let min_l = samples.iter().map(|y| lf.eval(y)).fold(f64::INFINITY, f64::min);
    if min_l < -1e-9 * scale {
        return fail(format!("l negative on S: {}", sci(min_l)));
    }
    let zero_tol = 1e-12 * scale;
    let mut worst: f64 = 0.0;
    for y in &samples {
        if lf.eval(y) <= zero_tol {
            worst = worst.max(dist_to_segment(*y, face_seg[0], face_seg[1]));
        }
    }
    if worst > 1e-6 {
        return fail(format!("zero set reaches {} from the face", sci(worst)));
    }
    PencilOutcome {
        ok: true,
        detail: format!("face dim {}, ok", face.hull.dim()),
    }
}

fn c9_pencils(ch: &mut Checks, cfg: &ReproduceConfig) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9e37_79b9);
    let mut failures = Vec::new();
    let mut dims = [0usize; 2];
    for i in 0..50 {
        let (pencil, x) = random_pencil(&mut rng);
        let r = check_random_pencil(&pencil, &x, &mut rng);
        if r.detail.contains("dim 1") {
            dims[1] += 1;
        } else if r.ok {
            dims[0] += 1;
        }
        if !r.ok {
            failures.push(format!("pencil {i}: {}", r.detail));
        }
    }
    ch.push(
        "random_pencils",
        Source::Paper,
        "50 of 50 faces exposed by tr(Z A(t))",
        if failures.is_empty() {
            format!("50 of 50 ({} point faces, {} segment faces)", dims[0], dims[1])
        } else {
            format!("{} failures: {}", failures.len(), failures.join("; "))
        },
        failures.is_empty(),
    );
}

/// A labelled SDP instance with its expected status.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionInstance {
    pub name: String,
    pub expected: Status,
    pub problem: SDPProblem,
}

/// Forty fixed instances: the tangent problems of the certificate and
/// probe checks, moment problems at points of `S`, and moment problems at
/// points violating a linear generator.
pub fn regression_instances() -> Vec<RegressionInstance> {
    let triple = Generators::new(2, example2::triple()).expect("valid");
    let four = Generators::new(2, example2::four()).expect("valid");
    let mut out = Vec::new();
    for a in tangent_a_values() {
        out.push(RegressionInstance {
            name: format!("qm.triple.a={a}"),
            expected: Status::Feasible,
            problem: qm_problem(&triple, 3, &example2::tangent(&a)).expect("degree 3"),
        });
    }
    for a in [rat(1, 2), rat(1, 4)] {
        out.push(RegressionInstance {
            name: format!("qm.four.a={a}"),
            expected: Status::Feasible,
            problem: qm_problem(&four, 3, &example2::tangent(&a)).expect("degree 3"),
        });
    }
    let inside: [(&str, &Generators, [f64; 2]); 13] = [
        ("triple", &triple, [0.5, 0.5]),
        ("triple", &triple, [0.0, 0.0]),
        ("triple", &triple, [1.0, 1.0]),
        ("triple", &triple, [0.0, 1.0]),
        ("triple", &triple, [0.25, 0.75]),
        ("triple", &triple, [0.5, 0.125]),
        ("triple", &triple, [0.75, 0.9]),
        ("four", &four, [0.0, 0.0]),
        ("four", &four, [-0.5, 0.0]),
        ("four", &four, [-1.0, 1.0]),
        ("four", &four, [0.5, 0.5]),
        ("four", &four, [-0.5, 0.5]),
        ("four", &four, [0.9, 0.95]),
    ];
    for (name, g, x) in inside {
        out.push(RegressionInstance {
            name: format!("relax.{name}.in({}, {})", x[0], x[1]),
            expected: Status::Feasible,
            problem: relaxation_problem(g, 3, &x).expect("degree 3"),
        });
    }
    let outside: [(&str, &Generators, [f64; 2]); 20] = [
        ("triple", &triple, [-0.5, 0.5]),
        ("triple", &triple, [-0.1, 0.2]),
        ("triple", &triple, [-2.0, -1.0]),
        ("triple", &triple, [0.5, 1.5]),
        ("triple", &triple, [0.2, 1.1]),
        ("triple", &triple, [-1.0, 2.0]),
        ("triple", &triple, [5.0, 5.0]),
        ("triple", &triple, [-0.01, 0.5]),
        ("triple", &triple, [0.9, 1.01]),
        ("triple", &triple, [-3.0, 0.0]),
        ("four", &four, [-1.5, 0.5]),
        ("four", &four, [-1.1, 0.0]),
        ("four", &four, [0.0, -0.5]),
        ("four", &four, [-0.5, -0.1]),
        ("four", &four, [0.5, 1.5]),
        ("four", &four, [-0.5, 1.2]),
        ("four", &four, [-2.0, 2.0]),
        ("four", &four, [0.3, -0.01]),
        ("four", &four, [-1.01, 0.9]),
        ("four", &four, [5.0, 5.0]),
    ];
    for (name, g, x) in outside {
        out.push(RegressionInstance {
            name: format!("relax.{name}.out({}, {})", x[0], x[1]),
            expected: Status::Infeasible,
            problem: relaxation_problem(g, 3, &x).expect("degree 3"),
        });
    }
    out
}

/// Solves and independently verifies each instance.
pub fn audit_instances(instances: &[RegressionInstance], cfg: &SolverConfig) -> Vec<(String, Status, Status, bool)> {
    instances
        .iter()
        .map(|inst| match sdp::solve(&inst.problem, cfg) {
            Ok(sol) => {
                let v = verify_solution(&inst.problem, &sol, cfg);
                (inst.name.clone(), inst.expected, sol.status, v.ok && sol.status != Status::Stalled)
            }
            Err(_) => (inst.name.clone(), inst.expected, Status::Stalled, false),
        })
        .collect()
}

fn c10_solver(ch: &mut Checks, cfg: &ReproduceConfig) {
    let inst = regression_instances();
    let feas = inst.iter().filter(|i| i.expected == Status::Feasible).count();
    let infeas = inst.len() - feas;
    ch.push("instance_counts", Source::Elementary, "20 feasible, 20 infeasible", format!("{feas} feasible, {infeas} infeasible"), feas == 20 && infeas == 20);
    let results = audit_instances(&inst, &cfg.solver);
    let unverified: Vec<String> = results
        .iter()
        .filter(|r| !r.3)
        .map(|r| format!("{} ({:?})", r.0, r.2))
        .collect();
    let stalled = results.iter().filter(|r| r.2 == Status::Stalled).count();
    let computed = if unverified.is_empty() {
        format!("{} of {} verdicts verified", results.len(), results.len())
    } else {
        format!("{} unverifiable: {}", unverified.len(), unverified.join(", "))
    };
    if stalled > 0 && unverified.len() == stalled {
        ch.stalled("verdicts_verified", Source::Elementary, "0 unverifiable verdicts", computed);
    } else {
        ch.push("verdicts_verified", Source::Elementary, "0 unverifiable verdicts", computed, unverified.is_empty());
    }
    let wrong: Vec<String> = results
        .iter()
        .filter(|r| r.2 != Status::Stalled && r.1 != r.2)
        .map(|r| format!("{} expected {:?} got {:?}", r.0, r.1, r.2))
        .collect();
    ch.push(
        "statuses_match",
        Source::Derived,
        "every status as labelled",
        if wrong.is_empty() { "all match".to_string() } else { wrong.join("; ") },
        wrong.is_empty(),
    );
}

/// Runs one criterion.
pub fn run_criterion(c: u8, cfg: &ReproduceConfig) -> CriterionResult {
    let (_, title, _, limit) = CRITERIA[(c - 1) as usize];
    let mut ch = Checks::new(c);
    let start = Instant::now();
    match c {
        1 => c1_charpoly(&mut ch),
        2 => c2_renegar(&mut ch),
        3 => c3_descriptions(&mut ch),
        4 => c4_rz(&mut ch, cfg),
        5 => c5_qm(&mut ch, cfg),
        6 => c6_faces(&mut ch, cfg),
        7 => c7_probe(&mut ch, cfg),
        8 => c8_relaxation(&mut ch, cfg),
        9 => c9_pencils(&mut ch, cfg),
        10 => c10_solver(&mut ch, cfg),
        _ => unreachable!("criteria are numbered 1 to 10"),
    }
    let elapsed = start.elapsed().as_secs_f64();
    CriterionResult {
        criterion: c,
        title,
        pass: !ch.out.is_empty() && ch.out.iter().all(|r| r.pass),
        limit_seconds: limit,
        runtime_seconds: cfg.timings.then_some(elapsed),
        elapsed,
        checks: ch.out,
    }
}

/// Runs every criterion not skipped and assembles the report.
pub fn reproduce(cfg: &ReproduceConfig) -> PaperReport {
    let mut warnings = cfg.solver.warnings();
    if cfg.faces.contact_tol > 1e-2 || cfg.faces.tol > 1e-3 {
        warnings.push("faces2d tolerances are very loose; exposedness verdicts are unreliable".into());
    }
    let mut skipped = Vec::new();
    let mut criteria = Vec::new();
    for (c, _, group, _) in CRITERIA {
        if is_skipped(c, group, &cfg.skip) {
            skipped.push(c);
        } else {
            criteria.push(run_criterion(c, cfg));
        }
    }
    let mut checks: Vec<CheckRecord> = criteria.iter().flat_map(|c| c.checks.clone()).collect();
    checks.sort_by(|a, b| a.name.cmp(&b.name));
    PaperReport {
        schema: SCHEMA,
        pass: criteria.iter().all(|c| c.pass),
        complete: skipped.is_empty(),
        config: cfg.clone(),
        warnings,
        skipped,
        criteria,
        checks,
    }
}

/// `PSD(A(x))` through the pencil's exact characteristic polynomial.
pub fn pencil_member(a: &LinMatPoly, x: &[Rational]) -> bool {
    eval_pencil(a, x).ok().and_then(|m| is_psd_exact(&m).ok()).unwrap_or(false)
}
