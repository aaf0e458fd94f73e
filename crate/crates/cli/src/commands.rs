use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use spectra_core::faces2d::{face_of_point_2d, is_exposed_2d, support_lines_through, Faces2dError, SetDescription2D};
use spectra_core::figures::{example1_figure, example2_figure};
use spectra_core::lasserre::{halving_probe, qm_member as qm, relaxation_member, Generators, LasserreError, QmOutcome, RelaxOutcome};
use spectra_core::linmat::{char_poly_coeffs, det_poly, exposing_functional, face_of_point, FaceStatus, LinMatError, LinMatPoly};
use spectra_core::poly::rational::to_f64;
use spectra_core::reproduce::{reproduce, ReproduceConfig};
use spectra_core::rigidconv::{
    check_rz, default_directions, exposing_tangent, homogeneous_renegar, hyperbolicity_cone_member, mult as multiplicity,
    mult_via_homogenization, renegar_derivative, RigidError,
};
use spectra_core::Rational;

use crate::input::{self, emit};
use crate::{CliError, Outcome, RunConfig};

fn strs(v: &[Rational]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn rigid(e: RigidError) -> CliError {
    CliError::input(e)
}

pub fn rz(cfg: &RunConfig, poly: &str, e: &str) -> Result<Outcome, CliError> {
    let e = input::point(e)?;
    let p = input::poly(poly, e.len())?;
    let dirs = default_directions(e.len(), cfg.directions.unwrap_or(64));
    let report = check_rz(&p, &e, &dirs).map_err(rigid)?;
    emit(cfg, "rz", &report)?;
    Ok(Outcome::Ok)
}

pub fn renegar(cfg: &RunConfig, poly: &str, k: u32, nvars: Option<usize>, homogeneous: bool, e: Option<&str>) -> Result<Outcome, CliError> {
    let out = if homogeneous {
        let e = input::point(e.ok_or_else(|| CliError::input("--homogeneous needs --e"))?)?;
        if e.len() < 2 {
            return Err(CliError::input("--e needs at least two coordinates (t1..tn, u)"));
        }
        let p = input::poly_homogeneous(poly, e.len() - 1)?;
        let d = homogeneous_renegar(&p, &e, k).map_err(rigid)?;
        json!({"p": p.display_homogeneous(), "e": strs(&e), "k": k, "derivative": d.display_homogeneous()})
    } else {
        let p = match nvars {
            Some(n) => input::poly(poly, n)?,
            None => input::poly_auto(poly)?,
        };
        let d = renegar_derivative(&p, k).map_err(rigid)?;
        json!({"p": p.to_string(), "k": k, "derivative": d.to_string()})
    };
    emit(cfg, "renegar", &out)?;
    Ok(Outcome::Ok)
}

pub fn mult(cfg: &RunConfig, poly: &str, x: &str) -> Result<Outcome, CliError> {
    let x = input::point(x)?;
    let p = input::poly(poly, x.len())?;
    let m = multiplicity(&p, &x).map_err(rigid)?;
    let mh = mult_via_homogenization(&p, &x).map_err(rigid)?;
    let tangent = if m == 0 {
        Value::Null
    } else {
        match exposing_tangent(&p, &x) {
            Ok(t) => json!({"normal": strs(&t.normal), "line": format!("{} = 0", t.linear_form()), "curve": t.curve.to_string()}),
            Err(e) => json!({"error": e.to_string()}),
        }
    };
    let out = json!({"p": p.to_string(), "x": strs(&x), "mult": m, "mult_via_homogenization": mh, "tangent": tangent});
    emit(cfg, "mult", &out)?;
    Ok(if m == mh { Outcome::Ok } else { Outcome::CheckFailed })
}

pub fn pencil(cfg: &RunConfig, file: &Path, x: Option<&str>) -> Result<Outcome, CliError> {
    let a = LinMatPoly::from_json(&input::read(file)?).map_err(CliError::input)?;
    let cp = char_poly_coeffs(&a);
    let mut out = json!({
        "k": a.k(),
        "n": a.n(),
        "coefficients": cp.c.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "det": det_poly(&a).to_string(),
    });
    if let Some(x) = x {
        let x = input::point(x)?;
        if x.len() != a.n() {
            return Err(CliError::input(format!("point has {} coordinates, pencil has {} variables", x.len(), a.n())));
        }
        out["x"] = json!(strs(&x));
        match face_of_point(&a, &x) {
            Ok(face) => {
                out["member"] = json!(true);
                if face.status == FaceStatus::Proper {
                    let ell = exposing_functional(&face, &a).map_err(CliError::input)?;
                    out["exposing_functional"] = json!(ell.to_string());
                }
                out["face"] = serde_json::to_value(&face).expect("serializes");
            }
            Err(LinMatError::NotInSpectrahedron) => out["member"] = json!(false),
            Err(e) => return Err(CliError::input(e)),
        }
    }
    emit(cfg, "pencil", &out)?;
    Ok(Outcome::Ok)
}

pub fn hypcone(cfg: &RunConfig, poly: &str, e: &str, x: &str) -> Result<Outcome, CliError> {
    let e = input::point(e)?;
    let x = input::point(x)?;
    if x.len() != e.len() {
        return Err(CliError::input("--e and --x must have the same length"));
    }
    let p = input::poly(poly, e.len())?;
    if !p.is_homogeneous() {
        return Err(CliError::input("polynomial must be homogeneous"));
    }
    let member = hyperbolicity_cone_member(&p, &e, &x).map_err(rigid)?;
    emit(cfg, "hypcone", &json!({"p": p.to_string(), "e": strs(&e), "x": strs(&x), "member": member}))?;
    Ok(Outcome::Ok)
}

#[derive(Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
enum Query {
    Qm { ell: String },
    Point { x: Vec<Value> },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LasserreProblem {
    generators: Vec<String>,
    #[serde(default)]
    n: Option<usize>,
    d: u32,
    #[serde(default)]
    queries: Vec<Query>,
}

struct Loaded {
    gens: Generators,
    d: u32,
    queries: Vec<Query>,
}

fn lasserre_err(e: LasserreError) -> CliError {
    CliError::input(e)
}

fn load(file: &Path) -> Result<Loaded, CliError> {
    let raw: LasserreProblem =
        serde_json::from_str(&input::read(file)?).map_err(|e| CliError::input(format!("invalid problem JSON: {e}")))?;
    let n = match raw.n {
        Some(n) => n,
        None => {
            let mut n = 0;
            for g in &raw.generators {
                n = n.max(input::poly_auto(g)?.nvars());
            }
            for q in &raw.queries {
                match q {
                    Query::Qm { ell } => n = n.max(input::poly_auto(ell)?.nvars()),
                    Query::Point { x } => n = n.max(x.len()),
                }
            }
            n
        }
    };
    let polys = raw.generators.iter().map(|g| input::poly(g, n)).collect::<Result<Vec<_>, _>>()?;
    let gens = Generators::new(n, polys).map_err(lasserre_err)?;
    Ok(Loaded {
        gens,
        d: raw.d,
        queries: raw.queries,
    })
}

#[derive(Serialize)]
struct QmAnswer {
    ell: String,
    outcome: QmOutcome,
}

pub fn qm_member(cfg: &RunConfig, file: &Path) -> Result<Outcome, CliError> {
    let p = load(file)?;
    let mut answers = Vec::new();
    for q in &p.queries {
        if let Query::Qm { ell } = q {
            let ell = input::poly(ell, p.gens.n)?;
            let outcome = qm(&p.gens, p.d, &ell, &cfg.solver, &cfg.cert).map_err(lasserre_err)?;
            answers.push(QmAnswer {
                ell: ell.to_string(),
                outcome,
            });
        }
    }
    if answers.is_empty() {
        return Err(CliError::input("no {\"type\": \"qm\"} queries in the problem"));
    }
    let stalled = answers.iter().any(|a| matches!(a.outcome, QmOutcome::Undecided { .. }));
    emit(cfg, "qm-member", &json!({"d": p.d, "generators": p.gens.polys.iter().map(ToString::to_string).collect::<Vec<_>>(), "answers": answers}))?;
    Ok(if stalled { Outcome::Stalled } else { Outcome::Ok })
}

#[derive(Serialize)]
struct PointAnswer {
    x: Vec<f64>,
    outcome: RelaxOutcome,
}

pub fn relax_member(cfg: &RunConfig, file: &Path) -> Result<Outcome, CliError> {
    let p = load(file)?;
    let mut answers = Vec::new();
    for q in &p.queries {
        if let Query::Point { x } = q {
            let x: Vec<f64> = x
                .iter()
                .map(|v| input::json_rational(v).map(|r| to_f64(&r)))
                .collect::<Result<_, _>>()?;
            let outcome = relaxation_member(&p.gens, p.d, &x, &cfg.solver).map_err(lasserre_err)?;
            answers.push(PointAnswer { x, outcome });
        }
    }
    if answers.is_empty() {
        return Err(CliError::input("no {\"type\": \"point\"} queries in the problem"));
    }
    let stalled = answers.iter().any(|a| matches!(a.outcome, RelaxOutcome::Undecided { .. }));
    emit(cfg, "relax-member", &json!({"d": p.d, "answers": answers}))?;
    Ok(if stalled { Outcome::Stalled } else { Outcome::Ok })
}

pub fn probe(cfg: &RunConfig, file: &Path) -> Result<Outcome, CliError> {
    let p = load(file)?;
    if p.gens.n != 2 {
        return Err(CliError::input("the tangent probe needs generators in t1, t2"));
    }
    let report = halving_probe(&p.gens, p.d, &cfg.solver, &cfg.cert).map_err(lasserre_err)?;
    let stalled = report.a_star.is_none() && report.steps.iter().any(|s| s.status == "UNDECIDED");
    emit(cfg, "probe", &report)?;
    Ok(if stalled { Outcome::Stalled } else { Outcome::Ok })
}

pub fn faces2d(cfg: &RunConfig, file: &Path, x: &str) -> Result<Outcome, CliError> {
    let set = SetDescription2D::from_json(&input::read(file)?).map_err(CliError::input)?;
    let x = input::point(x)?;
    if x.len() != 2 {
        return Err(CliError::input("faces2d needs a point with two coordinates"));
    }
    let face = face_of_point_2d(&set, &x, &cfg.faces).map_err(CliError::input)?;
    let mut out = json!({"x": strs(&x), "resolution": cfg.faces.resolution_label()});
    match support_lines_through(&set, &x, &cfg.faces) {
        Ok(cone) => {
            out["support_cone"] = serde_json::to_value(&cone).expect("serializes");
            let report = is_exposed_2d(&set, &face, &cfg.faces);
            out["report"] = serde_json::to_value(&report).expect("serializes");
        }
        Err(Faces2dError::Interior) => {
            out["face"] = serde_json::to_value(&face.face).expect("serializes");
        }
        Err(e) => return Err(CliError::input(e)),
    }
    emit(cfg, "faces2d", &out)?;
    Ok(Outcome::Ok)
}

pub fn reproduce_paper(cfg: &RunConfig, timings: bool) -> Result<Outcome, CliError> {
    let rc = ReproduceConfig {
        solver: cfg.solver,
        cert: cfg.cert,
        faces: cfg.faces,
        directions: cfg.directions.unwrap_or(256),
        seed: cfg.seed,
        skip: cfg.skip.clone(),
        timings,
    };
    let report = reproduce(&rc);
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    for c in &report.criteria {
        eprintln!("{} criterion {:>2}: {}", if c.pass { "PASS" } else { "FAIL" }, c.criterion, c.title);
        for f in c.failures() {
            eprintln!("       {}: expected {}, computed {}", f.name, f.expected, f.computed);
        }
    }
    if !report.skipped.is_empty() {
        eprintln!("skipped criteria: {:?}", report.skipped);
    }
    let default_dir = Path::new("reproduce-out");
    let path = input::write_file(cfg, Some(default_dir), "report.json", &report.to_json())?;
    input::write_file(cfg, Some(default_dir), "example1.svg", &example1_figure(&cfg.faces))?;
    input::write_file(cfg, Some(default_dir), "example2.svg", &example2_figure(&cfg.faces))?;
    if let Some(p) = path {
        println!("{p}");
    }
    let failed = report.checks.iter().any(|c| !c.pass && !c.stalled);
    Ok(if failed {
        Outcome::CheckFailed
    } else if report.any_stalled() {
        Outcome::Stalled
    } else {
        Outcome::Ok
    })
}

pub fn fig(cfg: &RunConfig, which: &str) -> Result<Outcome, CliError> {
    let dir = Path::new(".");
    let figs: Vec<(&str, fn(&_) -> String)> = match which {
        "1" => vec![("example1.svg", example1_figure)],
        "2" => vec![("example2.svg", example2_figure)],
        "all" => vec![("example1.svg", example1_figure), ("example2.svg", example2_figure)],
        other => return Err(CliError::input(format!("unknown figure '{other}' (use 1, 2 or all)"))),
    };
    for (name, f) in figs {
        if let Some(p) = input::write_file(cfg, Some(dir), name, &f(&cfg.faces))? {
            println!("{p}");
        }
    }
    Ok(Outcome::Ok)
}
