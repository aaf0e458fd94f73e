//! Independent re-checking of solver answers. Nothing here looks at solver
//! internals: points are re-evaluated, multipliers re-multiplied.

use serde::Serialize;

use super::{complete_certificate, min_eig, FarkasCertificate, SDPProblem, SDPSolution, SolverConfig, Status};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub status: Status,
    pub checks: Vec<Check>,
    /// All checks passed. A STALLED answer carries no verdict and is
    /// reported as `ok` with no checks.
    pub ok: bool,
}

fn check(name: impl Into<String>, value: f64, threshold: f64, ok: bool) -> Check {
    Check {
        name: name.into(),
        value,
        threshold,
        ok: ok && value.is_finite(),
    }
}

fn point_checks(p: &SDPProblem, y: &[f64], cfg: &SolverConfig) -> Vec<Check> {
    let mut out = Vec::new();
    if y.len() != p.m || y.iter().any(|v| !v.is_finite()) {
        out.push(check("point has the right length and finite entries", f64::NAN, 0.0, false));
        return out;
    }
    for (bi, b) in p.blocks.iter().enumerate() {
        let m = b.eval(y);
        let lmin = min_eig(&m);
        let tol = -cfg.feas_tol * (1.0 + m.norm());
        out.push(check(format!("block {bi} min eigenvalue"), lmin, tol, lmin >= tol));
    }
    let ynorm = y.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    for (r, (row, rhs)) in p.eq_matrix.iter().zip(&p.eq_rhs).enumerate() {
        let lhs: f64 = row.iter().zip(y).map(|(a, b)| a * b).sum();
        let rowmax = row.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let tol = cfg.feas_tol * (1.0 + rhs.abs() + rowmax * ynorm);
        let err = (lhs - rhs).abs();
        out.push(check(format!("equality {r} residual"), err, tol, err <= tol));
    }
    out
}

pub(crate) fn point_feasible(p: &SDPProblem, y: &[f64], cfg: &SolverConfig) -> bool {
    point_checks(p, y, cfg).iter().all(|c| c.ok)
}

fn certificate_checks(p: &SDPProblem, cert: &FarkasCertificate, cfg: &SolverConfig) -> Vec<Check> {
    let mut out = Vec::new();
    if cert.w.len() != p.blocks.len()
        || cert.mu.len() != p.eq_rhs.len()
        || cert.w.iter().zip(&p.blocks).any(|(w, b)| w.nrows() != b.size() || w.ncols() != b.size())
    {
        out.push(check("certificate shape", f64::NAN, 0.0, false));
        return out;
    }
    for (bi, w) in cert.w.iter().enumerate() {
        let asym = (w - w.transpose()).amax();
        let lmin = min_eig(w);
        let tol = -1e-10 * (1.0 + w.amax());
        out.push(check(format!("multiplier {bi} symmetric"), asym, 1e-12, asym <= 1e-12 * (1.0 + w.amax())));
        out.push(check(format!("multiplier {bi} min eigenvalue"), lmin, tol, lmin >= tol));
    }
    // Recompute margin and residual from (W, mu) alone.
    let redo = complete_certificate(p, cert.w.clone(), cert.mu.clone());
    let rel = redo.margin / p.scale();
    out.push(check("relative margin", rel, -cfg.refute_tol, rel < -cfg.refute_tol));
    let radius = redo.radius.unwrap_or(f64::INFINITY);
    out.push(Check {
        name: "certified radius".into(),
        value: radius,
        threshold: cfg.box_radius,
        ok: radius >= cfg.box_radius,
    });
    out
}

pub(crate) fn certificate_valid(p: &SDPProblem, cert: &FarkasCertificate, cfg: &SolverConfig) -> bool {
    certificate_checks(p, cert, cfg).iter().all(|c| c.ok)
}

pub fn verify_solution(p: &SDPProblem, sol: &SDPSolution, cfg: &SolverConfig) -> VerifyReport {
    let checks = match sol.status {
        Status::Feasible => point_checks(p, &sol.y, cfg),
        Status::Infeasible => match &sol.certificate {
            Some(cert) => certificate_checks(p, cert, cfg),
            None => vec![check("certificate present", f64::NAN, 0.0, false)],
        },
        Status::Stalled => Vec::new(),
    };
    VerifyReport {
        status: sol.status,
        ok: checks.iter().all(|c| c.ok),
        checks,
    }
}
