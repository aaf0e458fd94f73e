//! Dense block-diagonal linear matrix inequalities in floating point.
//!
//! A problem asks for `y` with `F0_b + sum_i y_i Fi_b >= 0` on every block
//! and `E y = f`, optionally minimising `c^T y`. Every verdict comes with a
//! certificate: a point for FEASIBLE, a Farkas multiplier for INFEASIBLE.
//! When neither can be produced and validated, the answer is STALLED.

mod ipm;
mod verify;

pub use verify::{verify_solution, Check, VerifyReport};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use ipm::StdProblem;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SdpError {
    #[error("block {block}: matrix {matrix} is not symmetric")]
    NotSymmetric { block: usize, matrix: usize },
    #[error("block {block}: non-finite entry")]
    NonFinite { block: usize },
    #[error("malformed problem: {0}")]
    Shape(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

/// One LMI block `F0 + sum_i y_i F[i] >= 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Block {
    #[serde(with = "mat_serde")]
    pub f0: DMatrix<f64>,
    /// One matrix per variable; `None` stands for zero.
    #[serde(with = "mat_serde::opt_vec")]
    pub f: Vec<Option<DMatrix<f64>>>,
}

impl Block {
    pub fn size(&self) -> usize {
        self.f0.nrows()
    }

    pub fn eval(&self, y: &[f64]) -> DMatrix<f64> {
        let mut m = self.f0.clone();
        for (fi, yi) in self.f.iter().zip(y) {
            if let Some(fi) = fi {
                m += fi * *yi;
            }
        }
        m
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SDPProblem {
    pub m: usize,
    pub blocks: Vec<Block>,
    /// Rows of `E` in `E y = f`.
    #[serde(default)]
    pub eq_matrix: Vec<Vec<f64>>,
    #[serde(default)]
    pub eq_rhs: Vec<f64>,
    /// Minimise `c^T y` when present.
    #[serde(default)]
    pub objective: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub feas_tol: f64,
    pub refute_tol: f64,
    pub max_iter: usize,
    /// Search box `|z_i| <= box_radius` on the equality-reduced variables;
    /// refutations must certify at least this radius.
    pub box_radius: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            feas_tol: 1e-7,
            refute_tol: 1e-6,
            max_iter: 200,
            box_radius: 1e4,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), SdpError> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if !ok(self.feas_tol) || !ok(self.refute_tol) || !ok(self.box_radius) {
            return Err(SdpError::Config("tolerances and box radius must be positive and finite".into()));
        }
        if self.max_iter == 0 {
            return Err(SdpError::Config("max_iter must be positive".into()));
        }
        Ok(())
    }

    /// Human-readable warnings for settings that make verdicts meaningless.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.feas_tol > 1e-3 {
            w.push(format!("feas_tol = {} is absurdly loose; FEASIBLE verdicts are not meaningful", self.feas_tol));
        }
        if self.refute_tol > 1e-2 {
            w.push(format!("refute_tol = {} is very loose", self.refute_tol));
        }
        if self.feas_tol < 1e-12 || self.refute_tol < 1e-12 {
            w.push("tolerances below 1e-12 are beyond double precision; expect STALLED".into());
        }
        w
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Feasible,
    Infeasible,
    Stalled,
}

/// Multipliers `W_b >= 0`, `mu` with `<F0, W> - f^T mu = margin < 0` and
/// `<Fi, W> + (E^T mu)_i = residual_i`. Then `<F(y), W> = margin + y^T residual`
/// for every `y` with `E y = f`, so no feasible `y` exists with
/// `|y|_inf < radius = -margin / |residual|_1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FarkasCertificate {
    #[serde(with = "mat_serde::vec")]
    pub w: Vec<DMatrix<f64>>,
    pub mu: Vec<f64>,
    pub margin: f64,
    pub residual: Vec<f64>,
    /// `None` when the residual vanishes (unbounded radius).
    pub radius: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SDPSolution {
    pub status: Status,
    pub y: Vec<f64>,
    pub min_eigenvalues: Vec<f64>,
    pub objective: Option<f64>,
    /// Dual blocks of the optimisation phase (one per problem block).
    #[serde(with = "mat_serde::opt_vec")]
    pub dual_blocks: Vec<Option<DMatrix<f64>>>,
    pub certificate: Option<FarkasCertificate>,
    /// Largest `t` with `F(y) - t I >= 0` found in phase 1 (normalised units).
    pub phase1_value: f64,
    pub iterations: usize,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub gap: f64,
}

impl SDPProblem {
    pub fn validate(&self) -> Result<(), SdpError> {
        if self.blocks.is_empty() {
            return Err(SdpError::Shape("no blocks".into()));
        }
        for (bi, b) in self.blocks.iter().enumerate() {
            let s = b.size();
            if s == 0 || b.f0.ncols() != s {
                return Err(SdpError::Shape(format!("block {bi} is not a nonempty square matrix")));
            }
            if b.f.len() != self.m {
                return Err(SdpError::Shape(format!(
                    "block {bi} has {} coefficient matrices for {} variables",
                    b.f.len(),
                    self.m
                )));
            }
            let mats = std::iter::once(Some(&b.f0)).chain(b.f.iter().map(Option::as_ref));
            for (mi, m) in mats.enumerate() {
                let Some(m) = m else { continue };
                if m.nrows() != s || m.ncols() != s {
                    return Err(SdpError::Shape(format!("block {bi}: matrix {mi} has the wrong size")));
                }
                if m.iter().any(|v| !v.is_finite()) {
                    return Err(SdpError::NonFinite { block: bi });
                }
                let scale = 1.0 + m.amax();
                if (m - m.transpose()).amax() > 1e-12 * scale {
                    return Err(SdpError::NotSymmetric { block: bi, matrix: mi });
                }
            }
        }
        if self.eq_matrix.len() != self.eq_rhs.len() {
            return Err(SdpError::Shape("equality matrix and right-hand side disagree".into()));
        }
        for row in &self.eq_matrix {
            if row.len() != self.m {
                return Err(SdpError::Shape("equality row of wrong length".into()));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(SdpError::Shape("non-finite equality coefficient".into()));
            }
        }
        if self.eq_rhs.iter().any(|v| !v.is_finite()) {
            return Err(SdpError::Shape("non-finite equality right-hand side".into()));
        }
        if let Some(c) = &self.objective {
            if c.len() != self.m || c.iter().any(|v| !v.is_finite()) {
                return Err(SdpError::Shape("objective has wrong length or non-finite entries".into()));
            }
        }
        Ok(())
    }

    /// Largest absolute entry over all block matrices (at least `f64::MIN_POSITIVE`).
    pub fn scale(&self) -> f64 {
        self.blocks
            .iter()
            .flat_map(|b| std::iter::once(&b.f0).chain(b.f.iter().flatten()))
            .map(|m| m.amax())
            .fold(f64::MIN_POSITIVE, f64::max)
    }

    fn eq(&self) -> (DMatrix<f64>, DVector<f64>) {
        let p = self.eq_matrix.len();
        let e = DMatrix::from_fn(p, self.m, |i, j| self.eq_matrix[i][j]);
        (e, DVector::from_column_slice(&self.eq_rhs))
    }

    pub fn block_min_eigenvalues(&self, y: &[f64]) -> Vec<f64> {
        self.blocks.iter().map(|b| min_eig(&b.eval(y))).collect()
    }
}

pub(crate) fn min_eig(m: &DMatrix<f64>) -> f64 {
    let s = (m + m.transpose()) * 0.5;
    s.symmetric_eigenvalues().min()
}

/// `y = yp + N z`: a particular solution and an orthonormal null-space basis of `E`.
struct Reduction {
    yp: DVector<f64>,
    n: DMatrix<f64>,
}

fn reduce(e: &DMatrix<f64>, f: &DVector<f64>, m: usize) -> Result<Reduction, DVector<f64>> {
    if e.nrows() == 0 {
        return Ok(Reduction {
            yp: DVector::zeros(m),
            n: DMatrix::identity(m, m),
        });
    }
    let ete = e.transpose() * e;
    let eig = ete.symmetric_eigen();
    let lmax = eig.eigenvalues.iter().cloned().fold(0.0, f64::max);
    let cut = 1e-12 * lmax.max(1e-300);
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]).then(a.cmp(&b)));
    let mut null_cols = Vec::new();
    let mut yp = DVector::zeros(m);
    let etf = e.transpose() * f;
    for &i in &order {
        let v = eig.eigenvectors.column(i);
        if eig.eigenvalues[i] <= cut {
            null_cols.push(v.into_owned());
        } else {
            yp += v * (v.dot(&etf) / eig.eigenvalues[i]);
        }
    }
    let r = f - e * &yp;
    if r.amax() > 1e-9 * (1.0 + f.amax()) {
        return Err(r);
    }
    let n = if null_cols.is_empty() {
        DMatrix::zeros(m, 0)
    } else {
        DMatrix::from_columns(&null_cols)
    };
    Ok(Reduction { yp, n })
}

fn one(v: f64) -> DMatrix<f64> {
    DMatrix::from_element(1, 1, v)
}

/// Reduced, normalised blocks: `G0 = (F0 + sum yp_i Fi)/s`, `Gj = sum_i N_ij Fi / s`.
fn reduced_blocks(p: &SDPProblem, red: &Reduction, s: f64) -> (Vec<DMatrix<f64>>, Vec<Vec<Option<DMatrix<f64>>>>) {
    let q = red.n.ncols();
    let mut g0 = Vec::new();
    let mut g = vec![Vec::new(); q];
    for b in &p.blocks {
        g0.push(b.eval(red.yp.as_slice()) / s);
        for (j, gj) in g.iter_mut().enumerate() {
            let mut acc: Option<DMatrix<f64>> = None;
            for (i, fi) in b.f.iter().enumerate() {
                let (Some(fi), c) = (fi, red.n[(i, j)]) else { continue };
                if c == 0.0 {
                    continue;
                }
                let term = fi * (c / s);
                acc = Some(match acc {
                    Some(a) => a + term,
                    None => term,
                });
            }
            gj.push(acc.filter(|m| m.amax() > 0.0));
        }
    }
    (g0, g)
}

/// Standard form with box blocks `R -+ z_j >= 0`; optionally the phase-1
/// variable `t` (last) with blocks `G(z) - t I` and `1 - t >= 0`.
fn standard_form(
    g0: &[DMatrix<f64>],
    g: &[Vec<Option<DMatrix<f64>>>],
    radius: f64,
    phase1: bool,
    b: DVector<f64>,
) -> StdProblem {
    let q = g.len();
    let nb = g0.len();
    let mut sizes: Vec<usize> = g0.iter().map(|m| m.nrows()).collect();
    let mut c: Vec<DMatrix<f64>> = g0.to_vec();
    if phase1 {
        sizes.push(1);
        c.push(one(1.0));
    }
    for _ in 0..q {
        sizes.extend([1, 1]);
        c.extend([one(radius), one(radius)]);
    }
    let nblocks = sizes.len();
    let box_start = nb + usize::from(phase1);
    let mut a = Vec::new();
    for (j, gj) in g.iter().enumerate() {
        let mut row: Vec<Option<DMatrix<f64>>> = gj.iter().map(|m| m.as_ref().map(|m| -m)).collect();
        row.resize(nblocks, None);
        row[box_start + 2 * j] = Some(one(1.0));
        row[box_start + 2 * j + 1] = Some(one(-1.0));
        a.push(row);
    }
    if phase1 {
        let mut row: Vec<Option<DMatrix<f64>>> = sizes[..nb].iter().map(|&s| Some(DMatrix::identity(s, s))).collect();
        row.push(Some(one(1.0)));
        row.resize(nblocks, None);
        a.push(row);
    }
    StdProblem { sizes, c, a, b }
}

fn clip_psd(m: &DMatrix<f64>) -> DMatrix<f64> {
    let s = (m + m.transpose()) * 0.5;
    let eig = s.symmetric_eigen();
    let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|v| v.max(0.0)));
    let r = &eig.eigenvectors * d * eig.eigenvectors.transpose();
    (&r + r.transpose()) * 0.5
}

/// Builds `(W, mu)` from block multipliers and completes the certificate.
pub(crate) fn farkas_from_w(p: &SDPProblem, w: Vec<DMatrix<f64>>) -> FarkasCertificate {
    let (e, _) = p.eq();
    let g = DVector::from_iterator(
        p.m,
        (0..p.m).map(|i| {
            p.blocks
                .iter()
                .zip(&w)
                .filter_map(|(b, wb)| b.f[i].as_ref().map(|fi| fi.dot(wb)))
                .sum::<f64>()
        }),
    );
    let mu = if e.nrows() == 0 {
        DVector::zeros(0)
    } else {
        let et = e.transpose();
        let pinv = et.clone().pseudo_inverse(1e-12).unwrap_or_else(|_| DMatrix::zeros(e.nrows(), p.m));
        -(pinv * &g)
    };
    complete_certificate(p, w, mu.as_slice().to_vec())
}

pub(crate) fn complete_certificate(p: &SDPProblem, w: Vec<DMatrix<f64>>, mu: Vec<f64>) -> FarkasCertificate {
    let (e, f) = p.eq();
    let muv = DVector::from_column_slice(&mu);
    let etmu = if e.nrows() == 0 { DVector::zeros(p.m) } else { e.transpose() * &muv };
    let residual: Vec<f64> = (0..p.m)
        .map(|i| {
            p.blocks
                .iter()
                .zip(&w)
                .filter_map(|(b, wb)| b.f[i].as_ref().map(|fi| fi.dot(wb)))
                .sum::<f64>()
                + etmu[i]
        })
        .collect();
    let margin = p.blocks.iter().zip(&w).map(|(b, wb)| b.f0.dot(wb)).sum::<f64>() - f.dot(&muv);
    let r1: f64 = residual.iter().map(|v| v.abs()).sum();
    let radius = (r1 > 0.0).then(|| -margin / r1);
    FarkasCertificate {
        w,
        mu,
        margin,
        residual,
        radius,
    }
}

fn stalled(p: &SDPProblem, y: Vec<f64>, phase1_value: f64, r: Option<&ipm::StdResult>) -> SDPSolution {
    SDPSolution {
        status: Status::Stalled,
        min_eigenvalues: p.block_min_eigenvalues(&y),
        y,
        objective: None,
        dual_blocks: vec![None; p.blocks.len()],
        certificate: None,
        phase1_value,
        iterations: r.map_or(0, |r| r.iterations),
        primal_residual: r.map_or(f64::NAN, |r| r.primal_residual),
        dual_residual: r.map_or(f64::NAN, |r| r.dual_residual),
        gap: r.map_or(f64::NAN, |r| r.gap),
    }
}

/// Solves the feasibility problem (phase 1) and, if feasible and an
/// objective is present, the optimisation problem (phase 2).
pub fn solve(p: &SDPProblem, config: &SolverConfig) -> Result<SDPSolution, SdpError> {
    p.validate()?;
    config.validate()?;
    let s = p.scale();
    let (e, f) = p.eq();
    let red = match reduce(&e, &f, p.m) {
        Ok(r) => r,
        Err(resid) => {
            // Inconsistent equalities: mu = residual, W = 0.
            let w = p.blocks.iter().map(|b| DMatrix::zeros(b.size(), b.size())).collect();
            let norm = resid.iter().map(|v| v.abs()).sum::<f64>();
            let mu: Vec<f64> = resid.iter().map(|v| v / norm).collect();
            let cert = complete_certificate(p, w, mu);
            let y = vec![0.0; p.m];
            let mut sol = stalled(p, y, f64::NEG_INFINITY, None);
            if verify::certificate_valid(p, &cert, config) {
                sol.status = Status::Infeasible;
                sol.certificate = Some(cert);
            }
            return Ok(sol);
        }
    };
    let q = red.n.ncols();
    let (g0, g) = reduced_blocks(p, &red, s);
    let nb = p.blocks.len();

    // Phase 1: maximise t.
    let mut b1 = DVector::zeros(q + 1);
    b1[q] = 1.0;
    let std1 = standard_form(&g0, &g, config.box_radius, true, b1);
    let r1 = ipm::solve(&std1, config.max_iter);
    let zvec = r1.y.rows(0, q).into_owned();
    let t = r1.y[q];
    let y1: Vec<f64> = (&red.yp + &red.n * &zvec).iter().cloned().collect();

    let feasible = verify::point_feasible(p, &y1, config);
    if !feasible {
        let w: Vec<DMatrix<f64>> = r1.x[..nb].iter().map(clip_psd).collect();
        let total: f64 = w.iter().map(|m| m.trace()).sum();
        let w: Vec<DMatrix<f64>> = if total > 0.0 { w.iter().map(|m| m / total).collect() } else { w };
        let cert = farkas_from_w(p, w);
        let mut sol = stalled(p, y1, t, Some(&r1));
        if verify::certificate_valid(p, &cert, config) {
            sol.status = Status::Infeasible;
            sol.certificate = Some(cert);
        }
        return Ok(sol);
    }

    let Some(c) = &p.objective else {
        let mut sol = stalled(p, y1, t, Some(&r1));
        sol.status = Status::Feasible;
        return Ok(sol);
    };

    // Phase 2: minimise c^T y = c^T yp + (N^T c)^T z, i.e. maximise -(N^T c)^T z.
    let cv = DVector::from_column_slice(c);
    let b2 = -(red.n.transpose() * &cv);
    let std2 = standard_form(&g0, &g, config.box_radius, false, b2);
    let r2 = ipm::solve(&std2, config.max_iter);
    let y2: Vec<f64> = (&red.yp + &red.n * &r2.y).iter().cloned().collect();
    if !r2.converged || !verify::point_feasible(p, &y2, config) {
        let mut sol = stalled(p, y1, t, Some(&r2));
        sol.iterations += r1.iterations;
        return Ok(sol);
    }
    let objective = cv.dot(&DVector::from_column_slice(&y2));
    // Dual blocks of the normalised problem are multipliers for G = F / s;
    // rescale so that <F_i, W> matches c_i.
    let dual_blocks = r2.x[..nb].iter().map(|x| Some(x / s)).collect();
    Ok(SDPSolution {
        status: Status::Feasible,
        min_eigenvalues: p.block_min_eigenvalues(&y2),
        y: y2,
        objective: Some(objective),
        dual_blocks,
        certificate: None,
        phase1_value: t,
        iterations: r1.iterations + r2.iterations,
        primal_residual: r2.primal_residual,
        dual_residual: r2.dual_residual,
        gap: r2.gap,
    })
}

/// Serde helpers: matrices as nested row arrays.
pub mod mat_serde {
    use nalgebra::DMatrix;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
        m.row_iter().map(|r| r.iter().cloned().collect()).collect()
    }

    fn from_rows(r: Vec<Vec<f64>>) -> Result<DMatrix<f64>, String> {
        let n = r.len();
        let c = r.first().map_or(0, Vec::len);
        if r.iter().any(|row| row.len() != c) {
            return Err("ragged matrix".into());
        }
        Ok(DMatrix::from_fn(n, c, |i, j| r[i][j]))
    }

    pub fn serialize<S: Serializer>(m: &DMatrix<f64>, s: S) -> Result<S::Ok, S::Error> {
        rows(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<DMatrix<f64>, D::Error> {
        from_rows(Vec::deserialize(d)?).map_err(serde::de::Error::custom)
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(ms: &[DMatrix<f64>], s: S) -> Result<S::Ok, S::Error> {
            ms.iter().map(rows).collect::<Vec<_>>().serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<DMatrix<f64>>, D::Error> {
            Vec::<Vec<Vec<f64>>>::deserialize(d)?
                .into_iter()
                .map(|r| from_rows(r).map_err(serde::de::Error::custom))
                .collect()
        }
    }

    pub mod opt_vec {
        use super::*;

        pub fn serialize<S: Serializer>(ms: &[Option<DMatrix<f64>>], s: S) -> Result<S::Ok, S::Error> {
            ms.iter().map(|m| m.as_ref().map(rows)).collect::<Vec<_>>().serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Option<DMatrix<f64>>>, D::Error> {
            Vec::<Option<Vec<Vec<f64>>>>::deserialize(d)?
                .into_iter()
                .map(|r| r.map(from_rows).transpose().map_err(serde::de::Error::custom))
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar_block(c0: f64, c: &[f64]) -> Block {
        Block {
            f0: one(c0),
            f: c.iter().map(|&v| (v != 0.0).then(|| one(v))).collect(),
        }
    }

    #[test]
    fn trivial_feasible() {
        let p = SDPProblem {
            m: 1,
            blocks: vec![scalar_block(0.0, &[1.0])],
            eq_matrix: vec![],
            eq_rhs: vec![],
            objective: None,
        };
        let s = solve(&p, &SolverConfig::default()).unwrap();
        assert_eq!(s.status, Status::Feasible);
        assert!(s.min_eigenvalues[0] >= 0.0);
        assert!(verify_solution(&p, &s, &SolverConfig::default()).ok);
    }

    #[test]
    fn constant_negative_block() {
        let p = SDPProblem {
            m: 1,
            blocks: vec![scalar_block(-1.0, &[0.0])],
            eq_matrix: vec![],
            eq_rhs: vec![],
            objective: None,
        };
        let s = solve(&p, &SolverConfig::default()).unwrap();
        assert_eq!(s.status, Status::Infeasible);
        let cert = s.certificate.as_ref().unwrap();
        assert!((cert.w[0][(0, 0)] - 1.0).abs() < 1e-6);
        assert!(verify_solution(&p, &s, &SolverConfig::default()).ok);
    }

    #[test]
    fn optimisation_with_equality() {
        // min y1 + y2 s.t. [[y1, 1], [1, y2]] >= 0, y1 - y2 = 0: optimum 2.
        let e = |i, j| {
            let mut m = DMatrix::zeros(2, 2);
            m[(i, j)] = 1.0;
            m[(j, i)] = 1.0;
            m
        };
        let p = SDPProblem {
            m: 2,
            blocks: vec![Block {
                f0: e(0, 1),
                f: vec![Some(e(0, 0)), Some(e(1, 1))],
            }],
            eq_matrix: vec![vec![1.0, -1.0]],
            eq_rhs: vec![0.0],
            objective: Some(vec![1.0, 1.0]),
        };
        let cfg = SolverConfig::default();
        let s = solve(&p, &cfg).unwrap();
        assert_eq!(s.status, Status::Feasible);
        assert!((s.objective.unwrap() - 2.0).abs() < 1e-6, "{:?}", s.objective);
        assert!(verify_solution(&p, &s, &cfg).ok);
    }

    #[test]
    fn inconsistent_equalities() {
        let p = SDPProblem {
            m: 1,
            blocks: vec![scalar_block(1.0, &[0.0])],
            eq_matrix: vec![vec![1.0], vec![1.0]],
            eq_rhs: vec![0.0, 1.0],
            objective: None,
        };
        let s = solve(&p, &SolverConfig::default()).unwrap();
        assert_eq!(s.status, Status::Infeasible);
        assert!(verify_solution(&p, &s, &SolverConfig::default()).ok);
    }

    #[test]
    fn rejects_bad_input() {
        let mut b = Block {
            f0: DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]),
            f: vec![],
        };
        let p = SDPProblem {
            m: 0,
            blocks: vec![b.clone()],
            eq_matrix: vec![],
            eq_rhs: vec![],
            objective: None,
        };
        assert!(matches!(solve(&p, &SolverConfig::default()), Err(SdpError::NotSymmetric { .. })));
        b.f0 = DMatrix::from_row_slice(2, 2, &[1.0, f64::NAN, f64::NAN, 1.0]);
        let p = SDPProblem { blocks: vec![b], ..p };
        assert!(matches!(solve(&p, &SolverConfig::default()), Err(SdpError::NonFinite { .. })));
    }

    #[test]
    fn json_round_trip() {
        let p = SDPProblem {
            m: 1,
            blocks: vec![scalar_block(0.0, &[1.0]), scalar_block(2.0, &[0.0])],
            eq_matrix: vec![],
            eq_rhs: vec![],
            objective: Some(vec![1.0]),
        };
        let s = serde_json::to_string(&p).unwrap();
        let back: SDPProblem = serde_json::from_str(&s).unwrap();
        assert_eq!(p, back);
    }
}
