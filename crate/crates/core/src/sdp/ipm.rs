//! Infeasible-start primal-dual path following (HKM direction, Mehrotra
//! predictor-corrector) for the block-diagonal standard form
//!
//! ```text
//!   (P)  min <C, X>   s.t. <A_k, X> = b_k,  X >= 0
//!   (D)  max b^T y    s.t. C - sum_k y_k A_k = Z >= 0
//! ```

use nalgebra::{DMatrix, DVector};

pub(crate) struct StdProblem {
    pub sizes: Vec<usize>,
    pub c: Vec<DMatrix<f64>>,
    /// `a[k][blk]`, `None` for an all-zero block.
    pub a: Vec<Vec<Option<DMatrix<f64>>>>,
    pub b: DVector<f64>,
}

pub(crate) struct StdResult {
    pub x: Vec<DMatrix<f64>>,
    pub y: DVector<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub gap: f64,
}

const TOL: f64 = 1e-9;

fn inner(a: &[DMatrix<f64>], b: &[DMatrix<f64>]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.dot(y)).sum()
}

fn sym(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

fn fro(ms: &[DMatrix<f64>]) -> f64 {
    ms.iter().map(|m| m.norm_squared()).sum::<f64>().sqrt()
}

impl StdProblem {
    fn apply(&self, x: &[DMatrix<f64>]) -> DVector<f64> {
        DVector::from_iterator(
            self.a.len(),
            self.a.iter().map(|ak| {
                ak.iter()
                    .zip(x)
                    .filter_map(|(a, xb)| a.as_ref().map(|a| a.dot(xb)))
                    .sum::<f64>()
            }),
        )
    }

    fn adjoint(&self, y: &DVector<f64>) -> Vec<DMatrix<f64>> {
        let mut out: Vec<DMatrix<f64>> = self.sizes.iter().map(|&s| DMatrix::zeros(s, s)).collect();
        for (k, ak) in self.a.iter().enumerate() {
            if y[k] == 0.0 {
                continue;
            }
            for (o, a) in out.iter_mut().zip(ak) {
                if let Some(a) = a {
                    *o += a * y[k];
                }
            }
        }
        out
    }

    fn total_dim(&self) -> f64 {
        self.sizes.iter().sum::<usize>() as f64
    }
}

/// Largest `alpha` with `x + alpha dx >= 0`, given `x > 0` (`f64::INFINITY` if unbounded).
fn max_step(x: &[DMatrix<f64>], dx: &[DMatrix<f64>]) -> Option<f64> {
    let mut alpha = f64::INFINITY;
    for (xb, dxb) in x.iter().zip(dx) {
        if xb.nrows() == 1 {
            if dxb[(0, 0)] < 0.0 {
                alpha = alpha.min(-xb[(0, 0)] / dxb[(0, 0)]);
            }
            continue;
        }
        let l = xb.clone().cholesky()?.l();
        let li = l.clone().try_inverse()?;
        let s = sym(&(&li * dxb * li.transpose()));
        let lmin = s.symmetric_eigenvalues().min();
        if lmin < 0.0 {
            alpha = alpha.min(-1.0 / lmin);
        }
    }
    Some(alpha)
}

fn inverse_spd(m: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    if m.nrows() == 1 {
        return (m[(0, 0)] > 0.0).then(|| DMatrix::from_element(1, 1, 1.0 / m[(0, 0)]));
    }
    Some(sym(&m.clone().cholesky()?.inverse()))
}

pub(crate) fn solve(p: &StdProblem, max_iter: usize) -> StdResult {
    let mdim = p.a.len();
    let nb = p.sizes.len();
    let n_tot = p.total_dim();

    let norm_c = fro(&p.c);
    let norm_b = p.b.norm();
    let a_norms: Vec<f64> = p
        .a
        .iter()
        .map(|ak| ak.iter().flatten().map(|a| a.norm_squared()).sum::<f64>().sqrt())
        .collect();
    let mut xi = 10f64.max(n_tot.sqrt());
    let mut eta = 10f64.max(n_tot.sqrt()).max(norm_c);
    for k in 0..mdim {
        xi = xi.max(n_tot.sqrt() * (1.0 + p.b[k].abs()) / (1.0 + a_norms[k]));
        eta = eta.max(a_norms[k]);
    }
    let mut x: Vec<DMatrix<f64>> = p.sizes.iter().map(|&s| DMatrix::identity(s, s) * xi).collect();
    let mut z: Vec<DMatrix<f64>> = p.sizes.iter().map(|&s| DMatrix::identity(s, s) * eta).collect();
    let mut y = DVector::zeros(mdim);

    let res = |x: &[DMatrix<f64>], y: &DVector<f64>, z: &[DMatrix<f64>], it: usize, conv: bool| {
        let rp = &p.b - p.apply(x);
        let aty = p.adjoint(y);
        let rd: Vec<DMatrix<f64>> = (0..nb).map(|b| &p.c[b] - &aty[b] - &z[b]).collect();
        let pobj = inner(&p.c, x);
        let dobj = p.b.dot(y);
        StdResult {
            x: x.to_vec(),
            y: y.clone(),
            iterations: it,
            converged: conv,
            primal_residual: rp.norm() / (1.0 + norm_b),
            dual_residual: fro(&rd) / (1.0 + norm_c),
            gap: (pobj - dobj).abs() / (1.0 + pobj.abs() + dobj.abs()),
        }
    };

    let mut stalls = 0;
    for it in 0..max_iter {
        let rp = &p.b - p.apply(&x);
        let aty = p.adjoint(&y);
        let rd: Vec<DMatrix<f64>> = (0..nb).map(|b| &p.c[b] - &aty[b] - &z[b]).collect();
        let mu = inner(&x, &z) / n_tot;
        let pobj = inner(&p.c, &x);
        let dobj = p.b.dot(&y);
        let rel_p = rp.norm() / (1.0 + norm_b);
        let rel_d = fro(&rd) / (1.0 + norm_c);
        let rel_gap = (pobj - dobj).abs() / (1.0 + pobj.abs() + dobj.abs());
        let rel_mu = mu * n_tot / (1.0 + pobj.abs() + dobj.abs());
        if rel_p < TOL && rel_d < TOL && rel_gap < TOL && rel_mu < TOL {
            return res(&x, &y, &z, it, true);
        }

        let Some(zinv) = z.iter().map(inverse_spd).collect::<Option<Vec<_>>>() else {
            return res(&x, &y, &z, it, false);
        };

        // Schur complement M_kl = <A_k, X A_l Z^-1>.
        let mut xaz: Vec<Vec<Option<DMatrix<f64>>>> = Vec::with_capacity(mdim);
        for al in &p.a {
            xaz.push(
                al.iter()
                    .enumerate()
                    .map(|(b, a)| a.as_ref().map(|a| &x[b] * a * &zinv[b]))
                    .collect(),
            );
        }
        let mut m = DMatrix::zeros(mdim, mdim);
        for k in 0..mdim {
            for l in 0..mdim {
                let mut acc = 0.0;
                for b in 0..nb {
                    if let (Some(ak), Some(pl)) = (&p.a[k][b], &xaz[l][b]) {
                        acc += ak.dot(&pl.transpose());
                    }
                }
                m[(k, l)] = acc;
            }
        }
        let m = sym(&m);
        let chol = m.clone().cholesky();
        let lu = m.lu();
        let solve_m = |rhs: &DVector<f64>| -> Option<DVector<f64>> {
            match &chol {
                Some(c) => Some(c.solve(rhs)),
                None => lu.solve(rhs),
            }
        };

        // X Rd Z^-1
        let xrdz: Vec<DMatrix<f64>> = (0..nb).map(|b| &x[b] * &rd[b] * &zinv[b]).collect();

        let direction = |h: &[DMatrix<f64>]| -> Option<(Vec<DMatrix<f64>>, DVector<f64>, Vec<DMatrix<f64>>)> {
            let t: Vec<DMatrix<f64>> = (0..nb).map(|b| &h[b] - &xrdz[b]).collect();
            let rhs = &rp - p.apply(&t);
            let dy = solve_m(&rhs)?;
            let atdy = p.adjoint(&dy);
            let dz: Vec<DMatrix<f64>> = (0..nb).map(|b| &rd[b] - &atdy[b]).collect();
            let dx: Vec<DMatrix<f64>> = (0..nb)
                .map(|b| sym(&(&h[b] - &x[b] * &dz[b] * &zinv[b])))
                .collect();
            if dy.iter().any(|v| !v.is_finite()) {
                return None;
            }
            Some((dx, dy, dz))
        };

        // Predictor: H = -X.
        let h_aff: Vec<DMatrix<f64>> = x.iter().map(|xb| -xb).collect();
        let Some((dxa, _dya, dza)) = direction(&h_aff) else {
            return res(&x, &y, &z, it, false);
        };
        let (Some(ap), Some(ad)) = (max_step(&x, &dxa), max_step(&z, &dza)) else {
            return res(&x, &y, &z, it, false);
        };
        let ap = ap.min(1.0);
        let ad = ad.min(1.0);
        let xa: Vec<DMatrix<f64>> = (0..nb).map(|b| &x[b] + &dxa[b] * ap).collect();
        let za: Vec<DMatrix<f64>> = (0..nb).map(|b| &z[b] + &dza[b] * ad).collect();
        let mu_aff = inner(&xa, &za) / n_tot;
        let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);

        // Corrector: H = sigma mu Z^-1 - X - dXa dZa Z^-1.
        let h: Vec<DMatrix<f64>> = (0..nb)
            .map(|b| &zinv[b] * (sigma * mu) - &x[b] - &dxa[b] * &dza[b] * &zinv[b])
            .collect();
        let Some((dx, dy, dz)) = direction(&h) else {
            return res(&x, &y, &z, it, false);
        };
        let (Some(ap), Some(ad)) = (max_step(&x, &dx), max_step(&z, &dz)) else {
            return res(&x, &y, &z, it, false);
        };
        let tau = 0.9 + 0.08 * ap.min(ad).min(1.0);
        let ap = (tau * ap).min(1.0);
        let ad = (tau * ad).min(1.0);
        if ap < 1e-12 && ad < 1e-12 {
            stalls += 1;
            if stalls > 3 {
                return res(&x, &y, &z, it, false);
            }
        }
        for b in 0..nb {
            x[b] = sym(&(&x[b] + &dx[b] * ap));
            z[b] = sym(&(&z[b] + &dz[b] * ad));
        }
        y += dy * ad;
    }
    res(&x, &y, &z, max_iter, false)
}
