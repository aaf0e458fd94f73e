//! Truncated quadratic modules and moment relaxations.
//!
//! `QM(p)_d = { sum_i sigma_i p_i : sigma_i SOS, deg(sigma_i p_i) <= d }`
//! with `p_0 = 1`. Each `sigma_i` is a Gram form over monomials of degree
//! at most `(d - deg p_i) / 2`. The dual object is a functional `L` on
//! polynomials of degree `<= d` with `L(1) = 1` whose localizing matrices
//! are PSD; `S(p)_d` is the set of `(L(t_1), ..., L(t_n))`.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linmat::QMatrix;
use crate::poly::rational::{int, rat, to_f64, Rational};
use crate::poly::{monomials_up_to, MPoly, Monomial};
use crate::sdp::{self, Block, FarkasCertificate, SDPProblem, SolverConfig, Status};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LasserreError {
    #[error("degree {degree} exceeds the truncation degree {d}")]
    DegreeOverflow { degree: u32, d: u32 },
    #[error("generator {0} is the zero polynomial")]
    ZeroGenerator(usize),
    #[error("expected {expected} variables, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("missing moment for monomial of degree {0}")]
    MissingMoment(u32),
    #[error("witness for generator {0} has a negative weight; not a sum of squares")]
    NotSos(usize),
    #[error("expected {expected} witnesses (one per generator plus p_0), got {got}")]
    WitnessCount { expected: usize, got: usize },
    #[error("tangent {index} is negative on a sample of S")]
    NegativeOnS { index: usize },
    #[error("tangent {index} is not linear")]
    NotLinear { index: usize },
    #[error(transparent)]
    Sdp(#[from] sdp::SdpError),
}

/// `p_1, ..., p_m` in `n` variables; `p_0 = 1` is implicit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Generators {
    pub n: usize,
    pub polys: Vec<MPoly>,
}

impl Generators {
    pub fn new(n: usize, polys: Vec<MPoly>) -> Result<Self, LasserreError> {
        for (i, p) in polys.iter().enumerate() {
            if p.is_zero() {
                return Err(LasserreError::ZeroGenerator(i + 1));
            }
            if p.nvars() != n {
                return Err(LasserreError::DimensionMismatch {
                    expected: n,
                    got: p.nvars(),
                });
            }
        }
        Ok(Generators { n, polys })
    }

    /// `[1, p_1, ..., p_m]`.
    pub fn with_unit(&self) -> Vec<MPoly> {
        std::iter::once(MPoly::one(self.n)).chain(self.polys.iter().cloned()).collect()
    }

    pub fn max_degree(&self) -> u32 {
        self.polys.iter().filter_map(|p| p.degree().finite()).max().unwrap_or(0)
    }

    /// Exact membership in `S = {p_i >= 0}`.
    pub fn contains(&self, x: &[Rational]) -> bool {
        self.polys.iter().all(|p| p.eval(x).map(|v| !v.is_negative()).unwrap_or(false))
    }

    pub fn contains_f64(&self, x: &[f64], tol: f64) -> bool {
        self.polys.iter().all(|p| p.eval_f64(x) >= -tol)
    }
}

/// Monomials of degree `<= k` in graded order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonomialBasis {
    pub n: usize,
    pub k: u32,
    pub monomials: Vec<Monomial>,
}

impl MonomialBasis {
    pub fn new(n: usize, k: u32) -> Self {
        MonomialBasis {
            n,
            k,
            monomials: monomials_up_to(n, k),
        }
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }
}

/// Values `y_alpha = L(t^alpha)` for `|alpha| <= d`, `y_0 = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentVector {
    pub n: usize,
    pub d: u32,
    pub values: Vec<f64>,
    index: HashMap<Monomial, usize>,
}

impl Serialize for MomentVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let labels: Vec<String> = monomials_up_to(self.n, self.d)
            .iter()
            .map(|m| MPoly::from_terms(self.n, [(m.clone(), int(1))]).to_string())
            .collect();
        let mut st = s.serialize_struct("MomentVector", 4)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("d", &self.d)?;
        st.serialize_field("monomials", &labels)?;
        st.serialize_field("values", &self.values)?;
        st.end()
    }
}

impl MomentVector {
    pub fn new(n: usize, d: u32, values: Vec<f64>) -> Result<Self, LasserreError> {
        let basis = monomials_up_to(n, d);
        if basis.len() != values.len() {
            return Err(LasserreError::DimensionMismatch {
                expected: basis.len(),
                got: values.len(),
            });
        }
        let index = basis.into_iter().enumerate().map(|(i, m)| (m, i)).collect();
        Ok(MomentVector { n, d, values, index })
    }

    pub fn get(&self, m: &Monomial) -> Option<f64> {
        self.index.get(m).map(|&i| self.values[i])
    }

    /// `L(q)` for `deg q <= d`.
    pub fn apply(&self, q: &MPoly) -> Result<f64, LasserreError> {
        let mut acc = 0.0;
        for (m, c) in q.terms() {
            acc += to_f64(c) * self.get(m).ok_or(LasserreError::MissingMoment(m.degree()))?;
        }
        Ok(acc)
    }

    /// Restriction to degree `<= d`.
    pub fn truncate(&self, d: u32) -> MomentVector {
        let d = d.min(self.d);
        let values = monomials_up_to(self.n, d)
            .iter()
            .map(|m| self.get(m).expect("lower-degree moment present"))
            .collect();
        MomentVector::new(self.n, d, values).expect("consistent sizes")
    }

    /// Projection `(L(t_1), ..., L(t_n))`.
    pub fn projection(&self) -> Vec<f64> {
        (0..self.n)
            .map(|j| self.get(&Monomial::var(self.n, j)).unwrap_or(f64::NAN))
            .collect()
    }
}

pub fn point_evaluation_moments(x: &[f64], d: u32) -> MomentVector {
    let n = x.len();
    let values = monomials_up_to(n, d).iter().map(|m| m.eval_f64(x)).collect();
    MomentVector::new(n, d, values).expect("consistent sizes")
}

fn gram_degree(g: &MPoly, d: u32) -> Result<u32, LasserreError> {
    let dg = g.degree().finite().unwrap_or(0);
    if dg > d {
        return Err(LasserreError::DegreeOverflow { degree: dg, d });
    }
    Ok((d - dg) / 2)
}

/// Localizing matrix of `g` at truncation `d`: entry `(a, b)` is
/// `sum_c g_c y_{a+b+c}` over the basis of degree `(d - deg g) / 2`.
pub fn localizing_matrix(g: &MPoly, d: u32, y: &MomentVector) -> Result<DMatrix<f64>, LasserreError> {
    let basis = MonomialBasis::new(y.n, gram_degree(g, d)?);
    let k = basis.len();
    let mut m = DMatrix::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            let ab = basis.monomials[i].mul(&basis.monomials[j]);
            let mut acc = 0.0;
            for (c, gc) in g.terms() {
                let mono = ab.mul(c);
                acc += to_f64(gc) * y.get(&mono).ok_or(LasserreError::MissingMoment(mono.degree()))?;
            }
            m[(i, j)] = acc;
            m[(j, i)] = acc;
        }
    }
    Ok(m)
}

/// Exact localizing matrix of `g` for the evaluation functional at rational `x`.
pub fn localizing_matrix_exact(g: &MPoly, d: u32, x: &[Rational]) -> Result<QMatrix, LasserreError> {
    let basis = MonomialBasis::new(x.len(), gram_degree(g, d)?);
    let gx = g.eval(x).map_err(|_| LasserreError::DimensionMismatch {
        expected: g.nvars(),
        got: x.len(),
    })?;
    let v: Vec<Rational> = basis
        .monomials
        .iter()
        .map(|m| MPoly::from_terms(x.len(), [(m.clone(), int(1))]).eval(x).expect("arity checked"))
        .collect();
    let rows = v.iter().map(|a| v.iter().map(|b| a * b * &gx).collect()).collect();
    Ok(QMatrix::from_rows(rows).expect("square"))
}

/// Moment variables `y_alpha` for the monomials `vars` (all others fixed via `fixed`).
struct MomentLayout {
    n: usize,
    d: u32,
    /// Monomials that are SDP variables, in order.
    vars: Vec<Monomial>,
    var_index: HashMap<Monomial, usize>,
    fixed: HashMap<Monomial, f64>,
}

impl MomentLayout {
    fn new(n: usize, d: u32, fixed: HashMap<Monomial, f64>) -> Self {
        let vars: Vec<Monomial> = monomials_up_to(n, d).into_iter().filter(|m| !fixed.contains_key(m)).collect();
        let var_index = vars.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        MomentLayout {
            n,
            d,
            vars,
            var_index,
            fixed,
        }
    }

    fn localizing_block(&self, g: &MPoly) -> Result<Block, LasserreError> {
        let basis = MonomialBasis::new(self.n, gram_degree(g, self.d)?);
        let k = basis.len();
        let mut f0 = DMatrix::zeros(k, k);
        let mut f: Vec<Option<DMatrix<f64>>> = vec![None; self.vars.len()];
        for i in 0..k {
            for j in i..k {
                let ab = basis.monomials[i].mul(&basis.monomials[j]);
                for (c, gc) in g.terms() {
                    let mono = ab.mul(c);
                    let coef = to_f64(gc);
                    if let Some(v) = self.fixed.get(&mono) {
                        f0[(i, j)] += coef * v;
                        if i != j {
                            f0[(j, i)] += coef * v;
                        }
                    } else {
                        let idx = self.var_index[&mono];
                        let m = f[idx].get_or_insert_with(|| DMatrix::zeros(k, k));
                        m[(i, j)] += coef;
                        if i != j {
                            m[(j, i)] += coef;
                        }
                    }
                }
            }
        }
        Ok(Block { f0, f })
    }

    fn moments(&self, y: &[f64]) -> MomentVector {
        let values = monomials_up_to(self.n, self.d)
            .iter()
            .map(|m| match self.fixed.get(m) {
                Some(v) => *v,
                None => y[self.var_index[m]],
            })
            .collect();
        MomentVector::new(self.n, self.d, values).expect("consistent sizes")
    }
}

/// Float polynomial as a coefficient map.
type FPoly = HashMap<Monomial, f64>;

fn gram_form_times(basis: &MonomialBasis, g: &DMatrix<f64>, p: &MPoly, acc: &mut FPoly) {
    let k = basis.len();
    for i in 0..k {
        for j in 0..k {
            let gij = g[(i, j)];
            if gij == 0.0 {
                continue;
            }
            let ab = basis.monomials[i].mul(&basis.monomials[j]);
            for (c, pc) in p.terms() {
                *acc.entry(ab.mul(c)).or_insert(0.0) += gij * to_f64(pc);
            }
        }
    }
}

fn clip_psd(m: &DMatrix<f64>) -> DMatrix<f64> {
    let s = (m + m.transpose()) * 0.5;
    let eig = s.symmetric_eigen();
    let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|v| v.max(0.0)));
    let r = &eig.eigenvectors * d * eig.eigenvectors.transpose();
    (&r + r.transpose()) * 0.5
}

/// Gram certificate `l = sum_i v_i^T G_i v_i p_i` (with `p_0 = 1` first).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QMCertificate {
    pub d: u32,
    pub gram_degrees: Vec<u32>,
    #[serde(with = "sdp::mat_serde::vec")]
    pub grams: Vec<DMatrix<f64>>,
    pub min_eigenvalues: Vec<f64>,
    /// Largest absolute coefficient of `l - sum_i sigma_i p_i`.
    pub residual: f64,
}

/// Separating functional: `L(1) = 1`, localizing matrices PSD, `L(l) < 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualCertificate {
    pub moments: MomentVector,
    pub value: f64,
    pub localizing_min_eigenvalues: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum QmOutcome {
    Certified { certificate: QMCertificate },
    Refuted { certificate: DualCertificate },
    Undecided { reason: String },
}

impl QmOutcome {
    pub fn label(&self) -> &'static str {
        match self {
            QmOutcome::Certified { .. } => "CERTIFIED",
            QmOutcome::Refuted { .. } => "REFUTED",
            QmOutcome::Undecided { .. } => "UNDECIDED",
        }
    }
}

/// Tolerances for certificate checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertTolerances {
    /// Gram residual bound.
    pub cert_tol: f64,
    /// Localizing matrices must have min eigenvalue `>= -psd_tol`.
    pub psd_tol: f64,
    /// Refutations need `L(l) <= -refute_tol`.
    pub refute_tol: f64,
}

impl Default for CertTolerances {
    fn default() -> Self {
        CertTolerances {
            cert_tol: 1e-6,
            psd_tol: 1e-7,
            refute_tol: 1e-6,
        }
    }
}

/// Numeric re-expansion of a Gram certificate.
pub fn verify_qm_certificate(gens: &Generators, ell: &MPoly, cert: &QMCertificate, tol: &CertTolerances) -> bool {
    let all = gens.with_unit();
    if cert.grams.len() != all.len() {
        return false;
    }
    let mut acc: FPoly = HashMap::new();
    for ((g, p), &k) in cert.grams.iter().zip(&all).zip(&cert.gram_degrees) {
        let basis = MonomialBasis::new(gens.n, k);
        if g.nrows() != basis.len() || g.ncols() != basis.len() {
            return false;
        }
        if p.degree().finite().unwrap_or(0) + 2 * k > cert.d {
            return false;
        }
        if crate::sdp::min_eig(g) < -tol.psd_tol * (1.0 + g.amax()) {
            return false;
        }
        gram_form_times(&basis, g, p, &mut acc);
    }
    residual_max(ell, &acc) <= tol.cert_tol
}

fn residual_max(ell: &MPoly, acc: &FPoly) -> f64 {
    let mut r = acc.clone();
    for (m, c) in ell.terms() {
        *r.entry(m.clone()).or_insert(0.0) -= to_f64(c);
    }
    r.values().fold(0.0f64, |a, v| a.max(v.abs()))
}

/// Independent check of a dual certificate against `gens`, `d` and `l`.
pub fn verify_dual_certificate(gens: &Generators, d: u32, ell: &MPoly, cert: &DualCertificate, tol: &CertTolerances) -> bool {
    let y = &cert.moments;
    if y.d != d || y.n != gens.n || (y.values[0] - 1.0).abs() > 1e-12 {
        return false;
    }
    for g in gens.with_unit() {
        let Ok(m) = localizing_matrix(&g, d, y) else {
            return false;
        };
        if crate::sdp::min_eig(&m) < -tol.psd_tol {
            return false;
        }
    }
    matches!(y.apply(ell), Ok(v) if v <= -tol.refute_tol)
}

fn check_degrees(gens: &Generators, d: u32, ell: Option<&MPoly>) -> Result<(), LasserreError> {
    let dg = gens.max_degree();
    if dg > d {
        return Err(LasserreError::DegreeOverflow { degree: dg, d });
    }
    if let Some(ell) = ell {
        if ell.nvars() != gens.n {
            return Err(LasserreError::DimensionMismatch {
                expected: gens.n,
                got: ell.nvars(),
            });
        }
        let de = ell.degree().finite().unwrap_or(0);
        if de > d {
            return Err(LasserreError::DegreeOverflow { degree: de, d });
        }
    }
    Ok(())
}

/// The moment problem `min L(l)` used by [`qm_member`], exposed for
/// regression fixtures.
pub fn qm_problem(gens: &Generators, d: u32, ell: &MPoly) -> Result<SDPProblem, LasserreError> {
    check_degrees(gens, d, Some(ell))?;
    let mut fixed = HashMap::new();
    fixed.insert(Monomial::one(gens.n), 1.0);
    let layout = MomentLayout::new(gens.n, d, fixed);
    let mut blocks = gens
        .with_unit()
        .iter()
        .map(|g| layout.localizing_block(g))
        .collect::<Result<Vec<_>, _>>()?;
    let c: Vec<f64> = layout.vars.iter().map(|m| to_f64(&ell.coeff(m))).collect();
    // B + L(l) >= 0 keeps the objective bounded below.
    let l1: f64 = ell.terms().map(|(_, c)| to_f64(c).abs()).sum();
    let bound = 1.0 + l1;
    blocks.push(Block {
        f0: DMatrix::from_element(1, 1, bound + to_f64(&ell.constant_term())),
        f: c.iter().map(|&v| (v != 0.0).then(|| DMatrix::from_element(1, 1, v))).collect(),
    });
    Ok(SDPProblem {
        m: layout.vars.len(),
        blocks,
        eq_matrix: vec![],
        eq_rhs: vec![],
        objective: Some(c),
    })
}

/// Decides `l in QM(p)_d` numerically, returning a checked certificate either way.
pub fn qm_member(
    gens: &Generators,
    d: u32,
    ell: &MPoly,
    cfg: &SolverConfig,
    tol: &CertTolerances,
) -> Result<QmOutcome, LasserreError> {
    let problem = qm_problem(gens, d, ell)?;
    let mut fixed = HashMap::new();
    fixed.insert(Monomial::one(gens.n), 1.0);
    let layout = MomentLayout::new(gens.n, d, fixed);
    let sol = sdp::solve(&problem, cfg)?;
    if sol.status != Status::Feasible || sol.objective.is_none() {
        return Ok(QmOutcome::Undecided {
            reason: format!("moment problem status {:?}", sol.status),
        });
    }
    let moments = layout.moments(&sol.y);
    let value = moments.apply(ell)?;
    let all = gens.with_unit();

    if value < -tol.refute_tol {
        let mins = all
            .iter()
            .map(|g| localizing_matrix(g, d, &moments).map(|m| crate::sdp::min_eig(&m)))
            .collect::<Result<Vec<_>, _>>()?;
        let cert = DualCertificate {
            moments,
            value,
            localizing_min_eigenvalues: mins,
        };
        if verify_dual_certificate(gens, d, ell, &cert, tol) {
            return Ok(QmOutcome::Refuted { certificate: cert });
        }
        return Ok(QmOutcome::Undecided {
            reason: "negative optimum but the moment functional failed verification".into(),
        });
    }

    // Gram matrices from the dual blocks: sum_i coef(sigma_i p_i) + w_B l = l
    // on nonconstant monomials, so G_i = W_i / (1 - w_B).
    let nb = all.len();
    let duals: Option<Vec<DMatrix<f64>>> = sol.dual_blocks.iter().cloned().collect();
    let Some(duals) = duals else {
        return Ok(QmOutcome::Undecided {
            reason: "solver returned no dual blocks".into(),
        });
    };
    let w_b = duals[nb][(0, 0)];
    if !(w_b < 1.0 - 1e-9) {
        return Ok(QmOutcome::Undecided {
            reason: "bounding multiplier saturated".into(),
        });
    }
    let degrees: Vec<u32> = all.iter().map(|g| gram_degree(g, d)).collect::<Result<_, _>>()?;
    let mut grams: Vec<DMatrix<f64>> = duals[..nb].iter().map(|w| clip_psd(&(w / (1.0 - w_b)))).collect();
    let mut acc: FPoly = HashMap::new();
    for ((g, p), &k) in grams.iter().zip(&all).zip(&degrees) {
        gram_form_times(&MonomialBasis::new(gens.n, k), g, p, &mut acc);
    }
    // Nonnegative constant slack goes into sigma_0.
    let one = Monomial::one(gens.n);
    let slack = to_f64(&ell.constant_term()) - acc.get(&one).copied().unwrap_or(0.0);
    if slack > 0.0 {
        grams[0][(0, 0)] += slack;
        *acc.entry(one).or_insert(0.0) += slack;
    }
    let residual = residual_max(ell, &acc);
    let min_eigenvalues = grams.iter().map(crate::sdp::min_eig).collect();
    let cert = QMCertificate {
        d,
        gram_degrees: degrees,
        grams,
        min_eigenvalues,
        residual,
    };
    if verify_qm_certificate(gens, ell, &cert, tol) {
        Ok(QmOutcome::Certified { certificate: cert })
    } else {
        Ok(QmOutcome::Undecided {
            reason: format!("optimum {value:.3e} but Gram residual {residual:.3e} exceeds tolerance"),
        })
    }
}

/// `sum_j w_j q_j^2` with `w_j >= 0`, an explicit sum of squares.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SosPoly {
    pub n: usize,
    pub squares: Vec<(Rational, MPoly)>,
}

impl SosPoly {
    pub fn zero(n: usize) -> Self {
        SosPoly { n, squares: Vec::new() }
    }

    pub fn square(weight: Rational, q: MPoly) -> Self {
        SosPoly {
            n: q.nvars(),
            squares: vec![(weight, q)],
        }
    }

    pub fn expand(&self) -> MPoly {
        self.squares
            .iter()
            .fold(MPoly::zero(self.n), |acc, (w, q)| &acc + &(q * q).scale(w))
    }
}

/// Exact check `sum_i sigma_i p_i == l` with `sigma_0` first, each
/// `sigma_i` an explicit weighted sum of squares and `deg(sigma_i p_i) <= d`.
pub fn verify_qm_certificate_exact(gens: &Generators, d: u32, ell: &MPoly, witness: &[SosPoly]) -> Result<bool, LasserreError> {
    let all = gens.with_unit();
    if witness.len() != all.len() {
        return Err(LasserreError::WitnessCount {
            expected: all.len(),
            got: witness.len(),
        });
    }
    let mut acc = MPoly::zero(gens.n);
    for (i, (sigma, p)) in witness.iter().zip(&all).enumerate() {
        if sigma.squares.iter().any(|(w, _)| w.is_negative()) {
            return Err(LasserreError::NotSos(i));
        }
        let term = &sigma.expand() * p;
        if let Some(deg) = term.degree().finite() {
            if deg > d {
                return Err(LasserreError::DegreeOverflow { degree: deg, d });
            }
        }
        acc = &acc + &term;
    }
    Ok(&acc == ell)
}

/// The explicit witness for the tangent `l_a` over `(t2 - t1^3, t1, 1 - t2)`:
/// `sigma_0 = 2a (t1 - a)^2`, `sigma_{t1} = (t1 - a)^2`, `sigma_{t2 - t1^3} = 1`.
pub fn tangent_witness(a: &Rational) -> Vec<SosPoly> {
    let t1_minus_a = MPoly::affine(-a.clone(), &[int(1), int(0)]);
    vec![
        SosPoly::square(int(2) * a, t1_minus_a.clone()),
        SosPoly::square(int(1), MPoly::one(2)),
        SosPoly::square(int(1), t1_minus_a),
        SosPoly::zero(2),
    ]
}

/// Affine separator `l*(t) = c0 + sum c_j t_j`, in `QM(p)_d` up to `residual`,
/// with `l*(x) < 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Separator {
    pub coefficients: Vec<f64>,
    pub value_at_point: f64,
    /// Largest coefficient of degree `>= 2` left over in `sum sigma_i p_i`.
    pub residual: f64,
    pub farkas: FarkasCertificate,
}

impl Separator {
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.coefficients[0] + self.coefficients[1..].iter().zip(x).map(|(c, v)| c * v).sum::<f64>()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RelaxOutcome {
    In { moments: MomentVector },
    Out { separator: Separator },
    Undecided { reason: String },
}

impl RelaxOutcome {
    pub fn label(&self) -> &'static str {
        match self {
            RelaxOutcome::In { .. } => "IN",
            RelaxOutcome::Out { .. } => "OUT",
            RelaxOutcome::Undecided { .. } => "UNDECIDED",
        }
    }
}

fn relax_layout(n: usize, d: u32, x: &[f64]) -> MomentLayout {
    let mut fixed = HashMap::new();
    fixed.insert(Monomial::one(n), 1.0);
    for (j, xj) in x.iter().enumerate() {
        fixed.insert(Monomial::var(n, j), *xj);
    }
    MomentLayout::new(n, d, fixed)
}

/// Feasibility problem `L(1) = 1, L(t_j) = x_j`, localizing matrices PSD.
pub fn relaxation_problem(gens: &Generators, d: u32, x: &[f64]) -> Result<SDPProblem, LasserreError> {
    check_degrees(gens, d, None)?;
    if x.len() != gens.n {
        return Err(LasserreError::DimensionMismatch {
            expected: gens.n,
            got: x.len(),
        });
    }
    let layout = relax_layout(gens.n, d, x);
    let blocks = gens
        .with_unit()
        .iter()
        .map(|g| layout.localizing_block(g))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SDPProblem {
        m: layout.vars.len(),
        blocks,
        eq_matrix: vec![],
        eq_rhs: vec![],
        objective: None,
    })
}

/// Is `x` in `S(p)_d`?
pub fn relaxation_member(gens: &Generators, d: u32, x: &[f64], cfg: &SolverConfig) -> Result<RelaxOutcome, LasserreError> {
    let problem = relaxation_problem(gens, d, x)?;
    let layout = relax_layout(gens.n, d, x);
    let sol = sdp::solve(&problem, cfg)?;
    match sol.status {
        Status::Feasible => Ok(RelaxOutcome::In {
            moments: layout.moments(&sol.y),
        }),
        Status::Stalled => Ok(RelaxOutcome::Undecided {
            reason: "solver stalled".into(),
        }),
        Status::Infeasible => {
            let farkas = sol.certificate.expect("infeasible verdicts carry a certificate");
            // sum_i sigma_i p_i with sigma_i = v^T W_i v.
            let mut acc: FPoly = HashMap::new();
            for (w, g) in farkas.w.iter().zip(gens.with_unit()) {
                let k = gram_degree(&g, d)?;
                gram_form_times(&MonomialBasis::new(gens.n, k), w, &g, &mut acc);
            }
            let n = gens.n;
            let mut coefficients = vec![acc.get(&Monomial::one(n)).copied().unwrap_or(0.0)];
            coefficients.extend((0..n).map(|j| acc.get(&Monomial::var(n, j)).copied().unwrap_or(0.0)));
            let residual = acc
                .iter()
                .filter(|(m, _)| m.degree() >= 2)
                .fold(0.0f64, |a, (_, v)| a.max(v.abs()));
            let mut sep = Separator {
                coefficients,
                value_at_point: 0.0,
                residual,
                farkas,
            };
            sep.value_at_point = sep.eval(x);
            Ok(RelaxOutcome::Out { separator: sep })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NestingEntry {
    pub x: Vec<f64>,
    pub upper: &'static str,
    pub lower: &'static str,
    /// The degree-`d` truncation of the degree-`d+1` witness is PSD-feasible.
    pub truncation_ok: Option<bool>,
    pub violation: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NestingReport {
    pub d: u32,
    pub entries: Vec<NestingEntry>,
    pub violations: usize,
}

/// Checks `S(p)_{d+1} ⊆ S(p)_d` on sample points.
pub fn nesting_check(gens: &Generators, d: u32, points: &[Vec<f64>], cfg: &SolverConfig) -> Result<NestingReport, LasserreError> {
    check_degrees(gens, d, None)?;
    let mut entries = Vec::new();
    for x in points {
        let upper = relaxation_member(gens, d + 1, x, cfg)?;
        let lower = relaxation_member(gens, d, x, cfg)?;
        let truncation_ok = match &upper {
            RelaxOutcome::In { moments } => {
                let t = moments.truncate(d);
                let mut ok = true;
                for g in gens.with_unit() {
                    let m = localizing_matrix(&g, d, &t)?;
                    ok &= crate::sdp::min_eig(&m) >= -cfg.feas_tol * (1.0 + m.norm());
                }
                Some(ok)
            }
            _ => None,
        };
        let violation = matches!(upper, RelaxOutcome::In { .. })
            && (matches!(lower, RelaxOutcome::Out { .. }) || truncation_ok == Some(false));
        entries.push(NestingEntry {
            x: x.clone(),
            upper: upper.label(),
            lower: lower.label(),
            truncation_ok,
            violation,
        });
    }
    let violations = entries.iter().filter(|e| e.violation).count();
    Ok(NestingReport { d, entries, violations })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Evidence {
    /// Every tangent certified.
    ForExactness,
    /// Some tangent refuted: the relaxation is not exact at this degree.
    AgainstExactness,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub d: u32,
    pub tangents: Vec<(String, QmOutcome)>,
    pub points: Vec<(Vec<f64>, RelaxOutcome)>,
    pub evidence: Evidence,
}

/// Runs `qm_member` on each tangent and `relaxation_member` on each point.
/// Tangents must be linear and nonnegative on every sample of `S`.
pub fn exactness_probe(
    gens: &Generators,
    d: u32,
    tangents: &[MPoly],
    points: &[Vec<f64>],
    s_samples: &[Vec<Rational>],
    cfg: &SolverConfig,
    tol: &CertTolerances,
) -> Result<ProbeReport, LasserreError> {
    for (index, ell) in tangents.iter().enumerate() {
        if ell.degree().finite().unwrap_or(0) > 1 {
            return Err(LasserreError::NotLinear { index });
        }
        for y in s_samples {
            if ell.eval(y).map(|v| v.is_negative()).unwrap_or(true) {
                return Err(LasserreError::NegativeOnS { index });
            }
        }
    }
    let mut out = Vec::new();
    for ell in tangents {
        out.push((ell.to_string(), qm_member(gens, d, ell, cfg, tol)?));
    }
    let mut pts = Vec::new();
    for x in points {
        pts.push((x.clone(), relaxation_member(gens, d, x, cfg)?));
    }
    let evidence = if out.iter().any(|(_, o)| matches!(o, QmOutcome::Refuted { .. })) {
        Evidence::AgainstExactness
    } else if out.iter().all(|(_, o)| matches!(o, QmOutcome::Certified { .. })) {
        Evidence::ForExactness
    } else {
        Evidence::Inconclusive
    };
    Ok(ProbeReport {
        d,
        tangents: out,
        points: pts,
        evidence,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HalvingStep {
    pub a: String,
    pub status: &'static str,
    pub value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HalvingReport {
    pub d: u32,
    pub steps: Vec<HalvingStep>,
    /// First `a` (from 1/2 downwards) whose tangent was refuted.
    pub a_star: Option<String>,
    pub certificate: Option<DualCertificate>,
}

/// Halves `a` from `1/2` down to `2^-20` until `qm_member` refutes the tangent `l_a`.
pub fn halving_probe(gens: &Generators, d: u32, cfg: &SolverConfig, tol: &CertTolerances) -> Result<HalvingReport, LasserreError> {
    let mut a = rat(1, 2);
    let floor = rat(1, 1 << 20);
    let mut steps = Vec::new();
    while a >= floor {
        let ell = crate::example2::tangent(&a);
        let outcome = qm_member(gens, d, &ell, cfg, tol)?;
        let value = match &outcome {
            QmOutcome::Refuted { certificate } => Some(certificate.value),
            _ => None,
        };
        steps.push(HalvingStep {
            a: a.to_string(),
            status: outcome.label(),
            value,
        });
        if let QmOutcome::Refuted { certificate } = outcome {
            return Ok(HalvingReport {
                d,
                steps,
                a_star: Some(a.to_string()),
                certificate: Some(certificate),
            });
        }
        a /= int(2);
    }
    Ok(HalvingReport {
        d,
        steps,
        a_star: None,
        certificate: None,
    })
}

/// Rational grid points of `[lo, hi]^2`-style boxes lying in `S` (exact test).
pub fn sample_set_grid(gens: &Generators, bbox: &[(Rational, Rational)], steps: usize) -> Vec<Vec<Rational>> {
    let axes: Vec<Vec<Rational>> = bbox
        .iter()
        .map(|(lo, hi)| {
            (0..=steps)
                .map(|i| lo + (hi - lo) * Rational::new(i.into(), steps.max(1).into()))
                .collect()
        })
        .collect();
    let mut out = vec![Vec::new()];
    for axis in &axes {
        out = out
            .into_iter()
            .flat_map(|p: Vec<Rational>| {
                axis.iter().map(move |v| {
                    let mut q = p.clone();
                    q.push(v.clone());
                    q
                })
            })
            .collect();
    }
    out.retain(|x| gens.contains(x));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::example2;
    use num_traits::Zero;

    fn one_var(s: &str) -> MPoly {
        MPoly::parse(s, 1).unwrap()
    }

    #[test]
    fn localizing_examples() {
        let y = point_evaluation_moments(&[2.0], 2);
        let m = localizing_matrix(&one_var("1"), 2, &y).unwrap();
        assert_eq!(m, DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]));
        let y0 = point_evaluation_moments(&[0.0], 2);
        let m = localizing_matrix(&one_var("1"), 2, &y0).unwrap();
        assert_eq!(m, DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]));
        let y3 = point_evaluation_moments(&[2.0], 3);
        let m = localizing_matrix(&one_var("t1"), 3, &y3).unwrap();
        assert_eq!(m, DMatrix::from_row_slice(2, 2, &[2.0, 4.0, 4.0, 8.0]));
        assert!(matches!(
            localizing_matrix(&one_var("t1^3"), 2, &y),
            Err(LasserreError::DegreeOverflow { .. })
        ));
    }

    #[test]
    fn point_moments() {
        let y = point_evaluation_moments(&[0.0, 0.0], 4);
        assert_eq!(y.values[0], 1.0);
        assert!(y.values[1..].iter().all(|&v| v == 0.0));
        let y = point_evaluation_moments(&[1.0, 1.0], 2);
        assert!(y.values.iter().all(|&v| v == 1.0));
        let y = point_evaluation_moments(&[2.0, 3.0], 2);
        assert_eq!(y.get(&Monomial::new(vec![1, 1])), Some(6.0));
        assert_eq!(y.get(&Monomial::new(vec![2, 0])), Some(4.0));
    }

    #[test]
    fn exact_witness() {
        let gens = Generators::new(2, example2::triple()).unwrap();
        for a in [rat(0, 1), rat(1, 4), rat(1, 2), rat(3, 4), rat(1, 1)] {
            let ell = example2::tangent(&a);
            assert!(verify_qm_certificate_exact(&gens, 3, &ell, &tangent_witness(&a)).unwrap());
        }
        let g1 = Generators::new(1, vec![one_var("t1")]).unwrap();
        let w = vec![SosPoly::square(int(1), MPoly::one(1)), SosPoly::zero(1)];
        assert!(verify_qm_certificate_exact(&g1, 2, &MPoly::one(1), &w).unwrap());
        assert!(!verify_qm_certificate_exact(&g1, 2, &one_var("t1"), &w).unwrap());
        let neg = vec![SosPoly::square(int(-1), MPoly::one(1)), SosPoly::zero(1)];
        assert!(matches!(
            verify_qm_certificate_exact(&g1, 2, &one_var("-1"), &neg),
            Err(LasserreError::NotSos(0))
        ));
    }

    #[test]
    fn qm_small_cases() {
        let cfg = SolverConfig::default();
        let tol = CertTolerances::default();
        let g1 = Generators::new(1, vec![one_var("t1")]).unwrap();
        let out = qm_member(&g1, 2, &one_var("t1"), &cfg, &tol).unwrap();
        assert_eq!(out.label(), "CERTIFIED", "{out:?}");
        let out = qm_member(&g1, 2, &one_var("-1"), &cfg, &tol).unwrap();
        match out {
            QmOutcome::Refuted { certificate } => assert!(certificate.value <= -1.0 + 1e-6),
            other => panic!("{other:?}"),
        }
        let interval = Generators::new(1, vec![one_var("t1"), one_var("1 - t1")]).unwrap();
        assert_eq!(qm_member(&interval, 1, &one_var("t1"), &cfg, &tol).unwrap().label(), "CERTIFIED");
    }

    #[test]
    fn relax_small_cases() {
        let cfg = SolverConfig::default();
        let gens = Generators::new(2, example2::four()).unwrap();
        let out = relaxation_member(&gens, 3, &[-0.5, 0.5], &cfg).unwrap();
        assert_eq!(out.label(), "IN");
        match relaxation_member(&gens, 3, &[5.0, 5.0], &cfg).unwrap() {
            RelaxOutcome::Out { separator } => {
                assert!(separator.value_at_point < 0.0);
                assert!(separator.residual < 1e-6);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn exact_moment_matrix_rank_one() {
        let x = vec![rat(1, 3), rat(-2, 5)];
        let m = localizing_matrix_exact(&MPoly::one(2), 4, &x).unwrap();
        assert!(crate::linmat::is_psd_exact(&m).unwrap());
        // Every 2x2 minor vanishes.
        let k = m.dim();
        for i in 0..k {
            for j in 0..k {
                let minor = m.get(0, 0) * m.get(i, j) - m.get(0, j) * m.get(i, 0);
                assert!(minor.is_zero());
            }
        }
    }
}
