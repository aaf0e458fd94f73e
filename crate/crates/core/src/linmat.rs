//! Linear matrix polynomials `A(t) = A0 + t1 A1 + ... + tn An` over the
//! rationals: exact PSD tests, characteristic polynomials and kernel faces.

use std::collections::HashMap;
use std::fmt;

use nalgebra::DMatrix;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::poly::rational::{int, parse_rational, rat, serde_rat, to_f64, Rational};
use crate::poly::{MPoly, PolyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinMatError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix {index} is not symmetric")]
    NotSymmetric { index: usize },
    #[error("bad pencil: {0}")]
    Shape(String),
    #[error("point is not in the spectrahedron")]
    NotInSpectrahedron,
    #[error("kernel is trivial: the face is the whole set and has no exposing functional")]
    TrivialFace,
    #[error("exposing functional vanishes identically (degenerate pencil)")]
    DegenerateFunctional,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Dense square rational matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    k: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn zero(k: usize) -> Self {
        QMatrix {
            k,
            data: vec![Rational::zero(); k * k],
        }
    }

    pub fn identity(k: usize) -> Self {
        let mut m = Self::zero(k);
        for i in 0..k {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, LinMatError> {
        let k = rows.len();
        let mut data = Vec::with_capacity(k * k);
        for r in rows {
            if r.len() != k {
                return Err(LinMatError::Shape(format!("row of length {} in a {k}x{k} matrix", r.len())));
            }
            data.extend(r);
        }
        Ok(QMatrix { k, data })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect())
            .expect("square integer matrix")
    }

    pub fn diagonal(d: &[Rational]) -> Self {
        let mut m = Self::zero(d.len());
        for (i, v) in d.iter().enumerate() {
            m.set(i, i, v.clone());
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.k + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.k + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        self.data.chunks(self.k.max(1)).map(<[Rational]>::to_vec).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.k).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &QMatrix) -> QMatrix {
        QMatrix {
            k: self.k,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> QMatrix {
        QMatrix {
            k: self.k,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        let k = self.k;
        let mut out = QMatrix::zero(k);
        for i in 0..k {
            for l in 0..k {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..k {
                    let b = other.get(l, j);
                    if !b.is_zero() {
                        out.data[i * k + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        (0..self.k)
            .map(|i| (0..self.k).fold(Rational::zero(), |acc, j| acc + self.get(i, j) * &v[j]))
            .collect()
    }

    pub fn trace(&self) -> Rational {
        (0..self.k).fold(Rational::zero(), |acc, i| acc + self.get(i, i))
    }

    /// `tr(self * other)` without forming the product.
    pub fn trace_product(&self, other: &QMatrix) -> Rational {
        let mut acc = Rational::zero();
        for i in 0..self.k {
            for j in 0..self.k {
                acc += self.get(i, j) * other.get(j, i);
            }
        }
        acc
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.k, self.k, |i, j| to_f64(self.get(i, j)))
    }

    /// Coefficients `[c_0, ..., c_{k-1}]` of `det(M - sI) = sum c_i s^i + (-1)^k s^k`.
    pub fn char_poly(&self) -> Vec<Rational> {
        faddeev_leverrier(self.k, |i, j| self.get(i, j).clone(), &Rational::zero(), |c| c.clone())
    }

    pub fn det(&self) -> Rational {
        if self.k == 0 {
            return Rational::one();
        }
        self.char_poly().swap_remove(0)
    }

    /// Exact basis of the right kernel, each vector scaled to integer
    /// entries with positive leading entry.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        nullspace(&self.rows(), self.k)
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = self
            .rows()
            .iter()
            .map(|r| r.iter().map(ToString::to_string).collect())
            .collect();
        write!(f, "{rows:?}")
    }
}

impl Serialize for QMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self
            .rows()
            .iter()
            .map(|r| r.iter().map(ToString::to_string).collect())
            .collect();
        rows.serialize(s)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Entry {
    Int(i64),
    Str(String),
}

impl Entry {
    fn to_rational(&self) -> Result<Rational, String> {
        match self {
            Entry::Int(v) => Ok(int(*v)),
            Entry::Str(s) => parse_rational(s).ok_or_else(|| format!("bad rational entry {s:?}")),
        }
    }
}

fn matrix_from_entries(rows: &[Vec<Entry>]) -> Result<QMatrix, String> {
    let rows: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| r.iter().map(Entry::to_rational).collect::<Result<_, _>>())
        .collect::<Result<_, _>>()?;
    QMatrix::from_rows(rows).map_err(|e| e.to_string())
}

impl<'de> Deserialize<'de> for QMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<Entry>>::deserialize(d)?;
        matrix_from_entries(&rows).map_err(serde::de::Error::custom)
    }
}

/// `A(t) = A0 + t1 A1 + ... + tn An` with symmetric rational `Ai`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinMatPoly {
    k: usize,
    n: usize,
    mats: Vec<QMatrix>,
}

impl LinMatPoly {
    pub fn new(mats: Vec<QMatrix>) -> Result<Self, LinMatError> {
        let Some(first) = mats.first() else {
            return Err(LinMatError::Shape("at least A0 is required".into()));
        };
        let k = first.dim();
        if k == 0 {
            return Err(LinMatError::Shape("matrix dimension must be at least 1".into()));
        }
        for (index, m) in mats.iter().enumerate() {
            if m.dim() != k {
                return Err(LinMatError::DimensionMismatch {
                    expected: k,
                    got: m.dim(),
                });
            }
            if !m.is_symmetric() {
                return Err(LinMatError::NotSymmetric { index });
            }
        }
        Ok(LinMatPoly {
            k,
            n: mats.len() - 1,
            mats,
        })
    }

    pub fn from_json(src: &str) -> Result<Self, LinMatError> {
        let raw: RawPencil = serde_json::from_str(src).map_err(|e| LinMatError::Shape(e.to_string()))?;
        raw.try_into()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("pencil serializes")
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrices(&self) -> &[QMatrix] {
        &self.mats
    }

    fn check_point(&self, x: &[Rational]) -> Result<(), LinMatError> {
        if x.len() != self.n {
            return Err(LinMatError::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Entry `(i, j)` of `A(t)` as an affine polynomial.
    pub fn entry_poly(&self, i: usize, j: usize) -> MPoly {
        let coeffs: Vec<Rational> = self.mats[1..].iter().map(|m| m.get(i, j).clone()).collect();
        MPoly::affine(self.mats[0].get(i, j).clone(), &coeffs)
    }
}

#[derive(Serialize, Deserialize)]
struct RawPencil<E = Entry> {
    k: usize,
    n: usize,
    #[serde(rename = "A")]
    a: Vec<Vec<Vec<E>>>,
}

impl TryFrom<RawPencil> for LinMatPoly {
    type Error = LinMatError;

    fn try_from(raw: RawPencil) -> Result<Self, LinMatError> {
        if raw.a.len() != raw.n + 1 {
            return Err(LinMatError::Shape(format!(
                "expected {} matrices for n = {}, got {}",
                raw.n + 1,
                raw.n,
                raw.a.len()
            )));
        }
        let mats = raw
            .a
            .iter()
            .map(|m| matrix_from_entries(m).map_err(LinMatError::Shape))
            .collect::<Result<Vec<_>, _>>()?;
        let pencil = LinMatPoly::new(mats)?;
        if pencil.k != raw.k {
            return Err(LinMatError::DimensionMismatch {
                expected: raw.k,
                got: pencil.k,
            });
        }
        Ok(pencil)
    }
}

impl Serialize for LinMatPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let a = self
            .mats
            .iter()
            .map(|m| {
                m.rows()
                    .iter()
                    .map(|r| r.iter().map(ToString::to_string).collect())
                    .collect()
            })
            .collect();
        RawPencil::<String> { k: self.k, n: self.n, a }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LinMatPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawPencil::<Entry>::deserialize(d)?;
        raw.try_into().map_err(serde::de::Error::custom)
    }
}

/// Coefficients of `det(A(t) - sI) = c_0 + ... + c_{k-1} s^{k-1} + (-1)^k s^k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CharPolyCoeffs {
    pub c: Vec<MPoly>,
}

impl CharPolyCoeffs {
    pub fn k(&self) -> usize {
        self.c.len()
    }

    pub fn eval(&self, x: &[Rational]) -> Result<Vec<Rational>, PolyError> {
        self.c.iter().map(|c| c.eval(x)).collect()
    }

    /// `det(A(t) - sI)` as a polynomial in `n + 1` variables, `s` last.
    pub fn full_polynomial(&self) -> MPoly {
        let k = self.k();
        let n = self.c.first().map_or(0, MPoly::nvars);
        let s = MPoly::var(n + 1, n);
        let mut acc = MPoly::zero(n + 1);
        for (i, c) in self.c.iter().enumerate() {
            acc = &acc + &(&c.with_nvars(n + 1) * &s.pow(i as u32));
        }
        let lead = if k % 2 == 0 { int(1) } else { int(-1) };
        &acc + &s.pow(k as u32).scale(&lead)
    }
}

/// Minimal ring interface shared by rationals and polynomials.
trait Ring: Clone {
    fn is_nil(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
}

impl Ring for Rational {
    fn is_nil(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
}

impl Ring for MPoly {
    fn is_nil(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
}

/// Faddeev–LeVerrier; returns `[c_0, ..., c_{k-1}]` for `det(M - sI)`.
fn faddeev_leverrier<T: Ring>(k: usize, entry: impl Fn(usize, usize) -> T, zero: &T, from_q: impl Fn(&Rational) -> T) -> Vec<T> {
    let a: Vec<Vec<T>> = (0..k).map(|i| (0..k).map(|j| entry(i, j)).collect()).collect();
    let matmul = |x: &[Vec<T>], y: &[Vec<T>]| -> Vec<Vec<T>> {
        (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        let mut acc = zero.clone();
                        for l in 0..k {
                            if !x[i][l].is_nil() && !y[l][j].is_nil() {
                                acc = acc.plus(&x[i][l].times(&y[l][j]));
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect()
    };
    // det(sI - A) = sum_j b_j s^j with b_k = 1;
    // M_j = A M_{j-1} + b_{k-j+1} I, b_{k-j} = -tr(A M_j) / j.
    let mut b = vec![zero.clone(); k + 1];
    b[k] = from_q(&Rational::one());
    let mut m: Vec<Vec<T>> = vec![vec![zero.clone(); k]; k];
    for j in 1..=k {
        let mut next = matmul(&a, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] = row[i].plus(&b[k - j + 1]);
        }
        let am = matmul(&a, &next);
        let tr = am.iter().enumerate().fold(zero.clone(), |acc, (i, row)| acc.plus(&row[i]));
        b[k - j] = tr.times(&from_q(&rat(-1, j as i64)));
        m = next;
    }
    // det(A - sI) = (-1)^k det(sI - A)
    let sign = from_q(&int(if k % 2 == 0 { 1 } else { -1 }));
    b.truncate(k);
    b.iter().map(|c| c.times(&sign)).collect()
}

/// Laplace expansion of `det(A(t) - sI)` along rows, memoised on column
/// subsets; polynomials in `n + 1` variables with `s` last.
fn cofactor_char_poly(a: &LinMatPoly) -> Vec<MPoly> {
    let k = a.k;
    let n = a.n;
    let s = MPoly::var(n + 1, n);
    let entries: Vec<Vec<MPoly>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    let e = a.entry_poly(i, j).with_nvars(n + 1);
                    if i == j {
                        &e - &s
                    } else {
                        e
                    }
                })
                .collect()
        })
        .collect();
    fn minor(row: usize, cols: u64, k: usize, e: &[Vec<MPoly>], memo: &mut HashMap<u64, MPoly>, nv: usize) -> MPoly {
        if row == k {
            return MPoly::one(nv);
        }
        if let Some(v) = memo.get(&cols) {
            return v.clone();
        }
        let mut acc = MPoly::zero(nv);
        let mut sign_pos = true;
        for c in 0..k {
            if cols & (1 << c) != 0 {
                continue;
            }
            if !e[row][c].is_zero() {
                let sub = minor(row + 1, cols | (1 << c), k, e, memo, nv);
                let term = &e[row][c] * &sub;
                acc = if sign_pos { &acc + &term } else { &acc - &term };
            }
            sign_pos = !sign_pos;
        }
        memo.insert(cols, acc.clone());
        acc
    }
    let mut memo = HashMap::new();
    let full = minor(0, 0, k, &entries, &mut memo, n + 1);
    let mut out = vec![MPoly::zero(n); k];
    for (mono, coeff) in full.terms() {
        let (rest, se) = mono.split_last();
        if (se as usize) < k {
            out[se as usize] = &out[se as usize] + &MPoly::from_terms(n, [(rest, coeff.clone())]);
        }
    }
    out
}

pub fn eval_pencil(a: &LinMatPoly, x: &[Rational]) -> Result<QMatrix, LinMatError> {
    a.check_point(x)?;
    let mut m = a.mats[0].clone();
    for (xi, ai) in x.iter().zip(&a.mats[1..]) {
        if !xi.is_zero() {
            m = m.add(&ai.scale(xi));
        }
    }
    Ok(m)
}

/// Symbolic characteristic coefficients: Faddeev–LeVerrier for `k <= 6`,
/// memoised cofactor expansion above.
pub fn char_poly_coeffs(a: &LinMatPoly) -> CharPolyCoeffs {
    let c = if a.k <= 6 {
        faddeev_leverrier(a.k, |i, j| a.entry_poly(i, j), &MPoly::zero(a.n), |q| MPoly::constant(a.n, q.clone()))
    } else {
        cofactor_char_poly(a)
    };
    CharPolyCoeffs { c }
}

/// Cofactor-expansion variant, exposed for cross-checking.
pub fn char_poly_coeffs_cofactor(a: &LinMatPoly) -> CharPolyCoeffs {
    CharPolyCoeffs { c: cofactor_char_poly(a) }
}

/// PSD iff `(-1)^i c_i >= 0` for all `i`.
pub fn psd_from_char_coeffs(c: &[Rational]) -> bool {
    c.iter().enumerate().all(|(i, ci)| {
        if i % 2 == 0 {
            !ci.is_negative()
        } else {
            !ci.is_positive()
        }
    })
}

pub fn is_psd_exact(m: &QMatrix) -> Result<bool, LinMatError> {
    if !m.is_symmetric() {
        return Err(LinMatError::NotSymmetric { index: 0 });
    }
    Ok(psd_from_char_coeffs(&m.char_poly()))
}

pub fn spectrahedron_member(a: &LinMatPoly, x: &[Rational]) -> Result<bool, LinMatError> {
    is_psd_exact(&eval_pencil(a, x)?)
}

pub fn det_poly(a: &LinMatPoly) -> MPoly {
    char_poly_coeffs(a).c.swap_remove(0)
}

/// Exact nullspace of a `rows x ncols` rational matrix via RREF.
pub fn nullspace(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let (r, pivots) = rref(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r[row][f].clone();
            }
            integer_scaled(v)
        })
        .collect()
}

/// Reduced row echelon form; returns the nonzero rows and pivot columns.
pub fn rref(rows: &[Vec<Rational>], ncols: usize) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Rational::one() / &m[r][c];
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..ncols {
                    let d = &f * &m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

/// Clears denominators and common factors; first nonzero entry positive.
fn integer_scaled(v: Vec<Rational>) -> Vec<Rational> {
    use num_integer::Integer;
    let lcm = v
        .iter()
        .fold(num_bigint::BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<num_bigint::BigInt> = v.iter().map(|x| (x * Rational::from(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(num_bigint::BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v;
    }
    let flip = ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    ints.into_iter()
        .map(|x| {
            let q = Rational::from(x / &g);
            if flip {
                -q
            } else {
                q
            }
        })
        .collect()
}

/// Solution set `{point + span(directions)}` of a linear system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AffineHull {
    #[serde(with = "serde_rat::vec")]
    pub point: Vec<Rational>,
    #[serde(serialize_with = "ser_vecs")]
    pub directions: Vec<Vec<Rational>>,
}

impl AffineHull {
    pub fn dim(&self) -> usize {
        self.directions.len()
    }
}

fn ser_vecs<S: Serializer>(v: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
    let strs: Vec<Vec<String>> = v.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
    strs.serialize(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FaceStatus {
    /// Trivial kernel: `x` is in the relative interior of `S`.
    Whole,
    /// Nontrivial kernel cutting out a proper face.
    Proper,
    /// Nontrivial kernel shared by every `A(y)`: the face is all of `S`.
    Degenerate,
}

/// The face `F_U = {y in S : U ⊆ ker A(y)}` of a spectrahedron.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FaceDescriptor {
    #[serde(with = "serde_rat::vec")]
    pub x: Vec<Rational>,
    #[serde(serialize_with = "ser_vecs")]
    pub kernel: Vec<Vec<Rational>>,
    pub hull: AffineHull,
    /// `sum u u^T` over the (unnormalised) kernel basis.
    pub z: QMatrix,
    pub status: FaceStatus,
}

impl FaceDescriptor {
    /// Exact test `A(y) u = 0` for every `u` in the kernel basis.
    pub fn kernel_contained(&self, a: &LinMatPoly, y: &[Rational]) -> Result<bool, LinMatError> {
        let m = eval_pencil(a, y)?;
        Ok(self.kernel.iter().all(|u| m.mul_vec(u).iter().all(Zero::is_zero)))
    }
}

pub fn face_of_point(a: &LinMatPoly, x: &[Rational]) -> Result<FaceDescriptor, LinMatError> {
    let m = eval_pencil(a, x)?;
    if !is_psd_exact(&m)? {
        return Err(LinMatError::NotInSpectrahedron);
    }
    let kernel = m.kernel();
    let k = a.k;
    let mut z = QMatrix::zero(k);
    for u in &kernel {
        for i in 0..k {
            for j in 0..k {
                let v = z.get(i, j) + &u[i] * &u[j];
                z.set(i, j, v);
            }
        }
    }
    // Homogeneous system in y: sum_i y_i (A_i u) = 0 for all u, after
    // shifting by x (which solves the inhomogeneous one).
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for u in &kernel {
        let cols: Vec<Vec<Rational>> = a.mats[1..].iter().map(|ai| ai.mul_vec(u)).collect();
        for r in 0..k {
            rows.push(cols.iter().map(|c| c[r].clone()).collect());
        }
    }
    let directions = if a.n == 0 {
        Vec::new()
    } else if rows.is_empty() {
        (0..a.n)
            .map(|i| (0..a.n).map(|j| if i == j { int(1) } else { int(0) }).collect())
            .collect()
    } else {
        nullspace(&rows, a.n)
    };
    let status = if kernel.is_empty() {
        FaceStatus::Whole
    } else if directions.len() == a.n && common_kernel(a, &kernel) {
        FaceStatus::Degenerate
    } else {
        FaceStatus::Proper
    };
    Ok(FaceDescriptor {
        x: x.to_vec(),
        kernel,
        hull: AffineHull {
            point: x.to_vec(),
            directions,
        },
        z,
        status,
    })
}

fn common_kernel(a: &LinMatPoly, kernel: &[Vec<Rational>]) -> bool {
    kernel
        .iter()
        .all(|u| a.mats.iter().all(|m| m.mul_vec(u).iter().all(Zero::is_zero)))
}

/// `l(y) = tr(Z A(y))`: nonnegative on `S`, zero exactly on the face.
pub fn exposing_functional(face: &FaceDescriptor, a: &LinMatPoly) -> Result<MPoly, LinMatError> {
    if face.kernel.is_empty() {
        return Err(LinMatError::TrivialFace);
    }
    if face.z.dim() != a.k {
        return Err(LinMatError::DimensionMismatch {
            expected: a.k,
            got: face.z.dim(),
        });
    }
    let c0 = face.z.trace_product(&a.mats[0]);
    let coeffs: Vec<Rational> = a.mats[1..].iter().map(|m| face.z.trace_product(m)).collect();
    let l = MPoly::affine(c0, &coeffs);
    if l.is_zero() {
        return Err(LinMatError::DegenerateFunctional);
    }
    Ok(l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::example1;

    fn pt(a: i64, b: i64) -> Vec<Rational> {
        vec![int(a), int(b)]
    }

    #[test]
    fn eval_examples() {
        let a = example1::pencil();
        assert_eq!(eval_pencil(&a, &pt(0, 0)).unwrap(), QMatrix::from_ints(&[&[2, 0, 1], &[0, 1, 0], &[1, 0, 1]]));
        assert_eq!(eval_pencil(&a, &pt(1, 0)).unwrap(), QMatrix::from_ints(&[&[0, 0, 0], &[0, 0, 0], &[0, 0, 1]]));
        assert!(eval_pencil(&a, &[int(1)]).is_err());
    }

    #[test]
    fn char_poly_example() {
        let c = char_poly_coeffs(&example1::pencil());
        assert_eq!(c.c[0], example1::p());
        assert_eq!(c.c[1], MPoly::parse("-t1^2 + 5*t1 + t2^2 - 4", 2).unwrap());
        assert_eq!(c.c[2], MPoly::parse("4 - 3*t1", 2).unwrap());
        assert_eq!(char_poly_coeffs_cofactor(&example1::pencil()), c);

        let id = LinMatPoly::new(vec![QMatrix::identity(2), QMatrix::zero(2)]).unwrap();
        let c = char_poly_coeffs(&id);
        assert_eq!(c.c, vec![MPoly::constant(1, int(1)), MPoly::constant(1, int(-2))]);
    }

    #[test]
    fn psd_examples() {
        assert!(is_psd_exact(&example1::pencil().matrices()[0]).unwrap());
        assert!(!is_psd_exact(&QMatrix::diagonal(&[int(1), int(-1)])).unwrap());
        assert!(is_psd_exact(&QMatrix::zero(3)).unwrap());
        assert!(is_psd_exact(&QMatrix::from_ints(&[&[1, 2], &[3, 4]])).is_err());
        let a = example1::pencil();
        assert!(spectrahedron_member(&a, &pt(0, 0)).unwrap());
        assert!(!spectrahedron_member(&a, &pt(2, 0)).unwrap());
        assert!(spectrahedron_member(&a, &pt(1, 0)).unwrap());
    }

    #[test]
    fn det_examples() {
        assert_eq!(det_poly(&example1::pencil()), example1::p());
        let id = LinMatPoly::new(vec![QMatrix::identity(2), QMatrix::zero(2)]).unwrap();
        assert_eq!(det_poly(&id), MPoly::one(1));
        let diag = LinMatPoly::new(vec![QMatrix::identity(2), QMatrix::diagonal(&[int(1), int(-1)])]).unwrap();
        assert_eq!(det_poly(&diag), MPoly::parse("1 - t1^2", 1).unwrap());
    }

    #[test]
    fn faces() {
        let a = example1::pencil();
        let f = face_of_point(&a, &pt(1, 0)).unwrap();
        assert_eq!(f.kernel.len(), 2);
        assert_eq!(f.hull.dim(), 0);
        assert_eq!(f.status, FaceStatus::Proper);
        let l = exposing_functional(&f, &a).unwrap();
        assert!(l.eval(&pt(1, 0)).unwrap().is_zero());
        assert!(l.eval(&pt(0, 0)).unwrap().is_positive());

        let f = face_of_point(&a, &pt(0, 0)).unwrap();
        assert!(f.kernel.is_empty());
        assert_eq!(f.hull.dim(), 2);
        assert_eq!(f.status, FaceStatus::Whole);
        assert!(matches!(exposing_functional(&f, &a), Err(LinMatError::TrivialFace)));

        let f = face_of_point(&a, &pt(0, 1)).unwrap();
        assert_eq!(f.kernel.len(), 1);
        assert_eq!(f.hull.dim(), 0);

        assert!(matches!(face_of_point(&a, &pt(2, 0)), Err(LinMatError::NotInSpectrahedron)));
    }

    #[test]
    fn diagonal_face_functional() {
        // diag(t1, 1 - t1)
        let a = LinMatPoly::new(vec![
            QMatrix::diagonal(&[int(0), int(1)]),
            QMatrix::diagonal(&[int(1), int(-1)]),
        ])
        .unwrap();
        let f = face_of_point(&a, &[int(0)]).unwrap();
        assert_eq!(exposing_functional(&f, &a).unwrap(), MPoly::parse("t1", 1).unwrap());
        let f = face_of_point(&a, &[rat(1, 3)]).unwrap();
        assert_eq!(f.status, FaceStatus::Whole);
    }

    #[test]
    fn degenerate_pencil() {
        // A(t) = diag(1 + t1, 0): common kernel e2.
        let a = LinMatPoly::new(vec![
            QMatrix::diagonal(&[int(1), int(0)]),
            QMatrix::diagonal(&[int(1), int(0)]),
        ])
        .unwrap();
        let f = face_of_point(&a, &[int(0)]).unwrap();
        assert_eq!(f.status, FaceStatus::Degenerate);
        assert!(matches!(exposing_functional(&f, &a), Err(LinMatError::DegenerateFunctional)));
    }

    #[test]
    fn json_round_trip() {
        let src = r#"{"k": 2, "n": 1, "A": [[[1, "1/2"], ["1/2", 1]], [[1, 0], [0, -1]]]}"#;
        let a = LinMatPoly::from_json(src).unwrap();
        assert_eq!(a.matrices()[0].get(0, 1), &rat(1, 2));
        let back = LinMatPoly::from_json(&a.to_json()).unwrap();
        assert_eq!(a, back);
        let bad = r#"{"k": 2, "n": 0, "A": [[[1, 2], [3, 1]]]}"#;
        assert!(matches!(LinMatPoly::from_json(bad), Err(LinMatError::NotSymmetric { index: 0 })));
        let short = r#"{"k": 2, "n": 1, "A": [[[1, 0], [0, 1]]]}"#;
        assert!(LinMatPoly::from_json(short).is_err());
    }

    #[test]
    fn cofactor_agrees_for_large_k() {
        let k = 7;
        let mut a0 = QMatrix::identity(k);
        a0.set(0, 6, int(1));
        a0.set(6, 0, int(1));
        let mut a1 = QMatrix::zero(k);
        for i in 0..k - 1 {
            a1.set(i, i + 1, int(1));
            a1.set(i + 1, i, int(1));
        }
        let a = LinMatPoly::new(vec![a0, a1]).unwrap();
        let fl = CharPolyCoeffs {
            c: faddeev_leverrier(k, |i, j| a.entry_poly(i, j), &MPoly::zero(1), |q| MPoly::constant(1, q.clone())),
        };
        assert_eq!(char_poly_coeffs(&a), fl);
    }
}
