use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::monomial::Monomial;
use super::rational::{int, to_f64, Rational};
use super::upoly::UPoly;
use super::PolyError;

/// Total degree of a polynomial. The zero polynomial has degree
/// [`Degree::NegInfinity`], which sorts below every finite degree.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum Degree {
    NegInfinity,
    Finite(u32),
}

impl Degree {
    pub fn finite(self) -> Option<u32> {
        match self {
            Degree::Finite(d) => Some(d),
            Degree::NegInfinity => None,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms are kept in a `BTreeMap` keyed by graded-lex monomial order; no
/// stored coefficient is ever zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::from_terms(nvars, [(Monomial::one(nvars), c)])
    }

    /// The variable `t_{i+1}`.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range for {nvars} variables");
        Self::from_terms(nvars, [(Monomial::var(nvars, i), Rational::one())])
    }

    /// Builds a polynomial from terms, summing duplicates and dropping zeros.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut map: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "monomial arity mismatch");
            let entry = map.entry(m).or_insert_with(Rational::zero);
            *entry += c;
        }
        map.retain(|_, c| !c.is_zero());
        MPoly { nvars, terms: map }
    }

    /// Linear polynomial `c0 + sum_i c[i] * t_{i+1}`.
    pub fn affine(c0: Rational, coeffs: &[Rational]) -> Self {
        let n = coeffs.len();
        let mut terms = vec![(Monomial::one(n), c0)];
        for (i, c) in coeffs.iter().enumerate() {
            terms.push((Monomial::var(n, i), c.clone()));
        }
        Self::from_terms(n, terms)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::one(self.nvars))
    }

    pub fn degree(&self) -> Degree {
        self.terms
            .keys()
            .map(Monomial::degree)
            .max()
            .map_or(Degree::NegInfinity, Degree::Finite)
    }

    /// Homogeneous component of degree `k`.
    pub fn homogeneous_part(&self, k: u32) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == k)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn scale(&self, c: &Rational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = MPoly::one(self.nvars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    fn check_arity(&self, got: usize) -> Result<(), PolyError> {
        if got != self.nvars {
            return Err(PolyError::DimensionMismatch {
                expected: self.nvars,
                got,
            });
        }
        Ok(())
    }

    /// Exact value `p(x)`.
    pub fn eval(&self, x: &[Rational]) -> Result<Rational, PolyError> {
        self.check_arity(x.len())?;
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (&e, xi) in m.exponents().iter().zip(x) {
                if e > 0 {
                    v *= num_traits::pow(xi.clone(), e as usize);
                }
            }
            total += v;
        }
        Ok(total)
    }

    /// Floating-point evaluation. Panics on arity mismatch.
    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.nvars, "arity mismatch in eval_f64");
        self.terms
            .iter()
            .map(|(m, c)| to_f64(c) * m.eval_f64(x))
            .sum()
    }

    /// Compiles the polynomial into a float-only form for hot loops.
    pub fn to_f64_poly(&self) -> F64Poly {
        F64Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.exponents().to_vec(), to_f64(c)))
                .collect(),
        }
    }

    /// Partial derivative with respect to the variable of index `i`.
    pub fn partial(&self, i: usize) -> MPoly {
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.exponents()[i];
            if e == 0 {
                return None;
            }
            let mut exps = m.exponents().to_vec();
            exps[i] -= 1;
            Some((Monomial::new(exps), c * int(e as i64)))
        });
        MPoly::from_terms(self.nvars, terms)
    }

    pub fn gradient(&self) -> Vec<MPoly> {
        (0..self.nvars).map(|i| self.partial(i)).collect()
    }

    /// The univariate polynomial `q(s) = p(x + s v)`.
    pub fn restrict_line(&self, x: &[Rational], v: &[Rational]) -> Result<UPoly, PolyError> {
        self.check_arity(x.len())?;
        self.check_arity(v.len())?;
        if v.iter().all(Zero::is_zero) {
            return Err(PolyError::ZeroDirection);
        }
        Ok(self.substitute_affine(x, v))
    }

    /// `p(x + s v)` without the nonzero-direction check; `v = 0` yields the
    /// constant `p(x)`.
    pub(crate) fn substitute_affine(&self, x: &[Rational], v: &[Rational]) -> UPoly {
        let lines: Vec<UPoly> = x
            .iter()
            .zip(v)
            .map(|(xi, vi)| UPoly::new(vec![xi.clone(), vi.clone()]))
            .collect();
        let mut total = UPoly::zero();
        for (m, c) in &self.terms {
            let mut term = UPoly::constant(c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                for _ in 0..e {
                    term = &term * &lines[i];
                }
            }
            total = &total + &term;
        }
        total
    }

    /// `P(t, u) = u^d p(t / u)` in `n + 1` variables, `u` last.
    pub fn homogenize(&self, d: u32) -> Result<MPoly, PolyError> {
        if let Degree::Finite(deg) = self.degree() {
            if deg > d {
                return Err(PolyError::DegreeBound { degree: deg, bound: d });
            }
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.extended(d - m.degree()), c.clone()));
        Ok(MPoly::from_terms(self.nvars + 1, terms))
    }

    /// Sets the last variable to 1, returning a polynomial in `n - 1` variables.
    pub fn dehomogenize(&self) -> MPoly {
        assert!(self.nvars > 0, "cannot dehomogenize a constant-arity polynomial");
        let terms = self.terms.iter().map(|(m, c)| (m.split_last().0, c.clone()));
        MPoly::from_terms(self.nvars - 1, terms)
    }

    /// Reinterprets the polynomial in more variables (new ones appended).
    pub fn with_nvars(&self, nvars: usize) -> MPoly {
        assert!(nvars >= self.nvars);
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = m.exponents().to_vec();
            e.resize(nvars, 0);
            (Monomial::new(e), c.clone())
        });
        MPoly::from_terms(nvars, terms)
    }

    /// Largest absolute coefficient (0 for the zero polynomial).
    pub fn max_abs_coeff(&self) -> Rational {
        self.terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Renders with custom variable names (length must equal `nvars`).
    pub fn display_with(&self, names: &[String]) -> String {
        struct D<'a>(&'a MPoly, &'a [String]);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.fmt_named(self.1, f)
            }
        }
        D(self, names).to_string()
    }

    /// Renders with `u` as the name of the last variable.
    pub fn display_homogeneous(&self) -> String {
        let mut names = default_names(self.nvars.saturating_sub(1));
        names.push("u".to_string());
        self.display_with(&names[..self.nvars])
    }

    fn fmt_named(&self, names: &[String], f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            if idx == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                m.fmt_with(names, f)?;
            }
        }
        Ok(())
    }
}

pub(crate) fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("t{i}")).collect()
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_named(&default_names(self.nvars), f)
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.nvars, rhs.nvars, "arity mismatch in add");
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            let e = terms.entry(m.clone()).or_insert_with(Rational::zero);
            *e += c;
        }
        terms.retain(|_, c| !c.is_zero());
        MPoly {
            nvars: self.nvars,
            terms,
        }
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        self + &(-rhs)
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.nvars, rhs.nvars, "arity mismatch in mul");
        let mut terms: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let e = terms.entry(ma.mul(mb)).or_insert_with(Rational::zero);
                *e += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        MPoly {
            nvars: self.nvars,
            terms,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for MPoly {
            type Output = MPoly;
            fn $m(self, rhs: MPoly) -> MPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

/// Float-only compiled polynomial.
#[derive(Clone, Debug)]
pub struct F64Poly {
    nvars: usize,
    terms: Vec<(Vec<u32>, f64)>,
}

impl F64Poly {
    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.nvars);
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(x)
                    .fold(*c, |acc, (&k, &xi)| acc * xi.powi(k as i32))
            })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational::rat;

    fn example_p() -> MPoly {
        MPoly::parse("t1^3 - t1^2 - t1 - t2^2 + 1", 2).unwrap()
    }

    #[test]
    fn eval_examples() {
        let p = example_p();
        assert_eq!(p.eval(&[int(0), int(0)]).unwrap(), int(1));
        assert_eq!(p.eval(&[int(1), int(0)]).unwrap(), int(0));
        assert_eq!(MPoly::one(3).eval(&[int(5), rat(1, 3), int(-2)]).unwrap(), int(1));
        assert!(matches!(
            p.eval(&[int(0)]),
            Err(PolyError::DimensionMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn restrict_line_examples() {
        let p = example_p();
        let zero = [int(0), int(0)];
        // s^3 - s^2 - s + 1
        let q = p.restrict_line(&zero, &[int(1), int(0)]).unwrap();
        assert_eq!(q, UPoly::from_ints(&[1, -1, -1, 1]));
        let q = p.restrict_line(&zero, &[int(0), int(1)]).unwrap();
        assert_eq!(q, UPoly::from_ints(&[1, 0, -1]));
        let t2 = MPoly::var(2, 1);
        assert_eq!(t2.restrict_line(&zero, &[int(0), int(1)]).unwrap(), UPoly::from_ints(&[0, 1]));
        assert!(matches!(p.restrict_line(&zero, &zero), Err(PolyError::ZeroDirection)));
    }

    #[test]
    fn homogenize_examples() {
        let p = example_p();
        let expected = MPoly::parse_homogeneous("t1^3 - t1^2*u - t1*u^2 - t2^2*u + u^3", 2).unwrap();
        assert_eq!(p.homogenize(3).unwrap(), expected);
        let h = MPoly::parse("t1^2 - 3*t1*t2", 2).unwrap();
        assert_eq!(h.homogenize(2).unwrap(), h.with_nvars(3));
        let u2 = MPoly::one(1).homogenize(2).unwrap();
        assert_eq!(u2, MPoly::parse_homogeneous("u^2", 1).unwrap());
        assert!(matches!(p.homogenize(2), Err(PolyError::DegreeBound { .. })));
        assert_eq!(p.homogenize(5).unwrap().dehomogenize(), p);
    }

    #[test]
    fn degree_sentinel() {
        assert_eq!(MPoly::zero(2).degree(), Degree::NegInfinity);
        assert!(Degree::NegInfinity < Degree::Finite(0));
        assert_eq!(example_p().degree(), Degree::Finite(3));
    }

    #[test]
    fn display_grlex() {
        assert_eq!(example_p().to_string(), "t1^3 - t1^2 - t2^2 - t1 + 1");
        let q = MPoly::parse("1/2*t1 - 3/4", 1).unwrap();
        assert_eq!(q.to_string(), "1/2*t1 - 3/4");
        assert_eq!(MPoly::zero(2).to_string(), "0");
    }

    #[test]
    fn gradient_matches_hand_derivative() {
        let g = example_p().gradient();
        assert_eq!(g[0], MPoly::parse("3*t1^2 - 2*t1 - 1", 2).unwrap());
        assert_eq!(g[1], MPoly::parse("-2*t2", 2).unwrap());
    }
}

impl Serialize for MPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("MPoly", 2)?;
        st.serialize_field("nvars", &self.nvars)?;
        st.serialize_field("poly", &self.to_string())?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for MPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            nvars: usize,
            poly: String,
        }
        let raw = Raw::deserialize(d)?;
        MPoly::parse(&raw.poly, raw.nvars).map_err(serde::de::Error::custom)
    }
}
