//! Real-zero polynomials, Renegar derivatives and hyperbolicity cones.
//!
//! A polynomial `p` is real-zero with respect to `e` when `p(e) > 0` and
//! every restriction `s -> p(e + s v)` has only real roots. The checks here
//! are exact but sample-based over directions: they certify the property on
//! the supplied directions only.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::poly::rational::{factorial_ratio, int, serde_rat, Rational};
use crate::poly::{all_roots_nonnegative, all_roots_real, root_multiplicity, MPoly, PolyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RigidError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("no directions supplied")]
    NoDirections,
    #[error("derivative order {k} out of range for degree {degree}")]
    OrderOutOfRange { k: u32, degree: u32 },
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("point has multiplicity 0 (not on the boundary); no tangent certificate")]
    Interior,
    #[error("singular point: gradient of p^({order}) vanishes; no tangent certificate")]
    Singular { order: u32 },
    #[error("P(e) must be positive")]
    NonPositiveAtE,
    #[error("not real-zero at the origin: restriction along {witness:?} has nonreal roots")]
    NotRealZero { witness: Vec<String> },
}

/// Outcome of a sampled real-zero check.
#[derive(Debug, Clone, Serialize)]
pub struct RzReport {
    pub p: MPoly,
    #[serde(with = "serde_rat::vec")]
    pub e: Vec<Rational>,
    pub p_at_e_positive: bool,
    pub directions: Vec<Vec<String>>,
    pub verdicts: Vec<bool>,
    pub overall: bool,
    /// First direction whose restriction has a nonreal root.
    pub witness: Option<Vec<String>>,
}

/// Deterministic primitive integer directions.
///
/// For every coordinate pair `(i, j)` this lists up to `per_pair` primitive
/// vectors `(a, b)` (one per line through the origin) with small
/// coordinates, ordered by `max(|a|, |b|)` and then by angle. Duplicates
/// across pairs (the axis directions) are emitted once.
pub fn default_directions(n: usize, per_pair: usize) -> Vec<Vec<Rational>> {
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![vec![Rational::one()]];
    }
    let mut planar: Vec<(i64, i64)> = Vec::new();
    let mut h = 1i64;
    while planar.len() < per_pair {
        let mut ring: Vec<(i64, i64)> = Vec::new();
        for a in -h..=h {
            for b in -h..=h {
                if a.abs().max(b.abs()) != h || a.gcd(&b) != 1 {
                    continue;
                }
                // One representative per line: a > 0, or a == 0 and b > 0.
                if a > 0 || (a == 0 && b > 0) {
                    ring.push((a, b));
                }
            }
        }
        ring.sort_by(|x, y| {
            let ax = (x.1 as f64).atan2(x.0 as f64);
            let ay = (y.1 as f64).atan2(y.0 as f64);
            ax.total_cmp(&ay)
        });
        planar.extend(ring);
        h += 1;
    }
    planar.truncate(per_pair);

    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            for &(a, b) in &planar {
                let mut v = vec![0i64; n];
                v[i] = a;
                v[j] = b;
                if seen.insert(v.clone()) {
                    out.push(v.into_iter().map(int).collect());
                }
            }
        }
    }
    out
}

fn fmt_vec(v: &[Rational]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

/// Checks `p(e) > 0` and real-rootedness of `p(e + s v)` for each supplied `v`.
pub fn check_rz(p: &MPoly, e: &[Rational], directions: &[Vec<Rational>]) -> Result<RzReport, RigidError> {
    if directions.is_empty() {
        return Err(RigidError::NoDirections);
    }
    let pe = p.eval(e)?;
    let mut verdicts = Vec::with_capacity(directions.len());
    let mut witness = None;
    for v in directions {
        let q = p.restrict_line(e, v)?;
        let ok = if q.is_zero() { true } else { all_roots_real(&q)? };
        if !ok && witness.is_none() {
            witness = Some(fmt_vec(v));
        }
        verdicts.push(ok);
    }
    let positive = pe.is_positive();
    Ok(RzReport {
        p: p.clone(),
        e: e.to_vec(),
        p_at_e_positive: positive,
        directions: directions.iter().map(|v| fmt_vec(v)).collect(),
        overall: positive && verdicts.iter().all(|&b| b),
        verdicts,
        witness,
    })
}

fn degree_of(p: &MPoly) -> Result<u32, RigidError> {
    p.degree().finite().ok_or(RigidError::Poly(PolyError::ZeroPolynomial))
}

/// `p^(k) = sum_{i=k}^{d} i!/(i-k)! * p_{d-i}`, with `p_j` the homogeneous
/// part of degree `j` and `d = deg p`.
pub fn renegar_derivative(p: &MPoly, k: u32) -> Result<MPoly, RigidError> {
    let d = degree_of(p)?;
    if k > d {
        return Err(RigidError::OrderOutOfRange { k, degree: d });
    }
    let mut acc = MPoly::zero(p.nvars());
    for i in k..=d {
        let part = p.homogeneous_part(d - i);
        if !part.is_zero() {
            acc = &acc + &part.scale(&factorial_ratio(i, k));
        }
    }
    Ok(acc)
}

/// Directional derivative `sum_i e_i * dP/dx_i`.
fn directional(p: &MPoly, e: &[Rational]) -> MPoly {
    let mut acc = MPoly::zero(p.nvars());
    for (i, ei) in e.iter().enumerate() {
        if !ei.is_zero() {
            acc = &acc + &p.partial(i).scale(ei);
        }
    }
    acc
}

/// `P^(k)(x) = d^k/ds^k P(x + s e) |_{s=0}` for homogeneous `P`.
pub fn homogeneous_renegar(big_p: &MPoly, e: &[Rational], k: u32) -> Result<MPoly, RigidError> {
    if e.len() != big_p.nvars() {
        return Err(PolyError::DimensionMismatch {
            expected: big_p.nvars(),
            got: e.len(),
        }
        .into());
    }
    if !big_p.is_homogeneous() {
        return Err(RigidError::NotHomogeneous);
    }
    let d = degree_of(big_p)?;
    if k > d {
        return Err(RigidError::OrderOutOfRange { k, degree: d });
    }
    let mut acc = big_p.clone();
    for _ in 0..k {
        acc = directional(&acc, e);
    }
    Ok(acc)
}

/// Multiplicity of `1` as a root of `s -> p(s x)`.
pub fn mult(p: &MPoly, x: &[Rational]) -> Result<u32, RigidError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial.into());
    }
    if x.len() != p.nvars() {
        return Err(PolyError::DimensionMismatch {
            expected: p.nvars(),
            got: x.len(),
        }
        .into());
    }
    let origin = vec![Rational::zero(); x.len()];
    let q = p.substitute_affine(&origin, x);
    Ok(root_multiplicity(&q, &Rational::one())?)
}

/// Multiplicity of `0` as a root of `s -> P((x, 1) + s (0, ..., 0, 1))`,
/// with `P` the degree-`deg p` homogenization. Agrees with [`mult`].
pub fn mult_via_homogenization(p: &MPoly, x: &[Rational]) -> Result<u32, RigidError> {
    let d = degree_of(p)?;
    let big_p = p.homogenize(d)?;
    let mut base = x.to_vec();
    base.push(Rational::one());
    let mut dir = vec![Rational::zero(); x.len()];
    dir.push(Rational::one());
    let q = big_p.restrict_line(&base, &dir)?;
    Ok(root_multiplicity(&q, &Rational::zero())?)
}

/// Affine hyperplane `{x + v : normal . v = 0}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TangentSpace {
    #[serde(with = "serde_rat::vec")]
    pub point: Vec<Rational>,
    #[serde(with = "serde_rat::vec")]
    pub normal: Vec<Rational>,
    pub multiplicity: u32,
    /// The Renegar derivative `p^(m-1)` whose zero set the hyperplane is tangent to.
    pub curve: MPoly,
}

impl TangentSpace {
    /// The linear polynomial `normal . (t - point)`.
    pub fn linear_form(&self) -> MPoly {
        let c0 = -self
            .normal
            .iter()
            .zip(&self.point)
            .fold(Rational::zero(), |acc, (g, x)| acc + g * x);
        MPoly::affine(c0, &self.normal)
    }

    pub fn contains(&self, y: &[Rational]) -> bool {
        self.linear_form().eval(y).map(|v| v.is_zero()).unwrap_or(false)
    }
}

/// Tangent hyperplane to `{p^(m-1) = 0}` at `x`, `m = mult(p, x)`.
pub fn exposing_tangent(p: &MPoly, x: &[Rational]) -> Result<TangentSpace, RigidError> {
    let m = mult(p, x)?;
    if m == 0 {
        return Err(RigidError::Interior);
    }
    let curve = renegar_derivative(p, m - 1)?;
    let normal: Vec<Rational> = curve
        .gradient()
        .iter()
        .map(|g| g.eval(x))
        .collect::<Result<_, _>>()?;
    if normal.iter().all(Zero::is_zero) {
        return Err(RigidError::Singular { order: m - 1 });
    }
    Ok(TangentSpace {
        point: x.to_vec(),
        normal,
        multiplicity: m,
        curve,
    })
}

/// Membership of `x` in the closed hyperbolicity cone of `P` with respect
/// to `e`: all roots of `s -> P(x - s e)` are real and nonnegative.
pub fn hyperbolicity_cone_member(big_p: &MPoly, e: &[Rational], x: &[Rational]) -> Result<bool, RigidError> {
    if !big_p.eval(e)?.is_positive() {
        return Err(RigidError::NonPositiveAtE);
    }
    let neg_e: Vec<Rational> = e.iter().map(|c| -c).collect();
    let q = big_p.restrict_line(x, &neg_e)?;
    Ok(all_roots_nonnegative(&q)?)
}

/// `[p, p^(1), ..., p^(d-1)]`, whose common nonnegativity set is the rigidly
/// convex set of a real-zero polynomial `p` with respect to the origin.
///
/// The real-zero property is re-checked on the default direction sample.
pub fn basic_closed_description(p: &MPoly) -> Result<Vec<MPoly>, RigidError> {
    let d = degree_of(p)?;
    let origin = vec![Rational::zero(); p.nvars()];
    let report = check_rz(p, &origin, &default_directions(p.nvars(), 64))?;
    if !report.overall {
        return Err(RigidError::NotRealZero {
            witness: report.witness.unwrap_or_default(),
        });
    }
    (0..d.max(1)).map(|k| renegar_derivative(p, k)).collect()
}

/// Exact test `q(x) >= 0` for every `q` in `polys`.
pub fn in_basic_closed(polys: &[MPoly], x: &[Rational]) -> Result<bool, PolyError> {
    for q in polys {
        if q.eval(x)?.is_negative() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational::rat;

    fn p() -> MPoly {
        MPoly::parse("t1^3 - t1^2 - t1 - t2^2 + 1", 2).unwrap()
    }

    fn pt(a: i64, b: i64) -> Vec<Rational> {
        vec![int(a), int(b)]
    }

    #[test]
    fn rz_examples() {
        let r = check_rz(&p(), &pt(0, 0), &default_directions(2, 64)).unwrap();
        assert!(r.overall, "witness {:?}", r.witness);
        assert_eq!(r.verdicts.len(), 64);

        let circle = MPoly::parse("t1^2 + t2^2 + 1", 2).unwrap();
        let r = check_rz(&circle, &pt(0, 0), &[pt(1, 0)]).unwrap();
        assert!(!r.overall);
        assert_eq!(r.witness, Some(vec!["1".to_string(), "0".to_string()]));

        let lin = MPoly::parse("1 - t1", 2).unwrap();
        assert!(check_rz(&lin, &pt(0, 0), &[pt(1, 0)]).unwrap().overall);

        assert!(matches!(check_rz(&lin, &pt(0, 0), &[]), Err(RigidError::NoDirections)));
        assert!(check_rz(&lin, &pt(0, 0), &[pt(0, 0)]).is_err());
    }

    #[test]
    fn renegar_chain_matches_formula() {
        let p1 = renegar_derivative(&p(), 1).unwrap();
        assert_eq!(p1, MPoly::parse("-t1^2 - t2^2 - 2*t1 + 3", 2).unwrap());
        // Closed formula: 2!/0! * p_1 + 3!/1! * p_0 = -2 t1 + 6.
        let p2 = renegar_derivative(&p(), 2).unwrap();
        assert_eq!(p2, MPoly::parse("6 - 2*t1", 2).unwrap());
        assert_eq!(renegar_derivative(&p(), 0).unwrap(), p());
        assert!(renegar_derivative(&p(), 4).is_err());
        // p^(k+1) = (p^(k))^(1)
        assert_eq!(renegar_derivative(&p1, 1).unwrap(), p2);
    }

    #[test]
    fn homogeneous_derivative_dehomogenizes() {
        let big = p().homogenize(3).unwrap();
        let e = vec![int(0), int(0), int(1)];
        for k in 0..=3 {
            let hk = homogeneous_renegar(&big, &e, k).unwrap();
            assert_eq!(hk.dehomogenize(), renegar_derivative(&p(), k).unwrap());
        }
        let u2 = MPoly::parse_homogeneous("u^2", 2).unwrap();
        assert_eq!(
            homogeneous_renegar(&u2, &e, 1).unwrap(),
            MPoly::parse_homogeneous("2*u", 2).unwrap()
        );
        let nonhom = MPoly::parse_homogeneous("u^2 + t1", 2).unwrap();
        assert!(matches!(homogeneous_renegar(&nonhom, &e, 1), Err(RigidError::NotHomogeneous)));
    }

    #[test]
    fn multiplicities() {
        assert_eq!(mult(&p(), &pt(1, 0)).unwrap(), 2);
        assert_eq!(mult(&p(), &pt(0, 1)).unwrap(), 1);
        assert_eq!(mult(&p(), &pt(0, 0)).unwrap(), 0);
        for x in [pt(1, 0), pt(0, 1), pt(0, 0), pt(-1, 0), vec![rat(1, 2), rat(3, 7)]] {
            assert_eq!(mult(&p(), &x).unwrap(), mult_via_homogenization(&p(), &x).unwrap());
        }
        assert!(mult(&MPoly::zero(2), &pt(1, 0)).is_err());
    }

    #[test]
    fn tangents() {
        let t = exposing_tangent(&p(), &pt(1, 0)).unwrap();
        assert_eq!(t.normal, pt(-4, 0));
        assert_eq!(t.multiplicity, 2);
        assert!(t.contains(&pt(1, 5)));
        assert!(!t.contains(&pt(0, 0)));

        let t = exposing_tangent(&p(), &pt(0, 1)).unwrap();
        assert_eq!(t.normal, pt(-1, -2));

        let lin = MPoly::parse("1 - t1", 2).unwrap();
        let t = exposing_tangent(&lin, &[int(1), rat(7, 3)]).unwrap();
        assert!(t.contains(&pt(1, -100)));

        assert!(matches!(exposing_tangent(&p(), &pt(0, 0)), Err(RigidError::Interior)));
        let square = MPoly::parse("(1 - t1)^2", 2).unwrap();
        assert_eq!(exposing_tangent(&square, &pt(1, 0)).unwrap().normal, pt(-2, 0));
        // p^(m-1)(s x) has a simple root at s = 1, so normal . x != 0.
        let quartic = MPoly::parse("(1 - t1)^2*(1 - t2)^2", 2).unwrap();
        let t = exposing_tangent(&quartic, &pt(1, 1)).unwrap();
        assert_eq!(t.multiplicity, 4);
        assert_ne!(&t.normal[0] + &t.normal[1], int(0));
    }

    #[test]
    fn cone_membership() {
        let big = p().homogenize(3).unwrap();
        let e = vec![int(0), int(0), int(1)];
        assert!(hyperbolicity_cone_member(&big, &e, &e).unwrap());
        assert!(!hyperbolicity_cone_member(&big, &e, &[int(2), int(0), int(1)]).unwrap());
        assert!(hyperbolicity_cone_member(&big, &e, &[int(-1), int(0), int(1)]).unwrap());
        let bad_e = vec![int(0), int(0), int(-1)];
        assert!(matches!(
            hyperbolicity_cone_member(&big, &bad_e, &e),
            Err(RigidError::NonPositiveAtE)
        ));
    }

    #[test]
    fn description() {
        let d = basic_closed_description(&p()).unwrap();
        assert_eq!(d.len(), 3);
        assert_eq!(d[1], MPoly::parse("-t1^2 - t2^2 - 2*t1 + 3", 2).unwrap());
        let lin = MPoly::parse("1 - t1 + t2", 2).unwrap();
        assert_eq!(basic_closed_description(&lin).unwrap(), vec![lin.clone()]);
        let disc = MPoly::parse("1 - t1^2 - t2^2", 2).unwrap();
        let d = basic_closed_description(&disc).unwrap();
        assert_eq!(d, vec![disc.clone(), MPoly::constant(2, int(2))]);
        assert!(basic_closed_description(&MPoly::parse("t1^2 + t2^2 + 1", 2).unwrap()).is_err());
    }

    #[test]
    fn directions_are_distinct_lines() {
        let dirs = default_directions(2, 256);
        assert_eq!(dirs.len(), 256);
        let set: BTreeSet<Vec<String>> = dirs.iter().map(|v| fmt_vec(v)).collect();
        assert_eq!(set.len(), 256);
        assert_eq!(default_directions(3, 10).len(), 27);
    }
}
