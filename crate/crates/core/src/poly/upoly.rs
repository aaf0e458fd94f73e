use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::mpoly::Degree;
use super::rational::{int, Rational};
use super::PolyError;

/// Dense univariate polynomial in `s`; `coeffs[i]` multiplies `s^i`.
///
/// Trailing zeros are always trimmed, so the leading coefficient is nonzero
/// unless the polynomial is zero (empty coefficient vector).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UPoly {
    coeffs: Vec<Rational>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| int(x)).collect())
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `s - a`.
    pub fn linear_root(a: &Rational) -> Self {
        Self::new(vec![-a.clone(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Degree {
        if self.coeffs.is_empty() {
            Degree::NegInfinity
        } else {
            Degree::Finite((self.coeffs.len() - 1) as u32)
        }
    }

    /// Degree as `usize`; only meaningful for nonzero polynomials.
    pub(crate) fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, s: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * s + c;
        }
        acc
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * int(i as i64))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rational) -> UPoly {
        UPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Euclidean division over Q. Panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &UPoly) -> (UPoly, UPoly) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let mut rem = self.coeffs.clone();
        let dd = divisor.deg();
        let lead = divisor.coeffs[dd].clone();
        if rem.len() <= dd {
            return (UPoly::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] / &lead;
            if !c.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[i + j] -= &c * dc;
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (UPoly::new(quot), UPoly::new(rem))
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> UPoly {
        match self.leading_coeff() {
            None => UPoly::zero(),
            Some(l) => self.scale(&(Rational::one() / l)),
        }
    }

    /// `q / gcd(q, q')`: same distinct roots, all simple.
    pub fn squarefree_part(&self) -> UPoly {
        if self.is_zero() {
            return UPoly::zero();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0
    }

    /// Positive rescaling to a primitive integer polynomial (content 1).
    pub fn primitive(&self) -> UPoly {
        if self.is_zero() {
            return UPoly::zero();
        }
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
            .collect();
        let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        UPoly::new(
            ints.into_iter()
                .map(|c| Rational::from_integer(c / &content))
                .collect(),
        )
    }

    /// Remainder of `|lc(b)|^(deg a - deg b + 1) * a` by `b`. Multiplying by a
    /// positive constant keeps signs intact, which Sturm chains rely on.
    pub fn positive_pseudo_rem(&self, b: &UPoly) -> UPoly {
        assert!(!b.is_zero());
        if self.deg() < b.deg() || self.is_zero() {
            return self.clone();
        }
        let delta = (self.deg() - b.deg() + 1) as usize;
        let factor = num_traits::pow(b.leading_coeff().unwrap().abs(), delta);
        self.scale(&factor).div_rem(b).1
    }

    /// Exact division by `(s - s0)` if it divides, else `None`.
    pub fn divide_by_root(&self, s0: &Rational) -> Option<UPoly> {
        let (q, r) = self.div_rem(&UPoly::linear_root(s0));
        r.is_zero().then_some(q)
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            match (first, c.is_negative()) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if i == 1 {
                        write!(f, "s")?;
                    } else {
                        write!(f, "s^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl Add for &UPoly {
    type Output = UPoly;
    fn add(self, rhs: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![Rational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            out[i] += c;
        }
        UPoly::new(out)
    }
}

impl Neg for &UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        UPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Sub for &UPoly {
    type Output = UPoly;
    fn sub(self, rhs: &UPoly) -> UPoly {
        self + &(-rhs)
    }
}

impl Mul for &UPoly {
    type Output = UPoly;
    fn mul(self, rhs: &UPoly) -> UPoly {
        if self.is_zero() || rhs.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly::new(out)
    }
}

/// Largest `m` with `(s - s0)^m` dividing `q`.
pub fn root_multiplicity(q: &UPoly, s0: &Rational) -> Result<u32, PolyError> {
    if q.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let mut m = 0;
    let mut cur = q.clone();
    while let Some(next) = cur.divide_by_root(s0) {
        m += 1;
        cur = next;
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational::rat;

    #[test]
    fn division_and_gcd() {
        let a = UPoly::from_ints(&[1, -1, -1, 1]); // (s-1)^2 (s+1)
        let (q, r) = a.div_rem(&UPoly::from_ints(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(q, UPoly::from_ints(&[-1, 0, 1]));
        assert_eq!(a.gcd(&a.derivative()), UPoly::from_ints(&[-1, 1]));
        assert_eq!(a.squarefree_part(), UPoly::from_ints(&[-1, 0, 1]));
    }

    #[test]
    fn primitive_keeps_sign() {
        let p = UPoly::new(vec![rat(-1, 2), rat(3, 4)]);
        assert_eq!(p.primitive(), UPoly::from_ints(&[-2, 3]));
    }

    #[test]
    fn multiplicity_examples() {
        let q = UPoly::from_ints(&[1, -1, -1, 1]);
        assert_eq!(root_multiplicity(&q, &int(1)).unwrap(), 2);
        assert_eq!(root_multiplicity(&q, &int(2)).unwrap(), 0);
        let cube = UPoly::from_ints(&[-1, 3, -3, 1]);
        assert_eq!(root_multiplicity(&cube, &int(1)).unwrap(), 3);
        assert!(root_multiplicity(&UPoly::zero(), &int(0)).is_err());
    }

    #[test]
    fn display() {
        assert_eq!(UPoly::from_ints(&[1, -1, -1, 1]).to_string(), "s^3 - s^2 - s + 1");
        assert_eq!(UPoly::from_ints(&[1, 0, -1]).to_string(), "-s^2 + 1");
    }
}
