//! Sturm chains and exact real-root counting.

use num_traits::{Signed, Zero};

use super::rational::{sign, Rational};
use super::upoly::UPoly;
use super::PolyError;

/// One end of a real interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound {
    NegInfinity,
    PosInfinity,
    Open(Rational),
    Closed(Rational),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Bound,
    pub hi: Bound,
}

impl Interval {
    pub fn real_line() -> Self {
        Interval {
            lo: Bound::NegInfinity,
            hi: Bound::PosInfinity,
        }
    }

    pub fn open(a: Rational, b: Rational) -> Self {
        Interval {
            lo: Bound::Open(a),
            hi: Bound::Open(b),
        }
    }

    pub fn closed(a: Rational, b: Rational) -> Self {
        Interval {
            lo: Bound::Closed(a),
            hi: Bound::Closed(b),
        }
    }

    /// `(-inf, b)`.
    pub fn below(b: Rational) -> Self {
        Interval {
            lo: Bound::NegInfinity,
            hi: Bound::Open(b),
        }
    }
}

#[derive(Clone, Copy)]
enum Point<'a> {
    NegInf,
    PosInf,
    At(&'a Rational),
}

/// `chain[0] = q`, `chain[1] = q'`, `chain[i+1] = -rem(chain[i-1], chain[i])`,
/// with each entry rescaled by a positive constant to a primitive integer
/// polynomial.
#[derive(Clone, Debug)]
pub struct SturmChain {
    chain: Vec<UPoly>,
}

impl SturmChain {
    pub fn new(q: &UPoly) -> Result<Self, PolyError> {
        if q.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let mut chain = vec![q.primitive()];
        let d = q.derivative();
        if !d.is_zero() {
            chain.push(d.primitive());
            loop {
                let n = chain.len();
                let r = chain[n - 2].positive_pseudo_rem(&chain[n - 1]);
                if r.is_zero() {
                    break;
                }
                chain.push((-&r).primitive());
            }
        }
        Ok(SturmChain { chain })
    }

    pub fn polys(&self) -> &[UPoly] {
        &self.chain
    }

    fn variations(&self, at: Point<'_>) -> usize {
        let signs = self.chain.iter().map(|p| match at {
            Point::At(x) => sign(&p.eval(x)),
            Point::PosInf => sign(p.leading_coeff().unwrap()),
            Point::NegInf => {
                let s = sign(p.leading_coeff().unwrap());
                if p.deg() % 2 == 0 {
                    s
                } else {
                    -s
                }
            }
        });
        let mut count = 0;
        let mut prev = 0;
        for s in signs.filter(|&s| s != 0) {
            if prev != 0 && s != prev {
                count += 1;
            }
            prev = s;
        }
        count
    }

    pub fn sign_variations(&self, x: &Rational) -> usize {
        self.variations(Point::At(x))
    }
}

fn point_of(b: &Bound) -> Point<'_> {
    match b {
        Bound::NegInfinity => Point::NegInf,
        Bound::PosInfinity => Point::PosInf,
        Bound::Open(x) | Bound::Closed(x) => Point::At(x),
    }
}

fn rank(b: &Bound) -> (i8, Option<&Rational>) {
    match b {
        Bound::NegInfinity => (-1, None),
        Bound::PosInfinity => (1, None),
        Bound::Open(x) | Bound::Closed(x) => (0, Some(x)),
    }
}

/// Number of distinct real roots of `q` in `interval`.
pub fn count_real_roots(q: &UPoly, interval: &Interval) -> Result<usize, PolyError> {
    if q.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let (lo_rank, lo_x) = rank(&interval.lo);
    let (hi_rank, hi_x) = rank(&interval.hi);
    let misordered = match (lo_x, hi_x) {
        (Some(a), Some(b)) => a > b,
        _ => false,
    };
    if misordered || lo_rank == 1 || hi_rank == -1 {
        return Err(PolyError::InvalidInterval);
    }
    if let (Some(a), Some(b)) = (lo_x, hi_x) {
        if a == b {
            let both_closed = matches!(interval.lo, Bound::Closed(_)) && matches!(interval.hi, Bound::Closed(_));
            return Ok(usize::from(both_closed && q.eval(a).is_zero()));
        }
    }
    // Roots are counted on the squarefree part so that endpoint roots are
    // simple and the chain ends in a nonzero constant.
    let chain = SturmChain::new(&q.squarefree_part())?;
    // V(a) - V(b) counts the distinct roots in (a, b].
    let mut n = chain.variations(point_of(&interval.lo)) as i64 - chain.variations(point_of(&interval.hi)) as i64;
    if let Bound::Closed(a) = &interval.lo {
        if q.eval(a).is_zero() {
            n += 1;
        }
    }
    if let Bound::Open(b) = &interval.hi {
        if q.eval(b).is_zero() {
            n -= 1;
        }
    }
    debug_assert!(n >= 0);
    Ok(n as usize)
}

/// True iff every complex root of `q` (with multiplicity) is real.
pub fn all_roots_real(q: &UPoly) -> Result<bool, PolyError> {
    if q.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let sf = q.squarefree_part();
    Ok(count_real_roots(&sf, &Interval::real_line())? == sf.deg())
}

/// True iff all roots of `q` are real and none is negative.
pub fn all_roots_nonnegative(q: &UPoly) -> Result<bool, PolyError> {
    Ok(all_roots_real(q)? && count_real_roots(q, &Interval::below(Rational::zero()))? == 0)
}

/// Sign of `q` just to the right of `x` (the first nonvanishing derivative).
pub fn sign_right_of(q: &UPoly, x: &Rational) -> i32 {
    let mut cur = q.clone();
    while !cur.is_zero() {
        let v = cur.eval(x);
        if !v.is_zero() {
            return if v.is_positive() { 1 } else { -1 };
        }
        cur = cur.derivative();
    }
    0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational::{int, rat};

    fn roots_poly(roots: &[Rational]) -> UPoly {
        roots
            .iter()
            .fold(UPoly::constant(int(1)), |acc, r| &acc * &UPoly::linear_root(r))
    }

    #[test]
    fn spec_examples() {
        let q = UPoly::from_ints(&[1, -1, -1, 1]);
        assert_eq!(count_real_roots(&q, &Interval::real_line()).unwrap(), 2);
        assert_eq!(count_real_roots(&UPoly::from_ints(&[1, 0, 1]), &Interval::real_line()).unwrap(), 0);
        let s = UPoly::from_ints(&[0, 1]);
        assert_eq!(count_real_roots(&s, &Interval::closed(int(0), int(0))).unwrap(), 1);
        assert!(all_roots_real(&q).unwrap());
        assert!(!all_roots_real(&UPoly::from_ints(&[1, 0, 1])).unwrap());
        assert!(all_roots_real(&UPoly::from_ints(&[1, 0, -1])).unwrap());
        assert!(!all_roots_nonnegative(&q).unwrap());
        assert!(all_roots_nonnegative(&UPoly::from_ints(&[0, 0, 1])).unwrap());
        assert!(all_roots_nonnegative(&UPoly::from_ints(&[2, -3, 1])).unwrap());
    }

    #[test]
    fn endpoint_semantics() {
        // roots at -1, 1/2, 2
        let q = roots_poly(&[int(-1), rat(1, 2), int(2)]);
        let n = |lo: Bound, hi: Bound| count_real_roots(&q, &Interval { lo, hi }).unwrap();
        assert_eq!(n(Bound::Closed(int(-1)), Bound::Closed(int(2))), 3);
        assert_eq!(n(Bound::Open(int(-1)), Bound::Closed(int(2))), 2);
        assert_eq!(n(Bound::Closed(int(-1)), Bound::Open(int(2))), 2);
        assert_eq!(n(Bound::Open(int(-1)), Bound::Open(int(2))), 1);
        assert_eq!(n(Bound::NegInfinity, Bound::Open(int(0))), 1);
        assert_eq!(n(Bound::Open(int(0)), Bound::PosInfinity), 2);
        assert!(count_real_roots(&q, &Interval::closed(int(3), int(1))).is_err());
        assert!(count_real_roots(&UPoly::zero(), &Interval::real_line()).is_err());
    }

    #[test]
    fn chain_shape() {
        let q = UPoly::from_ints(&[-1, 0, 1]);
        let chain = SturmChain::new(&q).unwrap();
        assert_eq!(chain.polys()[0], q);
        assert_eq!(chain.polys()[1], UPoly::from_ints(&[0, 1]));
        assert!(chain.polys().last().unwrap().deg() == 0);
    }
}
