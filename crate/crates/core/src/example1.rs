//! The cubic `p = t1^3 - t1^2 - t1 - t2^2 + 1` and a 3x3 pencil with
//! `det A(t) = p`, used throughout tests, the CLI and the figures.

use crate::linmat::{LinMatPoly, QMatrix};
use crate::poly::MPoly;

pub fn p() -> MPoly {
    MPoly::parse("t1^3 - t1^2 - t1 - t2^2 + 1", 2).expect("valid polynomial")
}

pub fn pencil() -> LinMatPoly {
    LinMatPoly::new(vec![
        QMatrix::from_ints(&[&[2, 0, 1], &[0, 1, 0], &[1, 0, 1]]),
        QMatrix::from_ints(&[&[-2, 0, -1], &[0, -1, 0], &[-1, 0, 0]]),
        QMatrix::from_ints(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 0]]),
    ])
    .expect("symmetric pencil")
}

/// `c_1` and `c_2` of `det(A(t) - sI)`.
pub fn c1() -> MPoly {
    MPoly::parse("-t1^2 + 5*t1 + t2^2 - 4", 2).expect("valid polynomial")
}

pub fn c2() -> MPoly {
    MPoly::parse("4 - 3*t1", 2).expect("valid polynomial")
}

/// Plot window `[-4, 7] x [-2.5, 2.5]`.
pub const WINDOW: [f64; 4] = [-4.0, 7.0, -2.5, 2.5];
