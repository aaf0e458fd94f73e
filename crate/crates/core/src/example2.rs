//! The region above `t2 = t1^3` cut by `1 - t2 >= 0`: with `t1 >= 0` every
//! face is exposed; with `t1 + 1 >= 0, t2 >= 0` instead, the corner `(0,0)`
//! is a non-exposed face.

use crate::poly::rational::{int, Rational};
use crate::poly::MPoly;

fn parse(s: &str) -> MPoly {
    MPoly::parse(s, 2).expect("valid polynomial")
}

/// `(t2 - t1^3, t1, 1 - t2)`.
pub fn triple() -> Vec<MPoly> {
    vec![parse("t2 - t1^3"), parse("t1"), parse("1 - t2")]
}

/// `(t2 - t1^3, t1 + 1, t2, 1 - t2)`.
pub fn four() -> Vec<MPoly> {
    vec![parse("t2 - t1^3"), parse("t1 + 1"), parse("t2"), parse("1 - t2")]
}

/// Tangent to `t2 = t1^3` at `(a, a^3)`: `t2 - 3a^2 t1 + 2a^3`.
pub fn tangent(a: &Rational) -> MPoly {
    let a2 = a * a;
    let a3 = &a2 * a;
    MPoly::affine(int(2) * a3, &[int(-3) * a2, int(1)])
}

/// Plot window.
pub const WINDOW: [f64; 4] = [-1.5, 1.5, -0.5, 1.5];

/// A strictly interior point of both sets.
pub fn interior_point() -> Vec<Rational> {
    vec![Rational::new(1.into(), 2.into()), Rational::new(1.into(), 2.into())]
}
