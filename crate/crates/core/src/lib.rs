//! Spectrahedra, rigidly convex sets and Lasserre relaxations.
//!
//! Exact symbolic tools (real-zero checks, Renegar derivatives, the
//! characteristic-polynomial PSD rule, kernel faces of linear matrix
//! pencils) sit next to numeric ones (a small primal-dual SDP solver,
//! truncated quadratic modules and moment relaxations, planar face
//! analysis). Numeric verdicts always carry a certificate that is checked
//! independently of the solver that produced it.

pub mod example1;
pub mod example2;
pub mod faces2d;
pub mod figures;
pub mod lasserre;
pub mod linmat;
pub mod poly;
pub mod reproduce;
pub mod rigidconv;
pub mod sdp;

pub use poly::{MPoly, Rational, UPoly};
