//! Exact computations around multidegrees of tame polynomial automorphisms.
//!
//! The crate covers sparse rational polynomials and polynomial maps, Poisson
//! bracket degrees, two-generator numerical semigroups, a rule engine for
//! multidegrees of tame automorphisms of ℂ³ with explicit witnesses, and the
//! decomposition of plane automorphisms into affine and triangular factors.

pub mod aut2;
pub mod bracket;
pub mod construct3;
pub mod decide3;
pub mod error;
pub mod gallery;
pub mod json;
pub mod linalg;
pub mod numsg;
pub mod parse;
pub mod poly;
pub mod polymap;
pub mod sample;
pub mod su_checks;

pub use error::{Error, Result};
pub use poly::{Degree, Monomial, Polynomial, Rational};
pub use polymap::{Generator, Multidegree, PolyMap};
