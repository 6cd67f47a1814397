//! Graded quiver algebras presented by generators and relations, with exact
//! (arbitrary-precision rational) arithmetic throughout.
//!
//! The crate builds two families of graded algebras — cyclic-group McKay
//! quiver algebras with commutation relations, and Jacobian algebras of
//! quivers with potential arising as duals of bipartite graphs on a torus —
//! and mechanically checks the structural claims one makes about them:
//! noncommutative Groebner bases and graded dimension counts, finite
//! dimensionality, explicit bimodule complexes with their graded
//! self-duality, charge consistency of dimer data, perfect matchings and
//! cuts, and the representation theory of the finite-dimensional slices
//! (Ext groups, global dimension, Cartan and Coxeter invariants,
//! preprojective gradings, inverse Serre iterates).
//!
//! Everything is deterministic: no floating point, no randomized pivoting,
//! no hash-order dependence in any result.

pub mod cli;
pub mod cycheck;
pub mod dimer;
pub mod linalg;
pub mod mckay;
pub mod normalform;
pub mod oracle;
pub mod pathalg;
pub mod polyq;
pub mod qp;
pub mod repthy;
pub mod simplex;

use std::fmt;

/// Error type for the whole crate: malformed input, violated preconditions,
/// or a computation that cannot produce a certified answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Error {
    msg: String,
}

impl Error {
    pub fn new(msg: impl Into<String>) -> Self {
        Error { msg: msg.into() }
    }

    pub fn message(&self) -> &str {
        &self.msg
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.msg)
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;

/// Shorthand used by constructors and validators.
macro_rules! input_err {
    ($($arg:tt)*) => {
        return Err($crate::Error::new(format!($($arg)*)))
    };
}
pub(crate) use input_err;
