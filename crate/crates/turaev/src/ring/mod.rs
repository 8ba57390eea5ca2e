//! The ground ring `R = Z[u, u^-1, (1-u)^-1]` and the cyclotomic fields
//! `Q(zeta_n)` that torsion values are evaluated into.
//!
//! Everything here is exact: integers are arbitrary precision, ring elements
//! keep a canonical `(numerator, (1-u)-denominator)` form, and cyclotomic
//! numbers are rational coefficient vectors reduced modulo the n-th
//! cyclotomic polynomial. Floating point appears only in the `eval_unit_circle`
//! diagnostics, never in an invariant.

mod cyclotomic;
mod elem;
mod laurent;

pub use cyclotomic::{cyc_equal_up_to_sign, cyclotomic_polynomial, euler_phi, Cyclotomic};
pub use elem::{RingElem, UnitParts, UnitUpToSign};
pub use laurent::LaurentPoly;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Sign of a unit (or of a vertex color when reused by the graph side).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn to_int(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Plus => write!(f, "+"),
            Sign::Minus => write!(f, "-"),
        }
    }
}

/// A rank-one local system on the circle with values in `Q(zeta_n)`.
///
/// The convention is locked here once and for all: the positive generator of
/// the fiber fundamental group is sent to `zeta^-1`, equivalently the ring
/// variable `u` is sent to `zeta = e^(2*pi*i/n)`. Tests pin this choice; the
/// torsion of the two members of a mirror pair would silently swap if it
/// drifted.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct LocalSystem {
    order: u32,
}

impl LocalSystem {
    /// A local system of the given order `n >= 1`.
    pub fn new(order: u32) -> Self {
        assert!(order >= 1, "local system order must be at least 1");
        LocalSystem { order }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Exponent of the image of the fiber generator: always `-1`.
    pub fn fiber_exp(&self) -> i64 {
        -1
    }
}

impl fmt::Display for LocalSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z -> Q(zeta_{})*, fiber |-> zeta^-1", self.order)
    }
}

/// Errors from ring-level evaluations.
#[derive(Debug, Error, PartialEq)]
pub enum RingError {
    /// `u -> zeta` is only a ring map out of `R` when `zeta != 1`, i.e. the
    /// order is at least 2; at order 1 the inverted prime `1 - u` maps to 0.
    #[error("cyclotomic evaluation needs order >= 2; at order 1 the root is 1 and 1-u has no image")]
    OrderOne,
    /// Floating evaluation too close to the singular point `u = 1`.
    #[error("evaluation at e^(i*{theta}) is singular: (1-u)^-{denom_pow} blows up near u = 1")]
    SingularEvaluation { theta: f64, denom_pow: u32 },
}

/// A parse failure with the byte offset where it happened.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}
