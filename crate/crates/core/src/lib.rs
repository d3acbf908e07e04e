//! Exact quantum cluster realization of `U_q(sl_{n+1})`.
//!
//! The crate is `no_std` and only needs `alloc`. Everything is computed
//! symbolically: coefficients live in `Q(i)(q)` and never get evaluated.
//!
//! - [`coeff`]: Laurent polynomials and rational functions in `q`.
//! - [`qtorus`]: seeds, quantum torus monomials and polynomials, fractions.
//! - [`quiver`]: triangle quivers, amalgamation, `D_n`/`Z_n`, flips, `σ`.
//! - [`mutate`]: classical and quantum mutation, monomial maps, schedules.
//! - [`qgroup`]: the embedding of the Drinfeld double, root vectors, PBW data.
//! - [`rmatrix`]: Cartan part, factor sequences, truncated dilogarithm series.

#![no_std]

extern crate alloc;

pub mod coeff;
pub mod mutate;
pub mod qgroup;
pub mod qtorus;
pub mod quiver;
pub mod rmatrix;
pub mod skew;

use alloc::string::String;
use core::fmt;

/// Errors raised by the algebraic and combinatorial routines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    DivisionByZero,
    Parse(String),
    /// Elements from tori of different sizes were combined.
    SeedMismatch,
    FrozenVertex(usize),
    BadVertex(usize),
    /// A `q`-commutation exponent that was required to be an integer was not.
    NonEvenCommutation,
    /// A decomposition required a `q^{±1}` split but met a `q^0` term.
    DecompositionUndefined,
    NotPbwLeadingTerm,
    BadIndex(String),
    BadShape(String),
    /// A truncated computation lost the precision it needed.
    Precision,
    Inexact,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DivisionByZero => f.write_str("division by zero"),
            Error::Parse(m) => write!(f, "parse error: {}", m),
            Error::SeedMismatch => f.write_str("mismatched seed"),
            Error::FrozenVertex(v) => write!(f, "vertex {} is frozen", v),
            Error::BadVertex(v) => write!(f, "no vertex {}", v),
            Error::NonEvenCommutation => f.write_str("non-even q-commutation"),
            Error::DecompositionUndefined => f.write_str("decomposition undefined"),
            Error::NotPbwLeadingTerm => f.write_str("not a PBW leading term"),
            Error::BadIndex(m) => write!(f, "bad index: {}", m),
            Error::BadShape(m) => write!(f, "wrong shape: {}", m),
            Error::Precision => f.write_str("insufficient series precision"),
            Error::Inexact => f.write_str("inexact division"),
        }
    }
}
