use alloc::string::String;
use core::fmt;

/// Errors raised by the exact engine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// A matrix operation received a non-square matrix.
    NotSquare { rows: usize, cols: usize },
    /// Dimensions of two operands do not fit together.
    Shape(String),
    /// A quotient node evaluated to a zero denominator.
    DivisionByZero { node: usize },
    /// Gradient elimination met a column whose values are all zero.
    NeedsRerandomization,
    /// Exact polynomial division left a nonzero remainder.
    NotDivisible,
    /// Symbolic expansion exceeded its term budget.
    TooLarge { terms: usize },
    /// Too many degenerate sample points in a row.
    ResampleCapExceeded { attempts: usize },
    /// An operation was asked to act on a vertex of the wrong kind.
    VertexKind { vertex: usize, expected: &'static str },
    /// Parameters outside the supported range.
    Range(String),
    /// A linear system had no solution.
    Inconsistent,
    /// A function was not homogeneous under a diagonal scaling.
    NotHomogeneous { position: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotSquare { rows, cols } => write!(f, "matrix is {rows}x{cols}, expected square"),
            Error::Shape(s) => write!(f, "shape mismatch: {s}"),
            Error::DivisionByZero { node } => write!(f, "zero denominator at node {node}"),
            Error::NeedsRerandomization => f.write_str("pivot column has no nonzero value; re-randomize the point"),
            Error::NotDivisible => f.write_str("not divisible"),
            Error::TooLarge { terms } => write!(f, "symbolic expansion exceeded {terms} terms"),
            Error::ResampleCapExceeded { attempts } => {
                write!(f, "gave up after {attempts} degenerate sample points")
            }
            Error::VertexKind { vertex, expected } => write!(f, "vertex {vertex} is not {expected}"),
            Error::Range(s) => write!(f, "parameter out of range: {s}"),
            Error::Inconsistent => f.write_str("linear system is inconsistent"),
            Error::NotHomogeneous { position } => {
                write!(f, "function is not homogeneous in diagonal position {position}")
            }
        }
    }
}
