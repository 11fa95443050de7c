//! Generalized cluster structures of geometric type.
//!
//! A [`MultiplicityQuiver`] stores vertices with a kind and a multiplicity
//! `d`, and edges as positive integer multiplicities with no 2-cycles. A
//! [`GeneralizedSeed`] attaches a [`RegularFunction`](crate::RegularFunction)
//! to every vertex and an [`ExchangeString`] to every mutable vertex.

mod laurent;
mod quiver;
pub mod random;
mod seed;

pub use laurent::LaurentPolynomial;
pub use quiver::{MultiplicityQuiver, Vertex, VertexKind};
pub use seed::{ExchangeString, GeneralizedSeed, TauMonomial};
