//! Exact scalars, matrices, polynomials and the function DAG.

mod coord;
mod func;
mod identity;
mod matrix;
mod poly;
mod scalar;

pub use coord::{Coord, Point, Tag};
pub use func::{Algebra, Evaluator, Node, NodeKind, RegularFunction};
pub use identity::{eval_sparse, functions_equal, random_point, sample_points, IdentityConfig, IdentityVerdict};
pub use matrix::{det_cofactor, solve, solve_consistent, ExactDiv, ExactMatrix};
pub use poly::{Monomial, SparsePolynomial};
pub use scalar::{q, q_frac, GradScalar, Ring, Q};
