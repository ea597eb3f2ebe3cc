//! Exact implicitization of rational hypersurfaces through linear syzygies
//! over toric compactifications built from Newton polytopes.
//!
//! The pipeline: parse a rational parametrization, build the Newton polytope
//! and the associated semigroup ring, compute a graded strand of linear
//! syzygies (or Koszul columns for a multiprojective codomain), assemble the
//! representation matrix, and extract the implicit equation as a gcd of
//! maximal minors. Three settings are supported: projective codomain over an
//! embedded toric source, products of projective lines as codomain, and a
//! multigraded source without embedding.

pub mod arith;
pub mod detint;
pub mod linalg;
pub mod polytope;
pub mod ring;
pub mod syzygy;
pub mod region;
pub mod gcd;
pub mod implicitize;
pub mod parse;
pub mod report;

pub use arith::{Monomial, Q, SparsePoly};
pub use linalg::{bareiss_det, kernel_basis, PolyMatrix, QMatrix};
pub use polytope::{newton_polytope, LatticePolytope};
