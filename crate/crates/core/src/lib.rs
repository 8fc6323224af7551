//! Exact integer polynomial programming over axis-aligned boxes.
//!
//! Given polynomials `q_1, ..., q_r` with integer coefficients and a box
//! `D = [a_1, a_1 + 2^k_1] x ... x [a_n, a_n + 2^k_n]`, the solver finds every
//! lattice point `z` in `D` maximizing `q_1` subject to `q_i(z) >= 0` for
//! `i >= 2`. Pruning uses Bernstein coefficients as certified range bounds and
//! sub-boxes are reached by multiplying coefficient tensors with the triangular
//! halving matrices of the Bernstein basis. All arithmetic on the decision path
//! is exact.
//!
//! The crate is organized bottom-up:
//!
//! - [`rational`], [`index`], [`lattice`]: exact scalars, multi-indices and
//!   dyadic sub-boxes.
//! - [`poly`], [`bernstein`]: monomial and Bernstein forms.
//! - [`subdivision`], [`cache`]: halving matrices, box matrices and their
//!   on-disk format.
//! - [`problem`]: normal-form rewriting of user problems.
//! - [`solver`]: the branch-and-prune subdivision.
//! - [`complexity`]: expected box counts for the subdivision tree.
//! - [`oracle`]: brute-force ground truth.
//! - [`parse`], [`cli`]: the problem file format and the `bipp` driver.

pub mod bernstein;
pub mod cache;
pub mod cli;
pub mod complexity;
pub mod error;
pub mod index;
pub mod lattice;
pub mod matrix;
pub mod oracle;
pub mod parse;
pub mod poly;
pub mod problem;
pub mod rational;
pub mod solver;
pub mod subdivision;

pub use bernstein::BernsteinForm;
pub use error::{Error, Result};
pub use index::{MultiDegree, MultiIndex};
pub use lattice::LatticeBox;
pub use poly::MonomialPoly;
pub use problem::{CanonicalProblem, SystemMatrix, UserProblem};
pub use rational::{Integer, Rational, Theta};
pub use solver::{solve, solve_raw, SolveOutcome, SolverConfig};
pub use subdivision::{Side, SubdivisionBasis};
