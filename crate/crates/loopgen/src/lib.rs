//! Exact evaluation of SU(2) recoupling symbols (3-j, 6-j, 9-j and general
//! trivalent recoupling graphs) from loop and curve combinatorics.
//!
//! The pipeline is:
//!
//! 1. [`graph`] — embedded trivalent graphs with oriented internal edges and a
//!    counter-clockwise cyclic order of half-edges at every vertex.
//! 2. [`curves`] — enumeration of non-overlapping closed-loop sets and
//!    open-curve sets, with their sign-endowed products as multilinear
//!    polynomials.
//! 3. [`series`] — sparse truncated multivariate power series over exact
//!    rationals (ring operations, reciprocal, exponential, leg gluing).
//! 4. [`symbol`] — assembly of the generating function of a graph, expansion,
//!    coefficient extraction and exact un-normalization to symbol values.
//! 5. [`oracles`] — independent reference evaluators (single-sum formulas for
//!    the 3-j and 6-j symbols, brute-force contraction for everything else).
//!
//! All arithmetic is exact: values live in the field of rational multiples of
//! square roots of square-free integers ([`arith::RootRational`]).

pub mod arith;
pub mod assign;
pub mod curves;
pub mod graph;
pub mod oracles;
pub mod poly;
pub mod random;
pub mod series;
pub mod sweeps;
pub mod symbol;

pub use arith::RootRational;
pub use graph::{QuantumAssignment, RecouplingGraph};
pub use poly::{Monomial, MultilinearPolynomial, Var};
pub use series::TruncatedSeries;
pub use symbol::{GeneratingFunction, SymbolValue};
