//! Composition algebra of state-based input/output models, classical and
//! quantum stochastic, together with discretized simulators that realize
//! the product-limit construction of the corresponding evolutions.
//!
//! The crate is organized around one carrier type, [`CMat`], and five
//! subject areas:
//!
//! - [`blockspace`]: operators on h ⊕ (h⊗K), matrix exponentials, the
//!   decapitated exponentials e₁/e₂, and a restricted principal log;
//! - [`classical`]: linear state-space models, their series product,
//!   concatenation, cascading, transfer functions and time responses;
//! - [`heisenberg`]: Euclidean and extended Heisenberg group laws, Weyl
//!   operators on truncated Fock space, and the CCR multiplier checks;
//! - [`qsde`]: quantum stochastic coefficient matrices, the series-product
//!   group, Hudson-Parthasarathy triples, the Belavkin representation and
//!   the exponential map between the Lie algebra and the group;
//! - [`focksim`]: slice-chain discretizations of quantum stochastic
//!   evolutions, an exact exponential-vector ODE oracle, and the
//!   product-formula convergence experiments.

pub mod blockspace;
pub mod classical;
pub mod cmat;
pub mod error;
pub mod focksim;
pub mod heisenberg;
pub mod qsde;
pub mod random;

pub use blockspace::{BlockOp, SpaceDims};
pub use classical::ClassicalModel;
pub use cmat::{CMat, CVec, C64};
pub use error::{Error, Result};
pub use focksim::{ConvergenceRow, MatrixElementSpec, Partition, PiecewiseTestFn, StepFunction};
pub use heisenberg::{EuclideanElem, HeisenbergElem, TruncatedFock};
pub use qsde::{CoeffMatrix, ItoSymbol, LieAlgElem, SLHTriple};
