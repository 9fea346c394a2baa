//! Relative divergence of grading functions on finite chains, and a solver
//! for the maximum relative divergence principle.
//!
//! - [`chain`]: chains, grading functions and their increments.
//! - [`divergence`]: the relative divergence functional and Shannon entropy.
//! - [`solver`]: problems with affinely parameterized grading functions and
//!   their maximization.
//! - [`independence`]: two events with known marginals; the least presuming
//!   intersection probability is the product of the marginals.
//! - [`cli`]: the `mrdp` command line front-end and its file formats.

#![forbid(unsafe_code)]

pub mod chain;
pub mod cli;
pub mod divergence;
pub mod error;
pub mod independence;
pub mod solver;

pub use chain::{Chain, GradingFunction, IncrementSequence};
pub use divergence::{relative_divergence, shannon_entropy, xlnx};
pub use error::{Error, Result};
pub use independence::IndependenceInstance;
pub use solver::{AffineMap, GradingTemplate, Interval, MrdpProblem, SolveReport};
