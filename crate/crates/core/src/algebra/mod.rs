//! Exact differential algebra over the profile jets.
//!
//! The ground ring is Q[f1..f4, g1..g4, a, b, lam, m] with arbitrary
//! precision rational coefficients. On top of it sit unreduced rational
//! functions, the quadratic extension by sqrt(W), the two derivations d/dx
//! and d/dy that shift jet variables, and a seeded randomized zero test.
//! `chains` builds the printed displays of the curvature identity chains
//! per ambient mode and `verify` replays them step by step.

pub mod chains;
pub mod derivation;
pub mod ident;
pub mod poly;
pub mod ratfunc;
pub mod sqrtw;
pub mod verify;

pub use chains::{build_bracket_pairs, BracketPairs, ChainMode, ModeData, Mutation};
pub use ident::poly_identity_test;
pub use verify::{mutation_target, run_suite, suite_passes, StepReport, SuiteId, SuiteReport};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    /// Differentiation asked for a jet coordinate beyond order four.
    #[error("cannot differentiate {0}: the stored jets stop at order four")]
    JetOrderExceeded(&'static str),
    /// The randomized zero test could not find a point where every
    /// denominator is nonzero within its retry budget.
    #[error("identity sampling found no admissible evaluation point")]
    SamplingFailed,
    /// An exact polynomial division left a remainder.
    #[error("exact division left a remainder: {0}")]
    NotDivisible(String),
}
