//! Measure-and-retransmit fidelity and minimum-error discrimination for
//! mirror-symmetric qubit ensembles.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure
//! function over immutable values; the `std` companion crate adds IO,
//! parallel drivers and the command-line front end.
//!
//! Module map:
//! - [`qubit`]: operators, states, the mirror ensemble and POM validation.
//! - [`fidelity`]: `O_k` operators, 2×2 eigen-decomposition, retransmission
//!   states and strategy fidelities.
//! - [`strategy`]: `(A, B, C)` reduction, regime classification and the
//!   closed-form optimal strategy.
//! - [`min_error`]: minimum-error discrimination and its comparison with the
//!   fidelity optimum.
//! - [`oracle`]: brute-force planar POM search and Monte Carlo simulation.
//! - [`boundary`]: regime boundaries in the `(p, θ)` plane.
#![no_std]
#![forbid(unsafe_code)]
// Negated comparisons are how NaN gets rejected by the range checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod error;
mod numeric;

pub mod boundary;
pub mod fidelity;
pub mod min_error;
pub mod oracle;
pub mod qubit;
pub mod strategy;

#[cfg(feature = "serde")]
mod wire;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use fidelity::{EigenPair2, PlanarPair, RetransmitMap};
pub use min_error::{MinErrorRegime, MinErrorReport, RegimeComparison};
pub use oracle::{FamilyCase, McEstimate, OracleMethod, OracleResult, ThreeElementFamily};
pub use qubit::{
    Ensemble, HermitianOp2, MirrorEnsemble, Pom, PomElement, PomValidation, QubitState, Signal,
    StateList,
};
pub use strategy::{AbcCoefficients, Regime, StrategyRegime, StrategyReport};

/// Residual allowed when constructing or validating states and operators.
pub const REPR_TOL: f64 = 1e-12;
/// Tolerance for equalities between two independent routes.
pub const CROSS_TOL: f64 = 1e-10;
/// Tolerance on agreement between an optimizer and an analytic optimum.
pub const OPT_TOL: f64 = 1e-6;
