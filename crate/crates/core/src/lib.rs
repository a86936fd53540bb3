//! Baskakov, Baskakov-Durrmeyer and boosted Baskakov-Durrmeyer operators.
//!
//! The crate has two independent computational routes:
//!
//! * floating-point evaluation of the operators on arbitrary functions
//!   ([`basis`], [`quad`], [`operators`]), and
//! * an exact rational oracle for every polynomial moment ([`exact`]),
//!   against which the closed-form moment tables in [`moments_paper`] and the
//!   floating-point route are both checked.
//!
//! [`analysis`] turns the two into convergence-order and Voronovskaja studies,
//! and [`cli`] exposes everything as CSV-producing subcommands.

pub mod analysis;
pub mod basis;
pub mod cli;
pub mod error;
pub mod exact;
pub mod moments_paper;
pub mod operators;
pub mod quad;
mod sum;

pub use error::{Error, Result};
pub use exact::BigRat;
pub use operators::{Evaluator, OperatorKind, RationalFn, SequenceSpec, TestFunction};
