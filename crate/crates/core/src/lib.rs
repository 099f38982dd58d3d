//! Weak values of pre- and post-selected quantum systems on
//! finite-dimensional Hilbert spaces.
//!
//! - [`hilbert`]: states, operators, spectral decomposition, tensor products.
//! - [`logic`]: the projector lattice (meet, join, orthocomplement) and
//!   effective-commutativity checks.
//! - [`weak`]: weak values, decomposition identities, and the commutator
//!   classification of a projector's weak value.
//! - [`scenarios`]: Hardy and three-box fixtures, JSON scenario files, reports.
//! - [`pointer`]: exact grid simulation of a weak measurement with a
//!   Gaussian pointer.
//!
//! Batch work (coupling sweeps, report rows) runs on rayon when the
//! `parallel` feature is enabled; see [`exec::Execution`].

pub mod error;
pub mod exec;
pub mod hilbert;
pub mod logic;
pub mod pointer;
pub mod sample;
pub mod scenarios;
pub mod weak;

pub use error::{Error, Result};
pub use exec::Execution;
pub use hilbert::{c64, Operator, OperatorKind, SpectralDecomposition, StateVector, C64};
