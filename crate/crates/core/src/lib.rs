//! Exact q-expansions of modular forms and the Schwarzian equation
//! `{h, tau} = s E_4(tau)`: Frobenius solutions at the cusp, a catalog of
//! modular solutions, the classification of admissible `s`, and numerical
//! corroboration on the upper half-plane.

pub mod catalog;
pub mod classify;
pub mod cli;
pub mod error;
pub mod forms;
pub mod frobenius;
mod json;
pub mod numeric;
pub mod qseries;
pub mod schwarzian;
pub mod selftest;

pub use error::{Error, Result};
pub use qseries::{Exponent, QSeries, Rat};
