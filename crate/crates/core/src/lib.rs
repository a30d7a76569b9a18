//! Numerical toolkit for first-order nonsmooth analysis of extended-real
//! functions on R^n: subderivative estimators, subdifferential oracles,
//! semismoothness checkers, mean value tests and segment reconstruction.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod catalogue;
pub mod determination;
mod error;
pub mod ext;
pub mod semismooth;
pub mod function;
pub mod grid;
pub mod meanvalue;
pub mod subderiv;
pub mod subdiff;
pub mod suite;
pub mod vector;
pub mod verdict;

pub use error::{Error, Result};
pub use ext::ExtReal;
pub use function::{shared, ClosureFn, FnMeta, ScalarFn, SharedFn, Shifted};
pub use grid::{difference_quotient, geometric_grid, tail_bounds, Divergence, GridConfig, TailEstimate};
pub use vector::Vector;
pub use verdict::{Status, Verdict};
