//! Finite-dimensional laboratory for damped second-order problems with
//! dynamic boundary conditions.
//!
//! The crate builds discretised operator data ([`discretize`]), reduces it to
//! block generators with explicit similarity transforms ([`coupling`]),
//! evolves and probes the resulting semigroups ([`semigroup`]) and runs the
//! block-perturbation stability analysis ([`stability`]). Everything rests on
//! the dense complex kernels in [`matcore`].

// `!(x > 0.0)` is used on purpose: it rejects NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coupling;
pub mod discretize;
mod error;
pub mod matcore;
pub mod semigroup;
pub mod stability;

pub use error::{Error, Result};
pub use matcore::{CMat, C64};
