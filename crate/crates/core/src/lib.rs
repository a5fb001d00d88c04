//! Likelihood-ratio tests for multivariate normal means and covariance
//! structure, with diagnostics for when the chi-squared and Bartlett-corrected
//! approximations can be trusted in high dimension.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
mod error;
pub mod lrt;
pub mod montecarlo;
pub mod problem;
pub mod special;
pub mod stats;

pub use error::{Error, Result};
pub use problem::{Layout, TestKind, TestProblem};
