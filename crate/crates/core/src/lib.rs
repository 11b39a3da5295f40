//! Numerical verification toolkit for the Riesz convolution equation
//! ∫|x−y|^{−λ} f(y) dy = f(x)^{p−1}, p = 2n/(2n−λ).

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod identities;
pub mod interp;
pub mod jet;
pub mod quadrature;
pub mod radial;
pub mod regularity;
pub mod report;
pub mod solutions;
pub mod solver;
pub mod specfun;
pub mod verdict;

pub use error::{Error, Result};
pub use verdict::Verdict;
