//! Finite-precision p-adic arithmetic, the p-adic exponential and
//! logarithm, and solvers for the two-term recursion
//!
//! ```text
//! h_n = log_p[ f_{n+1}(exp_p h_{n+1}) * f_{n+2}(exp_p h_{n+2}) ],
//! f_k(x) = (a_k x + b_k) / (c_k + x)
//! ```
//!
//! over Q_p, where `a_k, b_k, c_k` are exponentials of parameters with
//! valuation at least one.

pub mod analytic;
pub mod cli;
mod digits;
pub mod error;
pub mod padic;
pub mod recursion;

pub use analytic::{exp_p, log_p};
pub use error::{Error, Result};
pub use padic::{PadicContext, PadicNumber, Valuation};
