//! The recursion `u_n = f_{n+1}(u_{n+1}) f_{n+2}(u_{n+2})` with
//! `u_k = exp_p(h_k)`, its factor maps, and the solvers built on them.

mod factor;
mod problem;
mod solver;
mod stationary;

pub use factor::{contraction_ratio, in_domain_d, MoebiusFactor};
pub use problem::{EventuallyPeriodic, ProblemFile, ProblemSpec, SequenceFile};
pub use solver::{
    backward_evaluate, check_case1, guaranteed_agreement, residual, solve, solve_with_tails, steps_for_digits,
    verify_contraction_chain, Certificate, ChainReport, ChainStep, SolutionReport,
};
pub use stationary::{iterate_from, solve_stationary, FixedPoint, StationaryMap};
