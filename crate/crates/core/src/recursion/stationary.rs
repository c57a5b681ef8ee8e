//! Constant coefficients: a stationary solution `u_n = zeta` is a fixed
//! point of `f(u) = ((a u + b) / (c + u))^2`, which maps `D` into itself and
//! contracts it by at least one digit per application.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::padic::{PadicNumber, Valuation};
use crate::recursion::factor::{in_domain_d, MoebiusFactor};

/// `f(u) = g(u)^2` for the single factor map `g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StationaryMap {
    factor: MoebiusFactor,
}

impl StationaryMap {
    pub fn new(factor: MoebiusFactor) -> Self {
        StationaryMap { factor }
    }

    pub fn from_params(alpha: &PadicNumber, beta: &PadicNumber, gamma: &PadicNumber) -> Result<Self> {
        MoebiusFactor::from_params(alpha, beta, gamma).map(StationaryMap::new)
    }

    pub fn factor(&self) -> &MoebiusFactor {
        &self.factor
    }

    pub fn apply(&self, u: &PadicNumber) -> Result<PadicNumber> {
        let g = self.factor.apply(u)?;
        g.mul(&g)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixedPoint {
    #[serde(skip)]
    pub zeta: PadicNumber,
    /// `v(f(zeta) - zeta)`.
    pub residual: Valuation,
    pub iterations: u32,
    /// `v(u_{i+1} - u_i)` along the iteration.
    pub step_valuations: Vec<Valuation>,
}

/// Iterate `u <- f(u)` `target` times from `start` (which must lie in `D`).
///
/// Every iterate must stay in `D` and the final residual must reach
/// `target`; otherwise an internal error is returned.
pub fn iterate_from(map: &StationaryMap, start: &PadicNumber, target: i64) -> Result<FixedPoint> {
    let precision = start.context().precision() as i64;
    if target < 1 || target > precision {
        return Err(Error::usage(format!("target precision {target} must lie in 1..={precision}")));
    }
    if !in_domain_d(start) {
        return Err(Error::domain(format!("starting point {start} is not in D")));
    }
    let mut u = start.clone();
    let mut steps = Vec::with_capacity(target as usize);
    for i in 0..target {
        let next = map.apply(&u)?;
        if !in_domain_d(&next) {
            return Err(Error::internal(format!("iterate {} = {next} left D", i + 1)));
        }
        steps.push(next.sub(&u)?.valuation());
        u = next;
    }
    let residual = map.apply(&u)?.sub(&u)?.valuation();
    if !residual.is_at_least(target) {
        return Err(Error::internal(format!("fixed-point residual v(f(zeta) - zeta) = {residual} is below {target}")));
    }
    Ok(FixedPoint { zeta: u, residual, iterations: target as u32, step_valuations: steps })
}

/// The fixed point `zeta` of `f(u) = ((a u + b)/(c + u))^2` modulo `p^target`,
/// iterating from `u = 1`.
pub fn solve_stationary(
    alpha: &PadicNumber,
    beta: &PadicNumber,
    gamma: &PadicNumber,
    target: i64,
) -> Result<FixedPoint> {
    let map = StationaryMap::from_params(alpha, beta, gamma)?;
    iterate_from(&map, &PadicNumber::one(alpha.context()), target)
}
