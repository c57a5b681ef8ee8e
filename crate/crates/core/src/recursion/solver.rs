//! Backward evaluation of `u_k = f_{k+1}(u_{k+1}) f_{k+2}(u_{k+2})`.
//!
//! Every factor map contracts `D` by at least one digit, so the value at the
//! start index forgets the tail it was seeded with. Because `u_k` depends on
//! two successors, the guaranteed agreement between two runs grows by one
//! digit per *two* backward steps: after `s` steps from tails in `D`,
//! `v(u_n - u'_n) >= 2 + floor(s / 2)`. See [`guaranteed_agreement`].

use serde::Serialize;

use crate::analytic::{exp_p, log_p};
use crate::error::{Error, Result};
use crate::padic::{PadicNumber, Valuation};
use crate::recursion::factor::in_domain_d;
use crate::recursion::problem::ProblemSpec;

/// Lower bound on `v(u_n - u'_n)` after `steps` backward steps from two
/// arbitrary tails in `D`.
///
/// With `e_k = v(u_k - u'_k)`, each step gives
/// `e_k >= 1 + min(e_{k+1}, e_{k+2})`, starting from `e >= 1` on the tail;
/// the bound follows by induction and is attained when every factor has
/// `v(a c - b) = 1`.
pub fn guaranteed_agreement(steps: u64) -> i64 {
    2 + (steps / 2) as i64
}

/// Smallest number of backward steps whose [`guaranteed_agreement`]
/// reaches `digits`.
pub fn steps_for_digits(digits: i64) -> u64 {
    (2 * (digits - 2)).max(1) as u64
}

/// Audit trail for one solve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    /// `v(a_k c_k - b_k)` for `k = n+1 ..= n+depth+2`: the digits each factor contracts by.
    pub factor_gains: Vec<Valuation>,
    /// `2 + floor(depth / 2)`.
    pub guaranteed_digits: i64,
    /// `v(u_k - u'_k)` for `k = n ..= n+depth` against a run from a second tail.
    pub tail_agreement: Option<Vec<Valuation>>,
}

impl Certificate {
    pub fn min_factor_gain(&self) -> Valuation {
        self.factor_gains.iter().copied().min().unwrap_or(Valuation::Infinite)
    }
}

/// Values `u_k`, `h_k = log_p(u_k)` for `k = n ..= n+depth+2`.
///
/// The last two entries are the tail the evaluation was seeded with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionReport {
    pub n: u64,
    pub depth: u64,
    /// Precision the start value is asserted to, when produced by [`solve`].
    pub target: Option<i64>,
    pub u_values: Vec<PadicNumber>,
    pub h_values: Vec<PadicNumber>,
    /// `v(u_k - f_{k+1}(u_{k+1}) f_{k+2}(u_{k+2}))` for `k = n ..= n+depth`.
    pub residual_valuations: Vec<Valuation>,
    pub certificate: Certificate,
}

impl SolutionReport {
    pub fn u(&self, k: u64) -> Option<&PadicNumber> {
        k.checked_sub(self.n).and_then(|i| self.u_values.get(i as usize))
    }

    pub fn h(&self, k: u64) -> Option<&PadicNumber> {
        k.checked_sub(self.n).and_then(|i| self.h_values.get(i as usize))
    }

    /// `h_n`, the value at the start index.
    pub fn h_start(&self) -> &PadicNumber {
        &self.h_values[0]
    }

    pub fn u_start(&self) -> &PadicNumber {
        &self.u_values[0]
    }

    pub fn min_residual(&self) -> Valuation {
        self.residual_valuations.iter().copied().min().unwrap_or(Valuation::Infinite)
    }
}

fn step(spec: &ProblemSpec, k: u64, next: &PadicNumber, after: &PadicNumber) -> Result<PadicNumber> {
    spec.factor(k + 1).apply(next)?.mul(&spec.factor(k + 2).apply(after)?)
}

/// Seed `u_{n+depth+1}, u_{n+depth+2}` with `tail` and evaluate down to `u_n`.
pub fn backward_evaluate(
    spec: &ProblemSpec,
    n: u64,
    depth: u64,
    tail: (&PadicNumber, &PadicNumber),
) -> Result<SolutionReport> {
    if n == 0 {
        return Err(Error::usage("indices start at 1"));
    }
    if depth == 0 {
        return Err(Error::usage("depth must be at least 1"));
    }
    for (i, t) in [tail.0, tail.1].into_iter().enumerate() {
        if !in_domain_d(t) {
            return Err(Error::domain(format!(
                "tail value u_{} = {t} is not in D (need |u| = 1 and v(u - 1) >= 1)",
                n + depth + 1 + i as u64
            )));
        }
    }
    let len = depth as usize + 3;
    let mut u = vec![PadicNumber::zero(spec.context()); len];
    u[len - 2] = tail.0.clone();
    u[len - 1] = tail.1.clone();
    for j in (0..len - 2).rev() {
        let k = n + j as u64;
        let value = step(spec, k, &u[j + 1], &u[j + 2])?;
        if !in_domain_d(&value) {
            return Err(Error::internal(format!("u_{k} = {value} left D")));
        }
        u[j] = value;
    }
    let h = u.iter().map(log_p).collect::<Result<Vec<_>>>()?;
    // re-evaluated from h through exp_p, not from the stored u
    let residuals = residual(spec, &h, n)?;
    let factor_gains = (n + 1..=n + depth + 2).map(|k| spec.factor(k).lipschitz_valuation()).collect();
    Ok(SolutionReport {
        n,
        depth,
        target: None,
        u_values: u,
        h_values: h,
        residual_valuations: residuals,
        certificate: Certificate { factor_gains, guaranteed_digits: guaranteed_agreement(depth), tail_agreement: None },
    })
}

/// `h_n` modulo `p^target`: the unique solution's value if a solution exists.
///
/// Runs [`backward_evaluate`] with [`steps_for_digits`]`(target)` steps from
/// the tail `(1, 1)` and again from `(exp_p(p), exp_p(p))`; the two runs
/// must agree at index `n` to `target` digits, or the contraction argument
/// was broken and an internal error is returned.
pub fn solve(spec: &ProblemSpec, n: u64, target: i64) -> Result<SolutionReport> {
    let ctx = spec.context();
    let one = PadicNumber::one(ctx);
    let other = exp_p(&PadicNumber::from_integer(ctx.p() as i128, ctx))?;
    solve_with_tails(spec, n, target, (&one, &one), (&other, &other))
}

/// [`solve`] with explicit primary and cross-check tails.
pub fn solve_with_tails(
    spec: &ProblemSpec,
    n: u64,
    target: i64,
    tail: (&PadicNumber, &PadicNumber),
    check_tail: (&PadicNumber, &PadicNumber),
) -> Result<SolutionReport> {
    let precision = spec.context().precision() as i64;
    if target < 1 || target > precision {
        return Err(Error::usage(format!("target precision {target} must lie in 1..={precision}")));
    }
    let depth = steps_for_digits(target);
    let mut report = backward_evaluate(spec, n, depth, tail)?;
    let check = backward_evaluate(spec, n, depth, check_tail)?;
    let agreement = report.u_values[..=depth as usize]
        .iter()
        .zip(&check.u_values)
        .map(|(a, b)| a.sub(b).map(|d| d.valuation()))
        .collect::<Result<Vec<_>>>()?;
    if !agreement[0].is_at_least(target) {
        return Err(Error::internal(format!(
            "runs from different tails disagree at u_{n}: v = {} < {target}",
            agreement[0]
        )));
    }
    report.target = Some(target);
    report.certificate.tail_agreement = Some(agreement);
    Ok(report)
}

/// `v(u_k - f_{k+1}(u_{k+1}) f_{k+2}(u_{k+2}))` with `u = exp_p(h)`, for
/// each `k = n ..= n + len - 3` of the window `h_n, h_{n+1}, ...`.
pub fn residual(spec: &ProblemSpec, h_window: &[PadicNumber], n: u64) -> Result<Vec<Valuation>> {
    if h_window.len() < 3 {
        return Err(Error::usage(format!("residual needs at least 3 consecutive values, got {}", h_window.len())));
    }
    if n == 0 {
        return Err(Error::usage("indices start at 1"));
    }
    let u = h_window
        .iter()
        .enumerate()
        .map(|(i, h)| exp_p(h).map_err(|_| Error::domain(format!("h_{} = {h} violates v(h) >= 1", n + i as u64))))
        .collect::<Result<Vec<_>>>()?;
    (0..u.len() - 2)
        .map(|j| {
            let rhs = step(spec, n + j as u64, &u[j + 1], &u[j + 2])?;
            Ok(u[j].sub(&rhs)?.valuation())
        })
        .collect()
}

/// `a_k + b_k = c_k + 1` modulo `p^N` for `k = 1 ..= horizon`, in which case
/// `u_k = 1` solves the recursion.
pub fn check_case1(spec: &ProblemSpec, horizon: u64) -> Result<bool> {
    let needed = (spec.preamble_len() + spec.period_len()) as u64;
    if horizon < needed {
        return Err(Error::usage(format!("horizon {horizon} is shorter than preamble plus period ({needed})")));
    }
    let precision = spec.context().precision() as i64;
    let one = PadicNumber::one(spec.context());
    for k in 1..=horizon {
        let f = spec.factor(k);
        let lhs = f.a().add(f.b())?;
        let rhs = f.c().add(&one)?;
        if !lhs.sub(&rhs)?.valuation().is_at_least(precision) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One index of a contraction-chain check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainStep {
    pub index: u64,
    /// `v(u_k - v_k)`.
    pub difference: Valuation,
    /// `min(v(u_{k+1} - v_{k+1}), v(u_{k+2} - v_{k+2}))`.
    pub successors: Valuation,
    pub holds: bool,
    /// `difference - successors` when both are exact.
    pub gain: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainReport {
    pub steps: Vec<ChainStep>,
    pub all_hold: bool,
    /// Smallest exact gain observed; `None` when every difference ran out of precision.
    pub min_gain: Option<i64>,
}

/// Check `v(u_k - v_k) >= 1 + min(v(u_{k+1} - v_{k+1}), v(u_{k+2} - v_{k+2}))`
/// for two windows `h`, `s` starting at index `n`, with `u = exp_p(h)`,
/// `v = exp_p(s)`.
///
/// Where the successors agree to the working precision, the requirement is
/// capped at what the difference itself can show.
pub fn verify_contraction_chain(
    spec: &ProblemSpec,
    h_window: &[PadicNumber],
    s_window: &[PadicNumber],
    n: u64,
) -> Result<ChainReport> {
    if h_window.len() != s_window.len() || h_window.len() < 3 {
        return Err(Error::usage("windows must have equal length of at least 3"));
    }
    let diffs = h_window
        .iter()
        .zip(s_window)
        .map(|(h, s)| {
            let d = exp_p(h)?.sub(&exp_p(s)?)?;
            Ok((d.valuation(), d.absolute_precision().unwrap_or(i64::MAX)))
        })
        .collect::<Result<Vec<_>>>()?;
    if let Some(bad) = h_window.iter().chain(s_window).find(|x| x.p() != spec.context().p()) {
        return Err(Error::usage(format!("window value {bad} is not in Q_{}", spec.context().p())));
    }
    let mut steps = Vec::with_capacity(diffs.len() - 2);
    for j in 0..diffs.len() - 2 {
        let (difference, known) = diffs[j];
        let successors = diffs[j + 1].0.min(diffs[j + 2].0);
        let required = successors.lower_bound().saturating_add(1).min(known);
        let gain = match (difference, successors) {
            (Valuation::Finite(d), Valuation::Finite(s)) => Some(d - s),
            _ => None,
        };
        steps.push(ChainStep {
            index: n + j as u64,
            difference,
            successors,
            holds: difference.is_at_least(required),
            gain,
        });
    }
    Ok(ChainReport {
        all_hold: steps.iter().all(|s| s.holds),
        min_gain: steps.iter().filter_map(|s| s.gain).min(),
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::PadicContext;

    fn ctx() -> PadicContext {
        PadicContext::new(5, 20).unwrap()
    }

    fn int(n: i128) -> PadicNumber {
        PadicNumber::from_integer(n, ctx())
    }

    fn case1() -> ProblemSpec {
        ProblemSpec::constant(int(5), int(0), int(5)).unwrap()
    }

    #[test]
    fn agreement_bound_recurrence() {
        // e_tail = 1, e_k = 1 + min(e_{k+1}, e_{k+2})
        for steps in 1..40u64 {
            let mut e = vec![1i64, 1];
            for _ in 0..=steps {
                let next = 1 + e[e.len() - 1].min(e[e.len() - 2]);
                e.push(next);
            }
            assert_eq!(*e.last().unwrap(), guaranteed_agreement(steps), "steps = {steps}");
        }
        for k in 1..30 {
            assert!(guaranteed_agreement(steps_for_digits(k)) >= k);
        }
    }

    #[test]
    fn case1_backward_is_identically_one() {
        let spec = case1();
        let one = int(1);
        let r = backward_evaluate(&spec, 1, 6, (&one, &one)).unwrap();
        assert!(r.u_values.iter().all(|u| u == &one));
        assert!(r.h_values.iter().all(|h| h.valuation().is_at_least(20)));
        assert!(r.min_residual().is_at_least(20));
        assert!(check_case1(&spec, 2).unwrap());
    }

    #[test]
    fn backward_rejects_tails_outside_d() {
        let spec = case1();
        let bad = int(2);
        let one = int(1);
        assert!(matches!(backward_evaluate(&spec, 1, 3, (&bad, &one)), Err(Error::Domain(_))));
        assert!(matches!(backward_evaluate(&spec, 0, 3, (&one, &one)), Err(Error::Usage(_))));
        assert!(matches!(solve(&spec, 1, 21), Err(Error::Usage(_))));
    }

    #[test]
    fn residual_window_checks() {
        let spec = case1();
        let zero = PadicNumber::zero(ctx());
        assert!(matches!(residual(&spec, &[zero.clone(), zero.clone()], 1), Err(Error::Usage(_))));
        let r = residual(&spec, &[zero.clone(), zero.clone(), zero.clone(), zero.clone()], 1).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.iter().all(|v| v.is_at_least(20)));
        assert!(matches!(residual(&spec, &[int(1), zero.clone(), zero], 1), Err(Error::Domain(_))));
    }

    #[test]
    fn case1_fails_when_period_breaks_it() {
        let c = ctx();
        use crate::recursion::problem::EventuallyPeriodic;
        let alpha = EventuallyPeriodic::new(vec![int(5)], vec![int(10), int(15)]).unwrap();
        let beta = EventuallyPeriodic::constant(PadicNumber::zero(c));
        let gamma_ok = alpha.clone();
        let gamma_bad = EventuallyPeriodic::new(vec![int(5)], vec![int(10), int(15 + 5)]).unwrap();
        let ok = ProblemSpec::new(c, alpha.clone(), beta.clone(), gamma_ok).unwrap();
        let bad = ProblemSpec::new(c, alpha, beta, gamma_bad).unwrap();
        assert!(check_case1(&ok, 3).unwrap());
        assert!(!check_case1(&bad, 3).unwrap());
        assert!(matches!(check_case1(&bad, 2), Err(Error::Usage(_))));
    }
}
