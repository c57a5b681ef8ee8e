//! The p-adic exponential and logarithm as truncated power series.
//!
//! Both series are summed term by term with the valuation of every term
//! tracked exactly: the term `x^n/n!` is kept as `p^(n v(x) - v(n!))` times a
//! unit modulo `p^N`, so dividing by `n!` never costs absolute precision and
//! no guard digits are needed. The number of terms comes from
//! [`exp_term_count`] and [`log_term_count`], which give the exact last term
//! whose valuation is still below the target precision.

use std::cmp::min;

use crate::digits;
use crate::error::{Error, Result};
use crate::padic::PadicNumber;

/// `v_p(n!)` by Legendre's formula `(n - s_p(n)) / (p - 1)`.
pub fn factorial_valuation(n: u64, p: u32) -> u64 {
    let p = p as u64;
    let mut digit_sum = 0;
    let mut m = n;
    while m > 0 {
        digit_sum += m % p;
        m /= p;
    }
    (n - digit_sum) / (p - 1)
}

fn split_p(mut n: u64, p: u32) -> (i64, u64) {
    let p = p as u64;
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    (v, n)
}

/// Largest `n` with `v(x^n / n!) < precision` when `v(x) = vx`; every later
/// term vanishes modulo `p^precision`. Returns 0 when only the constant term
/// survives.
///
/// Since `v(n!) <= (n - 1)/(p - 1)`, all terms with
/// `n >= ceil(N (p-1) / ((p-1) vx - 1))` have valuation at least `N`; the
/// range below that bound is then scanned exactly.
pub fn exp_term_count(vx: i64, precision: i64, p: u32) -> u64 {
    assert!(vx >= 1, "exp_term_count needs vx >= 1");
    if precision <= 0 {
        return 0;
    }
    let pm1 = p as i64 - 1;
    let denom = pm1 * vx - 1;
    let bound = (precision * pm1 + denom - 1) / denom;
    let mut last = 0u64;
    let mut fact_val = 0i64;
    for n in 1..bound.max(1) as u64 {
        fact_val += split_p(n, p).0;
        if n as i64 * vx - fact_val < precision {
            last = n;
        }
    }
    last
}

fn ilog(n: u64, p: u32) -> i64 {
    let mut k = 0;
    let mut m = n;
    while m >= p as u64 {
        m /= p as u64;
        k += 1;
    }
    k
}

/// Largest `n >= 1` with `v(y^n / n) = n vy - v_p(n) < precision`, or 0.
///
/// `n vy - floor(log_p n)` is nondecreasing and bounds the term valuation
/// from below, so the first `n` where it reaches the precision ends the scan.
pub fn log_term_count(vy: i64, precision: i64, p: u32) -> u64 {
    assert!(vy >= 1, "log_term_count needs vy >= 1");
    let mut last = 0u64;
    let mut n = 1u64;
    while n as i64 * vy - ilog(n, p) < precision {
        if n as i64 * vy - split_p(n, p).0 < precision {
            last = n;
        }
        n += 1;
    }
    last
}

/// Convergence balls, read with integer valuations (exact for odd `p`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainPredicate {
    /// `v(x) >= 1`, the ball where `exp_p` converges.
    Exp,
    /// `v(x - 1) >= 1`, the part of `B(1, 1)` used for `log_p`.
    Log,
    /// `v(x) >= 1`, the ball where the exp/log inversion identities hold.
    Inversion,
}

impl DomainPredicate {
    pub fn contains(&self, x: &PadicNumber) -> bool {
        match self {
            DomainPredicate::Exp | DomainPredicate::Inversion => x.valuation().is_at_least(1),
            DomainPredicate::Log => x.is_unit() && x.digits()[0] == 1,
        }
    }
}

pub fn in_exp_domain(x: &PadicNumber) -> bool {
    DomainPredicate::Exp.contains(x)
}

pub fn in_log_domain(x: &PadicNumber) -> bool {
    DomainPredicate::Log.contains(x)
}

/// Add `p^shift * unit` into `acc` (positions `0..acc.len()`).
fn accumulate(acc: &mut Vec<u32>, unit: &[u32], shift: usize, negate: bool, p: u32) {
    let len = acc.len();
    let mut shifted = vec![0u32; len];
    shifted[shift..].copy_from_slice(&unit[..len - shift]);
    if negate {
        digits::neg_assign(&mut shifted, p);
    }
    *acc = digits::add(acc, &shifted, p);
}

/// `exp_p(x) = sum x^n / n!` for `v(x) >= 1`, known to the absolute
/// precision of `x` (capped at the context precision).
pub fn exp_p(x: &PadicNumber) -> Result<PadicNumber> {
    if !in_exp_domain(x) {
        return Err(Error::domain(format!("exp_p needs v(x) >= 1, got v(x) = {}", x.valuation())));
    }
    let ctx = x.context();
    let p = ctx.p();
    let target = min(x.absolute_precision().unwrap_or(i64::MAX), ctx.precision() as i64);
    let vx = match x.valuation().finite() {
        Some(v) if v < target => v,
        _ => return Ok(PadicNumber::one(ctx).truncate(target)),
    };
    let len = target as usize;
    let u = x.unit_digits_padded(len);
    let mut sum = digits::from_int(1, p, len);
    let mut term = sum.clone();
    let mut term_val = 0i64;
    for n in 1..=exp_term_count(vx, target, p) {
        let (vn, rest) = split_p(n, p);
        term = digits::div_small(&digits::mul(&term, &u, p), rest, p);
        term_val += vx - vn;
        if term_val < target {
            accumulate(&mut sum, &term, term_val as usize, false, p);
        }
    }
    PadicNumber::from_digits(ctx, 0, sum)
}

/// `log_p(x) = sum (-1)^(n+1) (x-1)^n / n` for `v(x - 1) >= 1`.
pub fn log_p(x: &PadicNumber) -> Result<PadicNumber> {
    if !in_log_domain(x) {
        return Err(Error::domain(format!("log_p needs v(x - 1) >= 1, got x = {x}")));
    }
    let ctx = x.context();
    let p = ctx.p();
    let y = x.sub(&PadicNumber::one(ctx))?;
    let target = min(y.absolute_precision().unwrap_or(i64::MAX), ctx.precision() as i64);
    let vy = match y.valuation().finite() {
        Some(v) if v < target => v,
        _ => return Ok(PadicNumber::approx_zero(ctx, target)),
    };
    let len = target as usize;
    let u = y.unit_digits_padded(len);
    let mut sum = vec![0u32; len];
    let mut power = digits::from_int(1, p, len);
    for n in 1..=log_term_count(vy, target, p) {
        power = digits::mul(&power, &u, p);
        let (vn, rest) = split_p(n, p);
        let term_val = n as i64 * vy - vn;
        if term_val < target {
            let term = digits::div_small(&power, rest, p);
            accumulate(&mut sum, &term, term_val as usize, n % 2 == 0, p);
        }
    }
    PadicNumber::from_digits(ctx, 0, sum)
}
