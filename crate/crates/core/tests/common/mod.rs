#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use qp_recur::recursion::{EventuallyPeriodic, ProblemSpec};
use qp_recur::{PadicContext, PadicNumber};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn ctx(p: u32, n: u32) -> PadicContext {
    PadicContext::new(p, n).unwrap()
}

/// `p^val * u` with a uniformly random unit `u`, known to the context precision.
pub fn random_with_valuation(ctx: PadicContext, rng: &mut StdRng, val: i64) -> PadicNumber {
    let len = (ctx.precision() as i64 - val) as usize;
    let mut digits: Vec<u32> = (0..len).map(|_| rng.gen_range(0..ctx.p())).collect();
    digits[0] = rng.gen_range(1..ctx.p());
    PadicNumber::from_digits(ctx, val, digits).unwrap()
}

/// Random value with valuation in `lo..=hi`, or exact zero with probability `zero_odds`.
pub fn random_padic(ctx: PadicContext, rng: &mut StdRng, lo: i64, hi: i64) -> PadicNumber {
    let v = rng.gen_range(lo..=hi);
    random_with_valuation(ctx, rng, v)
}

/// Uniform element of `D`: a unit with leading digit 1.
pub fn random_in_d(ctx: PadicContext, rng: &mut StdRng) -> PadicNumber {
    let len = ctx.precision() as usize;
    let mut digits: Vec<u32> = (0..len).map(|_| rng.gen_range(0..ctx.p())).collect();
    digits[0] = 1;
    PadicNumber::from_digits(ctx, 0, digits).unwrap()
}

pub fn random_param(ctx: PadicContext, rng: &mut StdRng) -> PadicNumber {
    random_padic(ctx, rng, 1, 3)
}

pub fn random_sequence(ctx: PadicContext, rng: &mut StdRng) -> EventuallyPeriodic {
    let pre = rng.gen_range(0..=3);
    let per = rng.gen_range(1..=3);
    EventuallyPeriodic::new(
        (0..pre).map(|_| random_param(ctx, rng)).collect(),
        (0..per).map(|_| random_param(ctx, rng)).collect(),
    )
    .unwrap()
}

pub fn random_spec(ctx: PadicContext, rng: &mut StdRng) -> ProblemSpec {
    let a = random_sequence(ctx, rng);
    let b = random_sequence(ctx, rng);
    let c = random_sequence(ctx, rng);
    ProblemSpec::new(ctx, a, b, c).unwrap()
}

// ---------------------------------------------------------------------------
// Exact-rational oracles. These use big rationals and never touch the
// library's digit arithmetic.

/// Exact rational `num/den`.
#[derive(Clone, Debug)]
pub struct Rat {
    pub num: BigInt,
    pub den: BigInt,
}

impl Rat {
    pub fn int(n: i128) -> Rat {
        Rat { num: BigInt::from(n), den: BigInt::one() }
    }

    fn reduce(num: BigInt, den: BigInt) -> Rat {
        let g = num.gcd(&den);
        let (mut num, mut den) = (num / &g, den / &g);
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        Rat { num, den }
    }

    pub fn add(&self, o: &Rat) -> Rat {
        Rat::reduce(&self.num * &o.den + &o.num * &self.den, &self.den * &o.den)
    }

    pub fn mul(&self, o: &Rat) -> Rat {
        Rat::reduce(&self.num * &o.num, &self.den * &o.den)
    }

    pub fn div_int(&self, n: i128) -> Rat {
        Rat::reduce(self.num.clone(), &self.den * BigInt::from(n))
    }
}

fn ext_gcd_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let (mut old_r, mut r) = (a.mod_floor(m), m.clone());
    let (mut old_s, mut s) = (BigInt::one(), BigInt::zero());
    while !r.is_zero() {
        let q = &old_r / &r;
        let nr = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, nr);
        let ns = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, ns);
    }
    assert!(old_r.is_one(), "not invertible");
    old_s.mod_floor(m)
}

/// Base-p digits (positions `0..k`) of a rational with nonnegative valuation.
pub fn rat_digits(r: &Rat, p: u32, k: usize) -> Vec<u32> {
    let m = BigInt::from(p).pow(k as u32);
    let pb = BigInt::from(p);
    assert!(!(&r.den % &pb).is_zero(), "oracle value is not p-integral");
    let mut x = (&r.num * ext_gcd_inverse(&r.den, &m)).mod_floor(&m);
    let mut out = Vec::with_capacity(k);
    for _ in 0..k {
        let (q, d) = x.div_mod_floor(&pb);
        out.push(u32::try_from(d).unwrap());
        x = q;
    }
    out
}

/// Terms summed by the oracles: generous, independent of the library's counts.
fn oracle_terms(v: i64, n: usize, p: u32) -> usize {
    // v(x^j/j!) >= j (v - 1/(p-1)); twice what that needs, plus slack
    let rate = v as f64 - 1.0 / (p as f64 - 1.0);
    (2.0 * n as f64 / rate) as usize + 10
}

/// `sum_{j} x^j / j!` as an exact rational.
pub fn exp_partial_sum(x: &Rat, v: i64, n: usize, p: u32) -> Rat {
    let mut sum = Rat::int(0);
    let mut term = Rat::int(1);
    for j in 0..=oracle_terms(v, n, p) {
        sum = sum.add(&term);
        term = term.mul(x).div_int(j as i128 + 1);
    }
    sum
}

/// `sum_{j>=1} (-1)^(j+1) y^j / j` as an exact rational.
pub fn log1p_partial_sum(y: &Rat, v: i64, n: usize, p: u32) -> Rat {
    let mut sum = Rat::int(0);
    let mut power = Rat::int(1);
    for j in 1..=oracle_terms(v, n, p) + n {
        power = power.mul(y);
        let term = power.div_int(j as i128);
        sum = if j % 2 == 1 { sum.add(&term) } else { sum.add(&term.mul(&Rat::int(-1))) };
    }
    sum
}
